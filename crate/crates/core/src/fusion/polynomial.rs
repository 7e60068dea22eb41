use serde::Serialize;

/// `(1−p_fail)^successes · p_fail^fails · (η²)^(successes+fails) · (1−η²)^losses`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial {
    pub successes: u32,
    pub fails: u32,
    pub losses: u32,
}

impl Monomial {
    pub fn evaluate(&self, eta: f64, p_fail: f64) -> f64 {
        let t = eta * eta;
        (1.0 - p_fail).powi(self.successes as i32)
            * p_fail.powi(self.fails as i32)
            * t.powi((self.successes + self.fails) as i32)
            * (1.0 - t).powi(self.losses as i32)
    }
}

/// Sum of pattern monomials, kept exactly as integer multiplicities.
///
/// `counts[k][s]` is the number of summed patterns with `k` surviving pairs of
/// which `s` succeeded, so the polynomial is
/// `Σ counts[k][s] (1−p)^s p^(k−s) (η²)^k (1−η²)^(n−k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SuccessPolynomial {
    pub n: usize,
    pub counts: Vec<Vec<u64>>,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl SuccessPolynomial {
    pub fn zero(n: usize) -> Self {
        SuccessPolynomial {
            n,
            counts: (0..=n).map(|k| vec![0; k + 1]).collect(),
        }
    }

    pub fn add(&mut self, m: Monomial) {
        let k = (m.successes + m.fails) as usize;
        self.counts[k][m.successes as usize] += 1;
    }

    pub fn add_counts(&mut self, k: usize, s: usize, count: u64) {
        self.counts[k][s] += count;
    }

    /// Sum over all `3^n` patterns; equals 1 identically.
    pub fn all_patterns(n: usize) -> Self {
        let mut p = Self::zero(n);
        for k in 0..=n {
            for s in 0..=k {
                p.counts[k][s] = binomial(n, k) * binomial(k, s);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().flatten().all(|&c| c == 0)
    }

    pub fn evaluate(&self, eta: f64, p_fail: f64) -> f64 {
        let t = eta * eta;
        let mut total = 0.0;
        for (k, row) in self.counts.iter().enumerate() {
            let mut ck = 0.0;
            for (s, &c) in row.iter().enumerate() {
                if c != 0 {
                    ck += c as f64 * (1.0 - p_fail).powi(s as i32) * p_fail.powi((k - s) as i32);
                }
            }
            if ck != 0.0 {
                total += ck * t.powi(k as i32) * (1.0 - t).powi((self.n - k) as i32);
            }
        }
        total
    }

    /// Coefficients `c_j` of `Σ_j c_j η^(2j)` at a fixed `p_fail`.
    pub fn eta_squared_coefficients(&self, p_fail: f64) -> Vec<f64> {
        let mut coeffs = vec![0.0; self.n + 1];
        for (k, row) in self.counts.iter().enumerate() {
            let ck: f64 = row
                .iter()
                .enumerate()
                .map(|(s, &c)| {
                    c as f64 * (1.0 - p_fail).powi(s as i32) * p_fail.powi((k - s) as i32)
                })
                .sum();
            if ck == 0.0 {
                continue;
            }
            // (η²)^k (1−η²)^(n−k) = Σ_j C(n−k, j) (−1)^j (η²)^(k+j)
            let m = self.n - k;
            for j in 0..=m {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                coeffs[k + j] += sign * binomial(m, j) as f64 * ck;
            }
        }
        coeffs
    }
}
