//! Pauli-error decoding of recovered logical parities.
//!
//! Each fused photon suffers a single-qubit depolarizing error. A measured
//! parity `XX` flips when the pair's Z components have odd weight, `ZZ` when
//! the X components do, so every paired operator `P⊗P` reads out the XOR of
//! the per-pair flips selected by its letters. For a pattern, the recovered
//! logical representative and a basis of the available paired stabilizers
//! are linear functions of those flips; the decoder picks, per syndrome, the
//! more likely logical value.

use rayon::prelude::*;
use serde::Serialize;

use super::{check_code_cap, full_mask, FusionSpec, MeasurementPattern, Monomial, DEFAULT_CODE_CAP};
use crate::code::{GraphCode, LogicalBasis};
use crate::error::{Error, Result};
use crate::pauli::{independent_subset, PauliOperator};

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    Ok(())
}

/// Marginal flip probability of one measured two-photon parity,
/// `4(ε/3·(1−ε) + ε²/9)`.
pub fn pauli_flip_probability(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(4.0 * (epsilon / 3.0 * (1.0 - epsilon) + epsilon * epsilon / 9.0))
}

/// Joint law of the `(XX flip, ZZ flip)` pair for one fused pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointFlipDistribution {
    /// `p[xx][zz]`.
    pub p: [[f64; 2]; 2],
}

impl JointFlipDistribution {
    pub fn flip_xx(&self) -> f64 {
        self.p[1][0] + self.p[1][1]
    }

    pub fn flip_zz(&self) -> f64 {
        self.p[0][1] + self.p[1][1]
    }
}

/// Enumerates the 16 two-photon Pauli errors (I w.p. `1−ε`, X/Y/Z w.p. `ε/3`).
pub fn joint_flip_distribution(epsilon: f64) -> Result<JointFlipDistribution> {
    check_epsilon(epsilon)?;
    // (x, z, probability) for I, X, Y, Z.
    let single = [
        (0usize, 0usize, 1.0 - epsilon),
        (1, 0, epsilon / 3.0),
        (1, 1, epsilon / 3.0),
        (0, 1, epsilon / 3.0),
    ];
    let mut p = [[0.0; 2]; 2];
    for &(x1, z1, p1) in &single {
        for &(x2, z2, p2) in &single {
            p[z1 ^ z2][x1 ^ x2] += p1 * p2;
        }
    }
    Ok(JointFlipDistribution { p })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decoding {
    /// Maximum-likelihood correction from the available stabilizers.
    MaximumLikelihood,
    /// Raw parity of the logical representative.
    Uncorrected,
}

/// ε-independent linear structure of one recovering pattern.
#[derive(Debug, Clone)]
struct PatternStructure {
    pattern: MeasurementPattern,
    representative: PauliOperator,
    /// Number of syndrome bits; the logical bit sits at position `rank`.
    rank: usize,
    /// Per fused pair with any contribution: output bits toggled by an XX flip
    /// and by a ZZ flip.
    columns: Vec<(u32, u32)>,
}

impl PatternStructure {
    fn build(
        pattern: MeasurementPattern,
        w: u64,
        logicals: &[PauliOperator],
        stabilizers: &[PauliOperator],
    ) -> Option<Self> {
        let avail = pattern.available(w);
        let representative = *logicals.iter().find(|l| l.qubitwise_commutes(&avail))?;
        let measured: Vec<PauliOperator> = stabilizers
            .iter()
            .filter(|s| !s.is_identity() && s.qubitwise_commutes(&avail))
            .copied()
            .collect();
        let basis = independent_subset(&measured);
        let rank = basis.len();
        let rows: Vec<&PauliOperator> = basis.iter().chain(std::iter::once(&representative)).collect();
        let columns = (0..pattern.n)
            .filter_map(|j| {
                let mut cx = 0u32;
                let mut cz = 0u32;
                for (r, row) in rows.iter().enumerate() {
                    // An X (or Y) letter reads the XX parity, Z (or Y) reads ZZ.
                    if row.x_bits() >> j & 1 == 1 {
                        cx |= 1 << r;
                    }
                    if row.z_bits() >> j & 1 == 1 {
                        cz |= 1 << r;
                    }
                }
                (cx | cz != 0).then_some((cx, cz))
            })
            .collect();
        Some(PatternStructure {
            pattern,
            representative,
            rank,
            columns,
        })
    }

    fn error_rate(&self, flips: &JointFlipDistribution, decoding: Decoding) -> f64 {
        let size = 1usize << (self.rank + 1);
        let mut dist = vec![0.0; size];
        dist[0] = 1.0;
        let mut next = vec![0.0; size];
        for &(cx, cz) in &self.columns {
            next.iter_mut().for_each(|v| *v = 0.0);
            let shifts = [
                (0usize, flips.p[0][0]),
                (cx as usize, flips.p[1][0]),
                (cz as usize, flips.p[0][1]),
                ((cx ^ cz) as usize, flips.p[1][1]),
            ];
            for (v, &pv) in dist.iter().enumerate() {
                if pv == 0.0 {
                    continue;
                }
                for &(shift, ps) in &shifts {
                    next[v ^ shift] += pv * ps;
                }
            }
            std::mem::swap(&mut dist, &mut next);
        }
        let logical = 1usize << self.rank;
        let syndromes = 0..logical;
        match decoding {
            Decoding::MaximumLikelihood => syndromes
                .map(|s| dist[s].min(dist[s | logical]))
                .sum(),
            Decoding::Uncorrected => syndromes.map(|s| dist[s | logical]).sum(),
        }
    }
}

/// Per-pattern decoding data for one code, failure-basis vector and logical
/// basis; evaluate at any `ε` without rebuilding.
#[derive(Debug, Clone)]
pub struct SyndromeDecoder {
    n: usize,
    patterns: Vec<PatternStructure>,
}

impl SyndromeDecoder {
    pub fn new(code: &GraphCode, w: u64, basis: LogicalBasis) -> Result<Self> {
        let n = code.n_code();
        check_code_cap(n, DEFAULT_CODE_CAP)?;
        if w & !full_mask(n) != 0 {
            return Err(Error::Parse(format!("failure-basis vector {w:#b} too long")));
        }
        let logicals = code.logical_set(basis)?;
        let stabilizers = code.stabilizers().enumerate()?;
        let patterns = MeasurementPattern::all(n)
            .filter_map(|p| PatternStructure::build(p, w, &logicals, &stabilizers))
            .collect();
        Ok(SyndromeDecoder { n, patterns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    /// `p_{i,error}` for each recovering pattern, in pattern order.
    pub fn pattern_errors(&self, epsilon: f64, decoding: Decoding) -> Result<Vec<f64>> {
        let flips = joint_flip_distribution(epsilon)?;
        Ok(self
            .patterns
            .par_iter()
            .map(|p| p.error_rate(&flips, decoding))
            .collect())
    }

    /// Probability-weighted average of the per-pattern logical error rates;
    /// zero when no pattern recovers the parity with nonzero probability.
    pub fn logical_error_rate(
        &self,
        eta: f64,
        p_fail: f64,
        epsilon: f64,
        decoding: Decoding,
    ) -> Result<f64> {
        let errors = self.pattern_errors(epsilon, decoding)?;
        Ok(self.weighted(&errors, eta, p_fail))
    }

    pub fn weighted(&self, errors: &[f64], eta: f64, p_fail: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (p, &e) in self.patterns.iter().zip(errors) {
            let pi = p.pattern.monomial().evaluate(eta, p_fail);
            num += pi * e;
            den += pi;
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }

    fn records(&self, errors: &[f64]) -> Vec<PatternError> {
        self.patterns
            .iter()
            .zip(errors)
            .map(|(p, &e)| PatternError {
                pattern: p.pattern.to_string(),
                monomial: p.pattern.monomial(),
                representative: p.representative.to_string(),
                measured_stabilizer_rank: p.rank,
                error: e,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternError {
    pub pattern: String,
    pub monomial: Monomial,
    pub representative: String,
    pub measured_stabilizer_rank: usize,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub epsilon: f64,
    pub spec: FusionSpec,
    pub decoding: Decoding,
    pub p_error_xx: f64,
    pub p_error_zz: f64,
    pub patterns_xx: Vec<PatternError>,
    pub patterns_zz: Vec<PatternError>,
}

impl ErrorReport {
    pub fn average(&self) -> f64 {
        (self.p_error_xx + self.p_error_zz) / 2.0
    }
}

pub fn error_analysis(
    code: &GraphCode,
    spec: &FusionSpec,
    epsilon: f64,
    decoding: Decoding,
) -> Result<ErrorReport> {
    check_epsilon(epsilon)?;
    let spec = FusionSpec::new(spec.eta, spec.p_fail, spec.w, code.n_code())?;
    let dx = SyndromeDecoder::new(code, spec.w, LogicalBasis::X)?;
    let dz = SyndromeDecoder::new(code, spec.w, LogicalBasis::Z)?;
    let ex = dx.pattern_errors(epsilon, decoding)?;
    let ez = dz.pattern_errors(epsilon, decoding)?;
    Ok(ErrorReport {
        epsilon,
        spec,
        decoding,
        p_error_xx: dx.weighted(&ex, spec.eta, spec.p_fail),
        p_error_zz: dz.weighted(&ez, spec.eta, spec.p_fail),
        patterns_xx: dx.records(&ex),
        patterns_zz: dz.records(&ez),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphState;

    #[test]
    fn flip_probability_examples() {
        assert_eq!(pauli_flip_probability(0.0).unwrap(), 0.0);
        assert!((pauli_flip_probability(0.75).unwrap() - 0.5).abs() < 1e-15);
        let expected = 4.0 * (0.01 / 3.0 * 0.99 + 0.0001 / 9.0);
        assert!((pauli_flip_probability(0.01).unwrap() - expected).abs() < 1e-18);
        assert!((expected - 0.013244444444444445).abs() < 1e-15);
        assert!(pauli_flip_probability(1.5).is_err());
    }

    #[test]
    fn joint_marginals_match_formula() {
        let d0 = joint_flip_distribution(0.0).unwrap();
        assert_eq!(d0.p[0][0], 1.0);
        for &e in &[0.001, 0.01, 0.1] {
            let d = joint_flip_distribution(e).unwrap();
            let p = pauli_flip_probability(e).unwrap();
            assert!((d.flip_xx() - p).abs() < 1e-15);
            assert!((d.flip_zz() - p).abs() < 1e-15);
            let total: f64 = d.p.iter().flatten().sum();
            assert!((total - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bare_code_has_nothing_to_correct() {
        let code =
            GraphCode::from_progenitor(&GraphState::from_edges(2, &[[0, 1]], 0).unwrap()).unwrap();
        let spec = FusionSpec::standard(1.0, 0, 1).unwrap();
        let r = error_analysis(&code, &spec, 0.02, Decoding::MaximumLikelihood).unwrap();
        let p = pauli_flip_probability(0.02).unwrap();
        assert!((r.p_error_xx - p).abs() < 1e-15);
        assert!((r.p_error_zz - p).abs() < 1e-15);
        let r0 = error_analysis(&code, &spec, 0.0, Decoding::MaximumLikelihood).unwrap();
        assert_eq!(r0.p_error_xx, 0.0);
        assert_eq!(r0.p_error_zz, 0.0);
    }
}
