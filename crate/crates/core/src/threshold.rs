//! Loss thresholds of concatenated fusion networks.
//!
//! The outer-code thresholds (`p̃_erase`, `p̃^B(B)`, `ε_M(p̄_erase)`) are inputs:
//! they belong to the outer fault-tolerant fusion network, not to the inner
//! code analysed here.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{GraphCode, LogicalBasis};
use crate::enumerate::enumerate_single_emitter_progenitors;
use crate::error::{Error, Result};
use crate::fusion::{
    check_code_cap, success_polynomials, Decoding, RecoveryTable, SuccessPolynomial,
    SyndromeDecoder, DEFAULT_CODE_CAP,
};

/// Bisection tolerance on the loss `γ = 1 − η`.
pub const GAMMA_TOLERANCE: f64 = 1e-9;
/// Bisection tolerance on the depolarizing rate `ε`.
pub const EPSILON_TOLERANCE: f64 = 1e-8;
/// Grid used to check monotonicity and to bracket the threshold.
pub const GAMMA_GRID_POINTS: usize = 200;

/// Loss threshold of the once-boosted physical fusion baseline.
pub const BOOSTED_BASELINE_LOSS: f64 = 0.0052;

/// Erasure threshold of the outer code obtained by inverting the boosted
/// baseline: `1 − (1 − p_fail/2) η^(2 + n_ancilla)` at boost level 1
/// (`p_fail = 1/4`, two ancilla photons) and 0.52 % loss.
pub fn derived_randomized_threshold() -> f64 {
    let (p_fail, n_ancilla) = boost_level(1);
    1.0 - (1.0 - p_fail / 2.0) * (1.0 - BOOSTED_BASELINE_LOSS).powi(2 + n_ancilla as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasMode {
    Randomized,
    Passive,
}

impl std::fmt::Display for BiasMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BiasMode::Randomized => "randomized",
            BiasMode::Passive => "passive",
        })
    }
}

/// Piecewise-linear table with sorted unique abscissae, clamped at both ends.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("table has no points".into()));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::Config(format!(
                    "table abscissae must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Config("table entries must be finite".into()));
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let i = pts.partition_point(|p| p.0 <= x);
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasConfig {
    pub mode: BiasMode,
    pub p_tilde_randomized: f64,
    /// `B ↦ p̃^B`.
    pub p_tilde_biased: PiecewiseLinear,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorThresholdConfig {
    /// `p̄_erase ↦ ε_M`.
    pub epsilon_m: PiecewiseLinear,
}

/// On-disk configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfigFile {
    pub p_tilde_randomized: f64,
    pub p_tilde_biased: Vec<[f64; 2]>,
    #[serde(default, rename = "epsilon_M")]
    pub epsilon_m: Vec<[f64; 2]>,
}

impl ThresholdConfigFile {
    pub fn parse(s: &str) -> Result<Self> {
        let cfg: ThresholdConfigFile =
            serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.bias(BiasMode::Randomized)?;
        cfg.error_thresholds()?;
        Ok(cfg)
    }

    /// Default configuration: `p̃_erase` from [`derived_randomized_threshold`];
    /// the passive table is a placeholder that equals `p̃_erase` at `B = 1` and
    /// rises linearly to twice `p̃_erase` at `B = 0`. Replace both with the outer
    /// code's published values for quantitative passive-bias results.
    pub fn default_config() -> Self {
        let p = derived_randomized_threshold();
        ThresholdConfigFile {
            p_tilde_randomized: p,
            p_tilde_biased: vec![[0.0, 2.0 * p], [1.0, p]],
            epsilon_m: Vec::new(),
        }
    }

    pub fn bias(&self, mode: BiasMode) -> Result<BiasConfig> {
        let p = self.p_tilde_randomized;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Config(format!(
                "p_tilde_randomized = {p} must lie in (0, 1)"
            )));
        }
        let points: Vec<(f64, f64)> = self.p_tilde_biased.iter().map(|&[b, t]| (b, t)).collect();
        for &(b, t) in &points {
            if !(0.0..=1.0).contains(&b) || !(t > 0.0 && t < 1.0) {
                return Err(Error::Config(format!(
                    "p_tilde_biased entry [{b}, {t}] needs B in [0,1] and threshold in (0,1)"
                )));
            }
        }
        Ok(BiasConfig {
            mode,
            p_tilde_randomized: p,
            p_tilde_biased: PiecewiseLinear::new(points)?,
        })
    }

    /// `None` when the file carries no `epsilon_M` table.
    pub fn error_thresholds(&self) -> Result<Option<ErrorThresholdConfig>> {
        if self.epsilon_m.is_empty() {
            return Ok(None);
        }
        let points: Vec<(f64, f64)> = self.epsilon_m.iter().map(|&[p, e]| (p, e)).collect();
        for &(p, e) in &points {
            if !(0.0..=self.p_tilde_randomized + 1e-12).contains(&p) || e < 0.0 {
                return Err(Error::Config(format!(
                    "epsilon_M entry [{p}, {e}] needs p in [0, p_tilde_randomized] and ε_M ≥ 0"
                )));
            }
        }
        Ok(Some(ErrorThresholdConfig {
            epsilon_m: PiecewiseLinear::new(points)?,
        }))
    }
}

/// Both parities erase at their average, `(p_xx + p_zz)/2`.
pub fn randomized_bias_rate(p_xx: f64, p_zz: f64) -> Result<f64> {
    for (name, v) in [("p_xx", p_xx), ("p_zz", p_zz)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    Ok((p_xx + p_zz) / 2.0)
}

/// `min/max` of the two erasure rates; `1` when both vanish.
pub fn bias_ratio(p_xx: f64, p_zz: f64) -> Result<f64> {
    for (name, v) in [("p_xx", p_xx), ("p_zz", p_zz)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    let (lo, hi) = if p_xx < p_zz { (p_xx, p_zz) } else { (p_zz, p_xx) };
    Ok(if hi == 0.0 { 1.0 } else { lo / hi })
}

/// Erasure rates of one (code, failure basis) pair as functions of loss.
#[derive(Debug, Clone)]
pub struct ErasureCurve {
    pub p_success_xx: SuccessPolynomial,
    pub p_success_zz: SuccessPolynomial,
    pub p_fail: f64,
}

impl ErasureCurve {
    pub fn rates(&self, gamma: f64) -> (f64, f64) {
        let eta = 1.0 - gamma;
        let ex = 1.0 - self.p_success_xx.evaluate(eta, self.p_fail);
        let ez = 1.0 - self.p_success_zz.evaluate(eta, self.p_fail);
        (ex.clamp(0.0, 1.0), ez.clamp(0.0, 1.0))
    }

    pub fn randomized_rate(&self, gamma: f64) -> f64 {
        let (ex, ez) = self.rates(gamma);
        (ex + ez) / 2.0
    }

    fn feasible(&self, gamma: f64, bias: &BiasConfig) -> bool {
        let (ex, ez) = self.rates(gamma);
        match bias.mode {
            BiasMode::Randomized => (ex + ez) / 2.0 <= bias.p_tilde_randomized,
            BiasMode::Passive => {
                let b = bias_ratio(ex, ez).expect("rates are clamped");
                ex.max(ez) <= bias.p_tilde_biased.evaluate(b)
            }
        }
    }

    /// Errors if either erasure rate decreases anywhere on the loss grid.
    pub fn check_monotone(&self) -> Result<()> {
        let mut prev = self.rates(0.0);
        for i in 1..=GAMMA_GRID_POINTS {
            let g = i as f64 / GAMMA_GRID_POINTS as f64;
            let cur = self.rates(g);
            if cur.0 + 1e-12 < prev.0 || cur.1 + 1e-12 < prev.1 {
                return Err(Error::NotMonotone(format!(
                    "erasure rate decreases between γ = {} and γ = {g}",
                    (i - 1) as f64 / GAMMA_GRID_POINTS as f64
                )));
            }
            prev = cur;
        }
        Ok(())
    }

    /// Largest feasible loss, or `None` when even `γ = 0` is infeasible.
    pub fn max_loss(&self, bias: &BiasConfig) -> Option<f64> {
        largest_feasible(|g| self.feasible(g, bias), 1.0, GAMMA_TOLERANCE)
    }
}

/// Largest `x ∈ [0, upper]` with `pred(x)`, assuming the feasible set is an
/// interval starting at 0. The grid brackets the first infeasible point and
/// bisection refines it.
fn largest_feasible(pred: impl Fn(f64) -> bool, upper: f64, tol: f64) -> Option<f64> {
    if !pred(0.0) {
        return None;
    }
    let step = upper / GAMMA_GRID_POINTS as f64;
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=GAMMA_GRID_POINTS {
        let x = step * i as f64;
        if pred(x) {
            lo = x;
        } else {
            hi = Some(x);
            break;
        }
    }
    let mut hi = hi?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdResult {
    pub code_id: String,
    pub n_code: usize,
    pub w: u64,
    pub gamma_star: f64,
    pub mode: BiasMode,
    pub feasible: bool,
    pub erase_xx: f64,
    pub erase_zz: f64,
    pub bias_ratio: f64,
    pub diagnostic: Option<String>,
}

/// Loss threshold of one code, maximised over all `2^n` failure-basis vectors.
pub fn loss_threshold(
    code: &GraphCode,
    code_id: &str,
    bias: &BiasConfig,
    p_fail: f64,
) -> Result<ThresholdResult> {
    let n = code.n_code();
    check_code_cap(n, DEFAULT_CODE_CAP)?;
    if !(0.0..=1.0).contains(&p_fail) {
        return Err(Error::OutOfRange {
            name: "p_fail",
            value: p_fail,
        });
    }
    let tx = RecoveryTable::new(n, &code.logical_set(LogicalBasis::X)?);
    let tz = RecoveryTable::new(n, &code.logical_set(LogicalBasis::Z)?);
    let per_w: Vec<(u64, Option<f64>)> = (0..1u64 << n)
        .into_par_iter()
        .map(|w| {
            let (px, pz) = success_polynomials(n, &tx, &tz, w);
            let curve = ErasureCurve {
                p_success_xx: px,
                p_success_zz: pz,
                p_fail,
            };
            curve.check_monotone()?;
            Ok((w, curve.max_loss(bias)))
        })
        .collect::<Result<_>>()?;
    let best = per_w
        .iter()
        .filter_map(|&(w, g)| g.map(|g| (w, g)))
        .fold(None::<(u64, f64)>, |best, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        });
    let (w, gamma_star, feasible, diagnostic) = match best {
        Some((w, g)) => (w, g, true, None),
        None => (
            0,
            0.0,
            false,
            Some("erasure threshold exceeded even without loss".to_string()),
        ),
    };
    let (px, pz) = success_polynomials(n, &tx, &tz, w);
    let curve = ErasureCurve {
        p_success_xx: px,
        p_success_zz: pz,
        p_fail,
    };
    let (erase_xx, erase_zz) = curve.rates(gamma_star);
    Ok(ThresholdResult {
        code_id: code_id.to_string(),
        n_code: n,
        w,
        gamma_star,
        mode: bias.mode,
        feasible,
        erase_xx,
        erase_zz,
        bias_ratio: bias_ratio(erase_xx, erase_zz)?,
        diagnostic,
    })
}

/// Identifier of the `index`-th enumerated code with `n_code` qubits.
pub fn code_id(n_code: usize, index: usize) -> String {
    format!("n{n_code}-{index}")
}

/// Every single-emitter code with `n_code` qubits, keyed by [`code_id`].
pub fn enumerate_codes(n_code: usize) -> Result<Vec<(String, GraphCode)>> {
    enumerate_single_emitter_progenitors(n_code)?
        .iter()
        .enumerate()
        .map(|(i, g)| Ok((code_id(n_code, i), GraphCode::from_progenitor(g)?)))
        .collect()
}

/// Loss thresholds of all codes of a size, best first (ties by code id).
pub fn search_best_code(
    n_code: usize,
    bias: &BiasConfig,
    p_fail: f64,
) -> Result<Vec<ThresholdResult>> {
    check_code_cap(n_code, DEFAULT_CODE_CAP)?;
    let codes = enumerate_codes(n_code)?;
    let mut results: Vec<ThresholdResult> = codes
        .par_iter()
        .map(|(id, code)| loss_threshold(code, id, bias, p_fail))
        .collect::<Result<_>>()?;
    results.sort_by(|a, b| {
        b.gamma_star
            .total_cmp(&a.gamma_star)
            .then_with(|| id_key(&a.code_id).cmp(&id_key(&b.code_id)))
    });
    Ok(results)
}

/// Codes whose threshold is within `tol` of the best one. Under randomized
/// bias a code and its dual always tie, so the optimum is a set.
pub fn co_optimal(results: &[ThresholdResult], tol: f64) -> Vec<&str> {
    let Some(best) = results.iter().map(|r| r.gamma_star).max_by(f64::total_cmp) else {
        return Vec::new();
    };
    results
        .iter()
        .filter(|r| r.gamma_star >= best - tol)
        .map(|r| r.code_id.as_str())
        .collect()
}

fn id_key(id: &str) -> (usize, usize) {
    let mut parts = id.trim_start_matches('n').split('-');
    let n = parts.next().and_then(|s| s.parse().ok()).unwrap_or(usize::MAX);
    let i = parts.next().and_then(|s| s.parse().ok()).unwrap_or(usize::MAX);
    (n, i)
}

/// Failure probability and ancilla-photon count of a `k`-times boosted fusion.
pub fn boost_level(k: u32) -> (f64, usize) {
    (0.5f64.powi(k as i32 + 1), (1usize << (k + 1)) - 2)
}

/// Boosted physical fusion without concatenation: both parities erase with
/// `1 − (1 − p_fail/2) η^(2 + n_ancilla)` under randomized bias.
pub fn boosted_baseline(p_fail: f64, n_ancilla: usize, p_tilde: f64) -> Result<ThresholdResult> {
    if !(p_fail > 0.0 && p_fail <= 0.5) {
        return Err(Error::OutOfRange {
            name: "p_fail",
            value: p_fail,
        });
    }
    if !(p_tilde > 0.0 && p_tilde < 1.0) {
        return Err(Error::OutOfRange {
            name: "p_tilde",
            value: p_tilde,
        });
    }
    let photons = 2 + n_ancilla as i32;
    let rate = |g: f64| 1.0 - (1.0 - p_fail / 2.0) * (1.0 - g).powi(photons);
    let found = largest_feasible(|g| rate(g) <= p_tilde, 1.0, GAMMA_TOLERANCE);
    let gamma_star = found.unwrap_or(0.0);
    let r = rate(gamma_star);
    Ok(ThresholdResult {
        code_id: format!("boosted-pfail{p_fail}-anc{n_ancilla}"),
        n_code: 0,
        w: 0,
        gamma_star,
        mode: BiasMode::Randomized,
        feasible: found.is_some(),
        erase_xx: r,
        erase_zz: r,
        bias_ratio: 1.0,
        diagnostic: found
            .is_none()
            .then(|| "erasure threshold exceeded even without loss".to_string()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionPoint {
    pub gamma: f64,
    pub erase_rate: f64,
    pub epsilon_m: f64,
    pub epsilon_boundary: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionCurve {
    pub w: u64,
    pub gamma_star: f64,
    pub points: Vec<RegionPoint>,
    pub diagnostic: Option<String>,
}

impl RegionCurve {
    pub fn is_empty(&self) -> bool {
        self.points.iter().all(|p| p.epsilon_boundary <= 0.0)
    }

    /// Boundary `ε` at the smallest loss on the grid.
    pub fn epsilon_intercept(&self) -> f64 {
        self.points.first().map_or(0.0, |p| p.epsilon_boundary)
    }
}

/// Fault-tolerant region in the (loss, depolarizing rate) plane under
/// randomized bias: for each `γ` on the grid (clipped at the loss threshold),
/// the largest `ε` with `(p̄_error(Z̄Z̄) + p̄_error(X̄X̄))/2 < ε_M(p̄_erase(γ))`.
pub fn correctable_region(
    code: &GraphCode,
    bias: &BiasConfig,
    err: &ErrorThresholdConfig,
    p_fail: f64,
    gammas: &[f64],
    epsilon_max: f64,
) -> Result<RegionCurve> {
    if bias.mode != BiasMode::Randomized {
        return Err(Error::Config(
            "correctable regions are defined for randomized bias".into(),
        ));
    }
    let threshold = loss_threshold(code, "", bias, p_fail)?;
    let w = threshold.w;
    let n = code.n_code();
    let tx = RecoveryTable::new(n, &code.logical_set(LogicalBasis::X)?);
    let tz = RecoveryTable::new(n, &code.logical_set(LogicalBasis::Z)?);
    let (px, pz) = success_polynomials(n, &tx, &tz, w);
    let curve = ErasureCurve {
        p_success_xx: px,
        p_success_zz: pz,
        p_fail,
    };
    let dx = SyndromeDecoder::new(code, w, LogicalBasis::X)?;
    let dz = SyndromeDecoder::new(code, w, LogicalBasis::Z)?;

    let mut points = Vec::new();
    if threshold.feasible {
        let mut grid: Vec<f64> = gammas
            .iter()
            .copied()
            .filter(|g| *g >= 0.0)
            .map(|g| g.min(threshold.gamma_star))
            .collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        for gamma in grid {
            let eta = 1.0 - gamma;
            let erase_rate = curve.randomized_rate(gamma);
            let epsilon_m = err.epsilon_m.evaluate(erase_rate);
            let below = |eps: f64| -> bool {
                let ex = dx
                    .logical_error_rate(eta, p_fail, eps, Decoding::MaximumLikelihood)
                    .expect("epsilon in range");
                let ez = dz
                    .logical_error_rate(eta, p_fail, eps, Decoding::MaximumLikelihood)
                    .expect("epsilon in range");
                (ex + ez) / 2.0 < epsilon_m
            };
            let epsilon_boundary =
                largest_feasible(below, epsilon_max, EPSILON_TOLERANCE).unwrap_or(0.0);
            points.push(RegionPoint {
                gamma,
                erase_rate,
                epsilon_m,
                epsilon_boundary,
            });
        }
    }
    let mut region = RegionCurve {
        w,
        gamma_star: threshold.gamma_star,
        points,
        diagnostic: None,
    };
    if region.is_empty() {
        region.diagnostic = Some("correctable region is empty".into());
    }
    Ok(region)
}
