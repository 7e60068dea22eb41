//! Transversal logical fusion between two identical graph codes.
//!
//! Code qubit `j` of one code is fused with code qubit `j` of the other. Each
//! physical fusion succeeds (both `XX` and `ZZ` recovered), fails (only the
//! parity selected by `w_j` recovered) or loses a photon (nothing recovered).

mod erasure;
mod noise;
mod optimize;
mod polynomial;

pub use erasure::{erasure_analysis, ErasureReport, PatternRecord, RecoveryTable};
pub use noise::{
    error_analysis, joint_flip_distribution, pauli_flip_probability, Decoding, ErrorReport,
    JointFlipDistribution, PatternError, SyndromeDecoder,
};
pub use optimize::{optimize_failure_bases, success_polynomials, FailureBasisOptimum};
pub use polynomial::{Monomial, SuccessPolynomial};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{AvailableParities, PauliOperator};

/// Default cap on code size for exhaustive pattern enumeration.
pub const DEFAULT_CODE_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FusionOutcome {
    Success,
    Fail,
    Loss,
}

/// Physical fusion model shared by every fused pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FusionSpec {
    /// Per-photon transmission.
    pub eta: f64,
    pub p_fail: f64,
    /// Bit `j` set: a failed fusion on pair `j` recovers `XX`; clear: `ZZ`.
    pub w: u64,
    pub n: usize,
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

impl FusionSpec {
    pub fn new(eta: f64, p_fail: f64, w: u64, n: usize) -> Result<Self> {
        check_probability("eta", eta)?;
        check_probability("p_fail", p_fail)?;
        if n > 64 || (n < 64 && w >> n != 0) {
            return Err(Error::Parse(format!(
                "failure-basis vector {w:#b} does not fit {n} qubits"
            )));
        }
        Ok(FusionSpec { eta, p_fail, w, n })
    }

    /// Standard (non-boosted) fusion, `p_fail = 1/2`.
    pub fn standard(eta: f64, w: u64, n: usize) -> Result<Self> {
        Self::new(eta, 0.5, w, n)
    }
}

/// Outcome of every pairwise fusion, as bit masks over code qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementPattern {
    pub n: usize,
    pub success: u64,
    pub fail: u64,
}

impl MeasurementPattern {
    pub fn from_outcomes(outcomes: &[FusionOutcome]) -> Self {
        let mut p = MeasurementPattern {
            n: outcomes.len(),
            success: 0,
            fail: 0,
        };
        for (j, o) in outcomes.iter().enumerate() {
            match o {
                FusionOutcome::Success => p.success |= 1 << j,
                FusionOutcome::Fail => p.fail |= 1 << j,
                FusionOutcome::Loss => {}
            }
        }
        p
    }

    pub fn outcome(&self, j: usize) -> FusionOutcome {
        if self.success >> j & 1 == 1 {
            FusionOutcome::Success
        } else if self.fail >> j & 1 == 1 {
            FusionOutcome::Fail
        } else {
            FusionOutcome::Loss
        }
    }

    pub fn lost(&self) -> u64 {
        full_mask(self.n) & !(self.success | self.fail)
    }

    /// Parities recovered on each pair given failure bases `w`.
    pub fn available(&self, w: u64) -> AvailableParities {
        AvailableParities {
            x: self.success | (self.fail & w),
            z: self.success | (self.fail & !w),
        }
    }

    pub fn monomial(&self) -> Monomial {
        Monomial {
            successes: self.success.count_ones(),
            fails: self.fail.count_ones(),
            losses: self.lost().count_ones(),
        }
    }

    /// All `3^n` patterns, in a fixed order.
    pub fn all(n: usize) -> impl Iterator<Item = MeasurementPattern> {
        let full = full_mask(n);
        subsets(full).flat_map(move |success| {
            subsets(full & !success).map(move |fail| MeasurementPattern { n, success, fail })
        })
    }
}

impl fmt::Display for MeasurementPattern {
    /// One letter per pair: `S`uccess, `F`ail, `L`oss.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            let c = match self.outcome(j) {
                FusionOutcome::Success => 'S',
                FusionOutcome::Fail => 'F',
                FusionOutcome::Loss => 'L',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Subsets of `set`, in increasing numeric order.
pub(crate) fn subsets(set: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == set {
            None
        } else {
            Some((cur.wrapping_sub(set)) & set)
        };
        Some(cur)
    })
}

/// Probability monomial of a pattern under `spec`:
/// success `(1−p_fail)η²`, failure `p_fail·η²`, loss `1−η²` per pair.
pub fn pattern_probability(pattern: &MeasurementPattern, spec: &FusionSpec) -> f64 {
    pattern.monomial().evaluate(spec.eta, spec.p_fail)
}

/// Whether the paired logical `P⊗P` can be assembled from the recovered
/// parities: X needs `XX`, Z needs `ZZ`, Y needs both.
pub fn recoverable(logical: &PauliOperator, pattern: &MeasurementPattern, w: u64) -> bool {
    logical.qubitwise_commutes(&pattern.available(w))
}

pub(crate) fn check_code_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::ResourceCap {
            what: "code size",
            value: n,
            cap,
        });
    }
    Ok(())
}
