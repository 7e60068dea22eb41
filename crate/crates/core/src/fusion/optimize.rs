use rayon::prelude::*;

use super::{
    check_code_cap, full_mask, subsets, RecoveryTable, SuccessPolynomial, DEFAULT_CODE_CAP,
};
use crate::code::{GraphCode, LogicalBasis};
use crate::error::Result;

/// Both success polynomials for one failure-basis vector, via precomputed
/// recovery tables.
pub fn success_polynomials(
    n: usize,
    table_x: &RecoveryTable,
    table_z: &RecoveryTable,
    w: u64,
) -> (SuccessPolynomial, SuccessPolynomial) {
    let full = full_mask(n);
    let mut px = SuccessPolynomial::zero(n);
    let mut pz = SuccessPolynomial::zero(n);
    for success in subsets(full) {
        let s = success.count_ones() as usize;
        for fail in subsets(full & !success) {
            let k = s + fail.count_ones() as usize;
            let avail = crate::pauli::AvailableParities {
                x: success | (fail & w),
                z: success | (fail & !w),
            };
            if table_x.recoverable(avail) {
                px.add_counts(k, s, 1);
            }
            if table_z.recoverable(avail) {
                pz.add_counts(k, s, 1);
            }
        }
    }
    (px, pz)
}

#[derive(Debug, Clone)]
pub struct FailureBasisOptimum {
    pub w: u64,
    pub score: f64,
    pub p_success_xx: SuccessPolynomial,
    pub p_success_zz: SuccessPolynomial,
}

/// Scores all `2^n` failure-basis vectors and returns the best one; ties go
/// to the smallest `w`.
pub fn optimize_failure_bases<F>(code: &GraphCode, objective: F) -> Result<FailureBasisOptimum>
where
    F: Fn(&SuccessPolynomial, &SuccessPolynomial) -> f64 + Sync,
{
    let n = code.n_code();
    check_code_cap(n, DEFAULT_CODE_CAP)?;
    let tx = RecoveryTable::new(n, &code.logical_set(LogicalBasis::X)?);
    let tz = RecoveryTable::new(n, &code.logical_set(LogicalBasis::Z)?);
    let scored: Vec<(u64, f64)> = (0..1u64 << n)
        .into_par_iter()
        .map(|w| {
            let (px, pz) = success_polynomials(n, &tx, &tz, w);
            (w, objective(&px, &pz))
        })
        .collect();
    let (w, score) = scored
        .into_iter()
        .fold((0u64, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
    let (p_success_xx, p_success_zz) = success_polynomials(n, &tx, &tz, w);
    Ok(FailureBasisOptimum {
        w,
        score,
        p_success_xx,
        p_success_zz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{erasure_analysis, FusionSpec};
    use crate::graph::GraphState;

    fn star3_code() -> GraphCode {
        GraphCode::from_progenitor(&GraphState::from_edges(3, &[[0, 1], [0, 2]], 0).unwrap())
            .unwrap()
    }

    #[test]
    fn table_path_matches_erasure_analysis() {
        let code = star3_code();
        let tx = RecoveryTable::new(2, &code.logical_set(LogicalBasis::X).unwrap());
        let tz = RecoveryTable::new(2, &code.logical_set(LogicalBasis::Z).unwrap());
        for w in 0..4 {
            let (px, pz) = success_polynomials(2, &tx, &tz, w);
            let r = erasure_analysis(&code, &FusionSpec::standard(0.9, w, 2).unwrap()).unwrap();
            assert_eq!(px, r.p_success_xx);
            assert_eq!(pz, r.p_success_zz);
        }
    }

    #[test]
    fn constant_objective_picks_zero() {
        let best = optimize_failure_bases(&star3_code(), |_, _| 1.0).unwrap();
        assert_eq!(best.w, 0);
    }

    #[test]
    fn symmetric_objective_on_bare_qubit_ties_to_zero() {
        let code =
            GraphCode::from_progenitor(&GraphState::from_edges(2, &[[0, 1]], 0).unwrap()).unwrap();
        let best = optimize_failure_bases(&code, |px, pz| {
            px.evaluate(0.95, 0.5) + pz.evaluate(0.95, 0.5)
        })
        .unwrap();
        assert_eq!(best.w, 0);
    }
}
