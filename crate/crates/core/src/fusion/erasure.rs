use serde::Serialize;

use super::{
    check_code_cap, FusionSpec, MeasurementPattern, Monomial, SuccessPolynomial, DEFAULT_CODE_CAP,
};
use crate::code::{GraphCode, LogicalBasis};
use crate::error::Result;
use crate::pauli::{AvailableParities, PauliOperator};

/// For every pair of availability masks, whether some operator of a set is
/// recoverable. Indexed by `x | z << n`.
#[derive(Debug, Clone)]
pub struct RecoveryTable {
    n: usize,
    table: Vec<bool>,
}

impl RecoveryTable {
    pub fn new(n: usize, ops: &[PauliOperator]) -> Self {
        let bits = 2 * n;
        let mut table = vec![false; 1 << bits];
        for op in ops {
            table[(op.x_bits() | op.z_bits() << n) as usize] = true;
        }
        // Upward closure: more available parities never hurt.
        for b in 0..bits {
            let bit = 1usize << b;
            for m in 0..table.len() {
                if m & bit != 0 && table[m ^ bit] {
                    table[m] = true;
                }
            }
        }
        RecoveryTable { n, table }
    }

    pub fn recoverable(&self, avail: AvailableParities) -> bool {
        self.table[(avail.x | avail.z << self.n) as usize]
    }
}

/// A pattern in `M_X` or `M_Z` and the first logical representative (in
/// logical-set order) it recovers.
#[derive(Debug, Clone, Serialize)]
pub struct PatternRecord {
    pub pattern: String,
    pub monomial: Monomial,
    pub representative: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErasureReport {
    pub spec: FusionSpec,
    pub p_success_xx: SuccessPolynomial,
    pub p_success_zz: SuccessPolynomial,
    pub members_x: Vec<PatternRecord>,
    pub members_z: Vec<PatternRecord>,
}

impl ErasureReport {
    pub fn success_xx(&self) -> f64 {
        self.p_success_xx.evaluate(self.spec.eta, self.spec.p_fail)
    }

    pub fn success_zz(&self) -> f64 {
        self.p_success_zz.evaluate(self.spec.eta, self.spec.p_fail)
    }

    pub fn erase_xx(&self) -> f64 {
        1.0 - self.success_xx()
    }

    pub fn erase_zz(&self) -> f64 {
        1.0 - self.success_zz()
    }
}

fn members(
    set: &[PauliOperator],
    w: u64,
    n: usize,
) -> (SuccessPolynomial, Vec<PatternRecord>) {
    let mut poly = SuccessPolynomial::zero(n);
    let mut records = Vec::new();
    for pattern in MeasurementPattern::all(n) {
        let avail = pattern.available(w);
        if let Some(rep) = set.iter().find(|l| l.qubitwise_commutes(&avail)) {
            poly.add(pattern.monomial());
            records.push(PatternRecord {
                pattern: pattern.to_string(),
                monomial: pattern.monomial(),
                representative: rep.to_string(),
            });
        }
    }
    (poly, records)
}

/// Success polynomials for `X̄X̄` and `Z̄Z̄`, with the member patterns of
/// `M_X` and `M_Z`.
pub fn erasure_analysis(code: &GraphCode, spec: &FusionSpec) -> Result<ErasureReport> {
    let n = code.n_code();
    check_code_cap(n, DEFAULT_CODE_CAP)?;
    let spec = FusionSpec::new(spec.eta, spec.p_fail, spec.w, n)?;
    let (p_success_xx, members_x) = members(&code.logical_set(LogicalBasis::X)?, spec.w, n);
    let (p_success_zz, members_z) = members(&code.logical_set(LogicalBasis::Z)?, spec.w, n);
    Ok(ErasureReport {
        spec,
        p_success_xx,
        p_success_zz,
        members_x,
        members_z,
    })
}
