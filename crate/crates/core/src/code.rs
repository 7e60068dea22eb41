//! Graph codes obtained by measuring the emitter vertex of a progenitor graph
//! state in X (outcome +1).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphState;
use crate::pauli::{Pauli, PauliOperator, StabilizerGroup};

/// Logical basis of a single-qubit graph code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LogicalBasis {
    X,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphCode {
    progenitor: GraphState,
    /// Progenitor vertex of each code qubit, increasing.
    code_qubits: Vec<usize>,
    logical_x: PauliOperator,
    logical_z: PauliOperator,
    stabilizers: StabilizerGroup,
}

fn lowest(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

impl GraphCode {
    /// Builds the code with the progenitor's emitter as input qubit `q`:
    /// `X̄ = ∏_{i∈N(q)} Z_i`, `Z̄ = S_{q0} Z_q` for the lowest `q0 ∈ N(q)`.
    pub fn from_progenitor(g: &GraphState) -> Result<Self> {
        let q = g.emitter();
        if g.len() < 2 || g.neighborhood(q) == 0 {
            return Err(Error::IsolatedInput(q));
        }
        let n = g.len();
        let nq = g.neighborhood(q);
        let q0 = lowest(nq);
        let code_qubits: Vec<usize> = (0..n).filter(|&v| v != q).collect();
        let restrict = |p: PauliOperator| -> PauliOperator {
            debug_assert_eq!(p.get(q), Pauli::I, "{p} acts on the input qubit");
            p.restrict(&code_qubits)
        };

        let logical_x = restrict(PauliOperator::uniform(n, nq, Pauli::Z));
        let z_q = PauliOperator::single(n, q, Pauli::Z);
        let logical_z = restrict(g.stabilizer(q0).mul_unchecked(&z_q));

        let s_q0 = g.stabilizer(q0);
        let mut gens = Vec::with_capacity(n - 2);
        for i in g.neighbors(q).filter(|&i| i != q0) {
            gens.push(restrict(s_q0.mul_unchecked(&g.stabilizer(i))));
        }
        for j in (0..n).filter(|&j| j != q && nq >> j & 1 == 0) {
            gens.push(restrict(g.stabilizer(j)));
        }
        let stabilizers = StabilizerGroup::new(n - 1, gens)?;
        Ok(GraphCode {
            progenitor: g.clone(),
            code_qubits,
            logical_x,
            logical_z,
            stabilizers,
        })
    }

    pub fn progenitor(&self) -> &GraphState {
        &self.progenitor
    }

    pub fn input_qubit(&self) -> usize {
        self.progenitor.emitter()
    }

    pub fn n_code(&self) -> usize {
        self.code_qubits.len()
    }

    pub fn code_qubits(&self) -> &[usize] {
        &self.code_qubits
    }

    pub fn logical(&self, basis: LogicalBasis) -> PauliOperator {
        match basis {
            LogicalBasis::X => self.logical_x,
            LogicalBasis::Z => self.logical_z,
        }
    }

    pub fn stabilizers(&self) -> &StabilizerGroup {
        &self.stabilizers
    }

    /// `L̄ · S` for every element `S` of the code stabilizer group, in group
    /// enumeration order.
    pub fn logical_set(&self, basis: LogicalBasis) -> Result<Vec<PauliOperator>> {
        let l = self.logical(basis);
        Ok(self
            .stabilizers
            .enumerate()?
            .iter()
            .map(|s| l.mul_unchecked(s))
            .collect())
    }

    /// Neighbour of the input qubit whose LC sits in the middle of the
    /// dual-code sequence (lowest index in `N(s)`).
    pub fn dual_pivot(&self) -> usize {
        lowest(self.progenitor.neighborhood(self.input_qubit()))
    }

    /// Code-qubit index of [`Self::dual_pivot`].
    pub fn dual_pivot_code_qubit(&self) -> usize {
        let v = self.dual_pivot();
        self.code_qubits
            .iter()
            .position(|&c| c == v)
            .expect("pivot is a code qubit")
    }

    /// Progenitor after LC at `s`, at `q*`, then at `s` again.
    pub fn dual_progenitor(&self) -> GraphState {
        let s = self.input_qubit();
        let pivot = self.dual_pivot();
        self.progenitor
            .local_complement(s)
            .and_then(|g| g.local_complement(pivot))
            .and_then(|g| g.local_complement(s))
            .expect("vertices are valid")
    }

    /// Code with X̄ and Z̄ exchanged, built from [`Self::dual_progenitor`].
    pub fn dual_code(&self) -> Result<Self> {
        GraphCode::from_progenitor(&self.dual_progenitor())
    }

    /// Failure-basis vector for the dual code that matches `w` on this code.
    ///
    /// The LC sequence acts on code qubits as a local Clifford that exchanges
    /// X and Z on the pivot and keeps X and Z (up to sign) everywhere else, so
    /// only the pivot's basis flips.
    pub fn dual_failure_basis(&self, w: u64) -> u64 {
        w ^ (1 << self.dual_pivot_code_qubit())
    }

    pub fn descriptor(&self, id: &str) -> Result<CodeDescriptor> {
        let render = |v: Vec<PauliOperator>| v.iter().map(|p| p.to_string()).collect();
        Ok(CodeDescriptor {
            id: id.to_string(),
            n_code: self.n_code(),
            progenitor: self.progenitor.clone(),
            input_qubit: self.input_qubit(),
            code_qubits: self.code_qubits.clone(),
            logical_x: self.logical_x.to_string(),
            logical_z: self.logical_z.to_string(),
            stabilizer_generators: self
                .stabilizers
                .generators()
                .iter()
                .map(|p| p.to_string())
                .collect(),
            logical_set_x: render(self.logical_set(LogicalBasis::X)?),
            logical_set_z: render(self.logical_set(LogicalBasis::Z)?),
        })
    }
}

/// JSON view of a code.
#[derive(Debug, Clone, Serialize)]
pub struct CodeDescriptor {
    pub id: String,
    pub n_code: usize,
    pub progenitor: GraphState,
    pub input_qubit: usize,
    pub code_qubits: Vec<usize>,
    pub logical_x: String,
    pub logical_z: String,
    pub stabilizer_generators: Vec<String>,
    pub logical_set_x: Vec<String>,
    pub logical_set_z: Vec<String>,
}
