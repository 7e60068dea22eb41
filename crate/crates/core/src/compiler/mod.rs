//! Two-emitter (or emitter plus memory) generation of concatenated graph
//! states.
//!
//! Instruction semantics, used by the simulator in [`verify`]:
//!
//! * `INIT_EMITTER(e)`, `REINIT(e)`: prepare the spin in `|+⟩`.
//! * `EMIT_PHOTON(e)`: CNOT from the spin onto a fresh photon in `|0⟩`.
//! * `SPIN_ROTATION(e)`: Hadamard on the spin. Right after an emission it turns
//!   the leaf into a path-edge.
//! * `CZ`, `SWAP`: two-qubit gates between the spins.
//! * `MEASURE_X(e)`: X measurement of the spin, postselected on `+1`.
//!
//! A photon emitted as a leaf carries a Hadamard relative to the graph state;
//! this frame is recorded per photon in [`PhotonSite`].

mod tableau;
mod verify;

pub use tableau::StabilizerState;
pub use verify::{
    expected_state, simulate, simulate_with_outcomes, verify_sequence, ConcatenatedTarget,
    VerificationReport,
};

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::code::GraphCode;
use crate::error::{Error, Result};
use crate::graph::{GenerationOp, GraphState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompileMode {
    TwoEmitter,
    EmitterMemory,
}

impl fmt::Display for CompileMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompileMode::TwoEmitter => "two-emitter",
            CompileMode::EmitterMemory => "emitter-memory",
        })
    }
}

/// Spins are numbered 0 and 1. In memory mode 0 is the emitter and 1 the
/// memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Instruction {
    InitEmitter { emitter: usize },
    SpinRotation { emitter: usize },
    EmitPhoton { emitter: usize, photon: usize },
    Cz { a: usize, b: usize },
    Swap { a: usize, b: usize },
    MeasureX { emitter: usize },
    Reinit { emitter: usize },
}

impl Instruction {
    /// Spins the instruction acts on.
    pub fn emitters(&self) -> Vec<usize> {
        match *self {
            Instruction::InitEmitter { emitter }
            | Instruction::SpinRotation { emitter }
            | Instruction::EmitPhoton { emitter, .. }
            | Instruction::MeasureX { emitter }
            | Instruction::Reinit { emitter } => vec![emitter],
            Instruction::Cz { a, b } | Instruction::Swap { a, b } => vec![a, b],
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instruction::InitEmitter { emitter } => write!(f, "INIT_EMITTER e{emitter}"),
            Instruction::SpinRotation { emitter } => write!(f, "SPIN_ROTATION e{emitter}"),
            Instruction::EmitPhoton { emitter, photon } => {
                write!(f, "EMIT_PHOTON e{emitter} -> p{photon}")
            }
            Instruction::Cz { a, b } => write!(f, "CZ e{a} e{b}"),
            Instruction::Swap { a, b } => write!(f, "SWAP e{a} e{b}"),
            Instruction::MeasureX { emitter } => write!(f, "MEASURE_X e{emitter}"),
            Instruction::Reinit { emitter } => write!(f, "REINIT e{emitter}"),
        }
    }
}

/// Where a photon sits in the target: inner-code vertex `inner_vertex` of
/// the inner graph attached to outer vertex `outer_vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhotonSite {
    pub outer_vertex: usize,
    pub inner_vertex: usize,
    pub hadamard_frame: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationSequence {
    pub mode: CompileMode,
    pub emitter_count: usize,
    pub ops: Vec<Instruction>,
    pub photons: Vec<PhotonSite>,
}

impl GenerationSequence {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// One instruction per line, prefixed with its step index.
    pub fn schedule_text(&self) -> String {
        let mut out = format!("# mode {}, {} photons\n", self.mode, self.photons.len());
        for (i, op) in self.ops.iter().enumerate() {
            writeln!(out, "{i:5}  {op}").expect("writing to a string");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ResourceCount {
    pub spin_spin_gates: usize,
    pub max_emitter_depth: usize,
    pub photons: usize,
}

pub fn count_resources(seq: &GenerationSequence) -> ResourceCount {
    let mut count = ResourceCount::default();
    let mut depth = vec![0usize; seq.emitter_count.max(2)];
    for op in &seq.ops {
        match op {
            Instruction::Cz { .. } | Instruction::Swap { .. } => count.spin_spin_gates += 1,
            Instruction::EmitPhoton { .. } => count.photons += 1,
            _ => {}
        }
        for e in op.emitters() {
            if e >= depth.len() {
                depth.resize(e + 1, 0);
            }
            match op {
                Instruction::InitEmitter { .. } | Instruction::Reinit { .. } => depth[e] = 0,
                _ => {
                    depth[e] += 1;
                    count.max_emitter_depth = count.max_emitter_depth.max(depth[e]);
                }
            }
        }
    }
    count
}

struct Builder<'a> {
    inner: &'a GraphCode,
    inner_plan: crate::graph::GenerationPlan,
    ops: Vec<Instruction>,
    photons: Vec<PhotonSite>,
    initialised: [bool; 2],
}

impl Builder<'_> {
    /// Generates the inner progenitor on spin `e` for outer vertex `outer`;
    /// the spin ends up holding the input (virtual) vertex.
    fn inner_code(&mut self, e: usize, outer: usize) {
        if !self.initialised[e] {
            self.ops.push(Instruction::InitEmitter { emitter: e });
            self.initialised[e] = true;
        }
        let order = &self.inner_plan.order;
        let mut spin_vertex = 0;
        for (k, &op) in self.inner_plan.ops.iter().enumerate() {
            let created = k + 1;
            let photon = self.photons.len();
            self.ops.push(Instruction::EmitPhoton { emitter: e, photon });
            let site = match op {
                GenerationOp::Leaf => PhotonSite {
                    outer_vertex: outer,
                    inner_vertex: order[created],
                    hadamard_frame: true,
                },
                GenerationOp::PathEdge => {
                    self.ops.push(Instruction::SpinRotation { emitter: e });
                    let site = PhotonSite {
                        outer_vertex: outer,
                        inner_vertex: order[spin_vertex],
                        hadamard_frame: false,
                    };
                    spin_vertex = created;
                    site
                }
            };
            self.photons.push(site);
        }
        debug_assert_eq!(order[spin_vertex], self.inner.input_qubit());
    }

    fn measure(&mut self, e: usize) {
        self.ops.push(Instruction::MeasureX { emitter: e });
        self.ops.push(Instruction::Reinit { emitter: e });
    }
}

/// Compiles `outer` (a caterpillar whose marked vertex is the last one
/// generated) with every vertex encoded in `inner`.
pub fn compile(outer: &GraphState, inner: &GraphCode, mode: CompileMode) -> Result<GenerationSequence> {
    if outer.is_empty() {
        return Err(Error::NotGeneratable("outer graph has no vertices".into()));
    }
    let outer_plan = outer.generation_sequence()?;
    let mut b = Builder {
        inner,
        inner_plan: inner.progenitor().generation_sequence()?,
        ops: Vec::new(),
        photons: Vec::new(),
        initialised: [false; 2],
    };
    let order = &outer_plan.order;
    match mode {
        CompileMode::TwoEmitter => {
            let mut active = 0;
            b.inner_code(active, order[0]);
            for (k, &op) in outer_plan.ops.iter().enumerate() {
                let other = 1 - active;
                b.inner_code(other, order[k + 1]);
                b.ops.push(Instruction::Cz { a: active, b: other });
                match op {
                    GenerationOp::Leaf => b.measure(other),
                    GenerationOp::PathEdge => {
                        b.measure(active);
                        active = other;
                    }
                }
            }
            b.ops.push(Instruction::MeasureX { emitter: active });
        }
        CompileMode::EmitterMemory => {
            const EMITTER: usize = 0;
            const MEMORY: usize = 1;
            b.inner_code(EMITTER, order[0]);
            b.ops.push(Instruction::InitEmitter { emitter: MEMORY });
            b.ops.push(Instruction::Swap { a: EMITTER, b: MEMORY });
            for (k, &op) in outer_plan.ops.iter().enumerate() {
                b.inner_code(EMITTER, order[k + 1]);
                b.ops.push(Instruction::Cz { a: MEMORY, b: EMITTER });
                if op == GenerationOp::PathEdge {
                    b.ops.push(Instruction::Swap { a: EMITTER, b: MEMORY });
                }
                b.measure(EMITTER);
            }
            b.ops.push(Instruction::MeasureX { emitter: MEMORY });
        }
    }
    Ok(GenerationSequence {
        mode,
        emitter_count: 2,
        ops: b.ops,
        photons: b.photons,
    })
}

/// CSV header and row for a resource count.
pub const RESOURCE_CSV_HEADER: &str = "n,spin_spin_gates,max_emitter_depth,photons";

pub fn resource_csv_row(n_code: usize, r: &ResourceCount) -> String {
    format!(
        "{n_code},{},{},{}",
        r.spin_spin_gates, r.max_emitter_depth, r.photons
    )
}
