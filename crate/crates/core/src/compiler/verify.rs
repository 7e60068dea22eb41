use std::collections::BTreeSet;

use serde::Serialize;

use super::tableau::StabilizerState;
use super::{GenerationSequence, Instruction, PhotonSite};
use crate::code::GraphCode;
use crate::error::{Error, Result};
use crate::graph::GraphState;
use crate::pauli::{StabilizerGroup, MAX_QUBITS};

/// Outer graph with every vertex encoded in the same inner code.
#[derive(Debug, Clone)]
pub struct ConcatenatedTarget {
    pub outer: GraphState,
    pub inner: GraphCode,
}

impl ConcatenatedTarget {
    pub fn new(outer: GraphState, inner: GraphCode) -> Self {
        ConcatenatedTarget { outer, inner }
    }

    pub fn photon_count(&self) -> usize {
        self.outer.len() * self.inner.n_code()
    }
}

/// Photon state of the target restricted to the outer vertices in `vertices`:
/// outer edges among them, each inner progenitor attached with its input
/// vertex identified with the outer (virtual) vertex, and every virtual
/// vertex measured in X with outcome +1. Photon `i` of the result is
/// `photons[i]`, which must cover exactly the code qubits of `vertices`.
pub fn expected_state(
    target: &ConcatenatedTarget,
    photons: &[PhotonSite],
    vertices: &BTreeSet<usize>,
) -> Result<StabilizerGroup> {
    let inner = target.inner.progenitor();
    let q = target.inner.input_qubit();
    let p = photons.len();
    let virtuals: Vec<usize> = vertices.iter().copied().collect();
    let total = p + virtuals.len();
    if total > MAX_QUBITS {
        return Err(Error::ResourceCap {
            what: "qubits in the expected state",
            value: total,
            cap: MAX_QUBITS,
        });
    }
    let mut seen = BTreeSet::new();
    for site in photons {
        if !vertices.contains(&site.outer_vertex)
            || site.inner_vertex == q
            || site.inner_vertex >= inner.len()
            || !seen.insert((site.outer_vertex, site.inner_vertex))
        {
            return Err(Error::Parse(format!("photon site {site:?} is not a fresh code qubit")));
        }
    }
    if seen.len() != virtuals.len() * target.inner.n_code() {
        return Err(Error::Parse("photons do not cover every inner code".into()));
    }

    let slot = |u: usize| p + virtuals.iter().position(|&v| v == u).expect("vertex in set");
    let mut g = GraphState::empty(total, 0)?;
    for (a, b) in target.outer.edges() {
        if vertices.contains(&a) && vertices.contains(&b) {
            g.toggle_edge(slot(a), slot(b));
        }
    }
    for (i, si) in photons.iter().enumerate() {
        if inner.has_edge(si.inner_vertex, q) {
            g.toggle_edge(i, slot(si.outer_vertex));
        }
        for (j, sj) in photons.iter().enumerate().skip(i + 1) {
            if si.outer_vertex == sj.outer_vertex && inner.has_edge(si.inner_vertex, sj.inner_vertex)
            {
                g.toggle_edge(i, j);
            }
        }
    }
    let mut state = StabilizerState::from_group(&g.stabilizer_generators())?;
    for &u in &virtuals {
        state.measure_x(slot(u), true)?;
    }
    state.reduced(&(0..p).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checkpoints: usize,
    pub photons: usize,
    pub simulated_qubits: usize,
}

struct Simulator<'a> {
    seq: &'a GenerationSequence,
    state: StabilizerState,
    emitted: usize,
    initialised: [bool; 2],
    measured: [bool; 2],
}

impl<'a> Simulator<'a> {
    fn new(seq: &'a GenerationSequence) -> Result<Self> {
        if seq.emitter_count != 2 {
            return Err(Error::Verification {
                step: 0,
                reason: format!("expected 2 spins, found {}", seq.emitter_count),
            });
        }
        let n = seq.photons.len() + 2;
        if n > MAX_QUBITS {
            return Err(Error::ResourceCap {
                what: "simulated qubits",
                value: n,
                cap: MAX_QUBITS,
            });
        }
        Ok(Simulator {
            seq,
            state: StabilizerState::zeros(n)?,
            emitted: 0,
            initialised: [false; 2],
            measured: [false; 2],
        })
    }

    fn spin(&self, e: usize) -> usize {
        self.seq.photons.len() + e
    }

    fn step(&mut self, i: usize, op: &Instruction, plus: bool) -> Result<()> {
        let fail = |reason: String| Error::Verification { step: i, reason };
        for e in op.emitters() {
            if e > 1 {
                return Err(fail(format!("{op}: no spin {e}")));
            }
            let resets = matches!(op, Instruction::InitEmitter { .. } | Instruction::Reinit { .. });
            if !resets && !self.initialised[e] {
                return Err(fail(format!("{op}: spin {e} used before initialisation")));
            }
            if !resets && self.measured[e] {
                return Err(fail(format!("{op}: spin {e} used after measurement without REINIT")));
            }
        }
        match *op {
            Instruction::InitEmitter { emitter } | Instruction::Reinit { emitter } => {
                self.state
                    .reset_plus(self.spin(emitter))
                    .map_err(|e| fail(format!("{op}: {e}")))?;
                self.initialised[emitter] = true;
                self.measured[emitter] = false;
            }
            Instruction::SpinRotation { emitter } => self.state.h(self.spin(emitter)),
            Instruction::EmitPhoton { emitter, photon } => {
                if photon != self.emitted || photon >= self.seq.photons.len() {
                    return Err(fail(format!("{op}: expected photon p{}", self.emitted)));
                }
                self.state.cnot(self.spin(emitter), photon);
                self.emitted += 1;
            }
            Instruction::Cz { a, b } => self.state.cz(self.spin(a), self.spin(b)),
            Instruction::Swap { a, b } => self.state.swap(self.spin(a), self.spin(b)),
            Instruction::MeasureX { emitter } => {
                self.state
                    .measure_x(self.spin(emitter), plus)
                    .map_err(|e| fail(format!("{op}: {e}")))?;
                self.measured[emitter] = true;
            }
        }
        Ok(())
    }

    /// Emitted photons in the graph frame, after measuring out (+1) any spin
    /// still entangled with them.
    fn photon_state(&self) -> Result<StabilizerGroup> {
        let mut st = self.state.clone();
        for e in 0..2 {
            let s = self.spin(e);
            if st.local_stabilizer(s).is_none() {
                st.measure_x(s, true)?;
            }
        }
        for (i, site) in self.seq.photons[..self.emitted].iter().enumerate() {
            if site.hadamard_frame {
                st.h(i);
            }
        }
        st.reduced(&(0..self.emitted).collect::<Vec<_>>())
    }
}

/// Runs the sequence with the given X-measurement outcomes (`true` = +1,
/// keyed by step index) and returns the photon state with leaf frames undone.
pub fn simulate_with_outcomes(
    seq: &GenerationSequence,
    mut outcome: impl FnMut(usize) -> bool,
) -> Result<StabilizerGroup> {
    let mut sim = Simulator::new(seq)?;
    for (i, op) in seq.ops.iter().enumerate() {
        sim.step(i, op, outcome(i))?;
    }
    if sim.emitted != seq.photons.len() {
        return Err(Error::Verification {
            step: seq.ops.len(),
            reason: format!("{} of {} photons emitted", sim.emitted, seq.photons.len()),
        });
    }
    sim.photon_state()
}

/// [`simulate_with_outcomes`] with every outcome +1.
pub fn simulate(seq: &GenerationSequence) -> Result<StabilizerGroup> {
    simulate_with_outcomes(seq, |_| true)
}

/// Simulates the sequence exactly and compares the photon state with the
/// target after every REINIT and at the end. Errors name the first step at
/// which the states differ.
pub fn verify_sequence(
    seq: &GenerationSequence,
    target: &ConcatenatedTarget,
) -> Result<VerificationReport> {
    if seq.photons.len() != target.photon_count() {
        return Err(Error::Verification {
            step: 0,
            reason: format!(
                "sequence maps {} photons, target has {}",
                seq.photons.len(),
                target.photon_count()
            ),
        });
    }
    let mut sim = Simulator::new(seq)?;
    let mut checkpoints = 0;
    let mut last_ok = 0;
    let mut check = |sim: &Simulator, step: usize| -> Result<()> {
        let photons = &seq.photons[..sim.emitted];
        let vertices: BTreeSet<usize> = photons.iter().map(|s| s.outer_vertex).collect();
        let divergence = |reason: String| Error::Verification {
            step,
            reason: format!("{reason} (last matching checkpoint at step {last_ok})"),
        };
        let expected =
            expected_state(target, photons, &vertices).map_err(|e| divergence(e.to_string()))?;
        let actual = sim.photon_state().map_err(|e| divergence(e.to_string()))?;
        if !actual.same_group(&expected) {
            return Err(divergence(format!(
                "photon state after {} photons differs from the target",
                sim.emitted
            )));
        }
        checkpoints += 1;
        last_ok = step;
        Ok(())
    };
    for (i, op) in seq.ops.iter().enumerate() {
        sim.step(i, op, true)?;
        if matches!(op, Instruction::Reinit { .. }) {
            check(&sim, i)?;
        }
    }
    if sim.emitted != seq.photons.len() {
        return Err(Error::Verification {
            step: seq.ops.len(),
            reason: format!("{} of {} photons emitted", sim.emitted, seq.photons.len()),
        });
    }
    for e in 0..2 {
        if sim.state.local_stabilizer(sim.spin(e)).is_none() {
            return Err(Error::Verification {
                step: seq.ops.len(),
                reason: format!("spin {e} is still entangled at the end"),
            });
        }
    }
    check(&sim, seq.ops.len())?;
    let vertices: BTreeSet<usize> = seq.photons.iter().map(|s| s.outer_vertex).collect();
    if vertices.len() != target.outer.len() {
        return Err(Error::Verification {
            step: seq.ops.len(),
            reason: "not every outer vertex was generated".into(),
        });
    }
    Ok(VerificationReport {
        checkpoints,
        photons: seq.photons.len(),
        simulated_qubits: seq.photons.len() + 2,
    })
}
