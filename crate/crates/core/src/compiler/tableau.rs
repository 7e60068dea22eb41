//! Stabilizer-state simulation by Clifford conjugation of generators.

use crate::error::{Error, Result};
use crate::pauli::{independent_subset, Pauli, PauliOperator, Phase, StabilizerGroup, MAX_QUBITS};

/// A pure stabilizer state on `n` qubits, kept as `n` generators.
#[derive(Debug, Clone)]
pub struct StabilizerState {
    n: usize,
    gens: Vec<PauliOperator>,
}

fn single(n: usize, q: usize, p: Pauli) -> PauliOperator {
    PauliOperator::single(n, q, p)
}

fn pair(n: usize, a: usize, pa: Pauli, b: usize, pb: Pauli) -> PauliOperator {
    let mut p = PauliOperator::single(n, a, pa);
    p.set(b, pb);
    p
}

impl StabilizerState {
    /// `|0…0⟩`.
    pub fn zeros(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::ResourceCap {
                what: "simulated qubits",
                value: n,
                cap: MAX_QUBITS,
            });
        }
        Ok(StabilizerState {
            n,
            gens: (0..n).map(|q| single(n, q, Pauli::Z)).collect(),
        })
    }

    pub fn from_group(group: &StabilizerGroup) -> Result<Self> {
        if group.order() != group.num_qubits() {
            return Err(Error::InvalidGroup(format!(
                "{} generators do not fix a state on {} qubits",
                group.order(),
                group.num_qubits()
            )));
        }
        Ok(StabilizerState {
            n: group.num_qubits(),
            gens: group.generators().to_vec(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> StabilizerGroup {
        StabilizerGroup::new(self.n, self.gens.clone()).expect("generators stay valid")
    }

    /// Conjugates every generator by a Clifford given through the images of
    /// `X` and `Z` on the qubits it touches.
    fn conjugate(&mut self, images: &[(usize, PauliOperator, PauliOperator)]) {
        for g in &mut self.gens {
            let mut out = *g;
            for &(q, _, _) in images {
                out.set(q, Pauli::I);
            }
            for (q, ix, iz) in images {
                out = match g.get(*q) {
                    Pauli::I => out,
                    Pauli::X => out.mul_unchecked(ix),
                    Pauli::Z => out.mul_unchecked(iz),
                    // Y = iXZ
                    Pauli::Y => {
                        let o = out.mul_unchecked(ix).mul_unchecked(iz);
                        o.with_phase(o.phase().times(Phase::PlusI))
                    }
                };
            }
            *g = out;
        }
    }

    pub fn h(&mut self, a: usize) {
        let n = self.n;
        self.conjugate(&[(a, single(n, a, Pauli::Z), single(n, a, Pauli::X))]);
    }

    pub fn z(&mut self, a: usize) {
        let n = self.n;
        self.conjugate(&[(a, single(n, a, Pauli::X).negated(), single(n, a, Pauli::Z))]);
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let n = self.n;
        self.conjugate(&[
            (c, pair(n, c, Pauli::X, t, Pauli::X), single(n, c, Pauli::Z)),
            (t, single(n, t, Pauli::X), pair(n, c, Pauli::Z, t, Pauli::Z)),
        ]);
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        let n = self.n;
        self.conjugate(&[
            (a, pair(n, a, Pauli::X, b, Pauli::Z), single(n, a, Pauli::Z)),
            (b, pair(n, a, Pauli::Z, b, Pauli::X), single(n, b, Pauli::Z)),
        ]);
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        for g in &mut self.gens {
            let (pa, pb) = (g.get(a), g.get(b));
            g.set(a, pb);
            g.set(b, pa);
        }
    }

    /// Projects onto the `X_a = ±1` eigenspace. Errors when the requested
    /// outcome has zero probability.
    pub fn measure_x(&mut self, a: usize, plus: bool) -> Result<()> {
        let n = self.n;
        let target = if plus {
            single(n, a, Pauli::X)
        } else {
            single(n, a, Pauli::X).negated()
        };
        let anti: Vec<usize> = (0..n)
            .filter(|&i| !self.gens[i].commutes_unchecked(&target))
            .collect();
        match anti.split_first() {
            None => {
                if self.local_stabilizer(a) == Some(target) {
                    Ok(())
                } else {
                    Err(Error::InvalidGroup(format!(
                        "X measurement on qubit {a} cannot give {}",
                        if plus { "+1" } else { "-1" }
                    )))
                }
            }
            Some((&first, rest)) => {
                let pivot = self.gens[first];
                for &i in rest {
                    self.gens[i] = self.gens[i].mul_unchecked(&pivot);
                }
                self.gens[first] = target;
                Ok(())
            }
        }
    }

    /// Single-qubit Pauli `σ_a` such that `±σ_a` stabilizes the state, if the
    /// qubit is in a product state with the rest.
    pub fn local_stabilizer(&self, a: usize) -> Option<PauliOperator> {
        let mut rows = self.gens.clone();
        let rank = eliminate(&mut rows, full_mask(self.n) & !(1 << a));
        rows[rank..].iter().find(|r| !r.is_identity()).copied()
    }

    /// Resets a qubit that is in a product state with the rest to `|+⟩`.
    pub fn reset_plus(&mut self, a: usize) -> Result<()> {
        let local = self.local_stabilizer(a).ok_or_else(|| {
            Error::InvalidGroup(format!("qubit {a} is entangled and cannot be reset"))
        })?;
        self.clear_qubit(a, &local);
        // `clear_qubit` puts `local` first.
        self.gens[0] = single(self.n, a, Pauli::X);
        Ok(())
    }

    /// Rewrites the generators so exactly one acts on `a` and equals `local`.
    fn clear_qubit(&mut self, a: usize, local: &PauliOperator) {
        // Everything commutes with `local`, so the letter on `a` is I or its own.
        let mut out: Vec<PauliOperator> = vec![*local];
        out.extend(self.gens.iter().map(|g| {
            if g.get(a) == Pauli::I {
                *g
            } else {
                g.mul_unchecked(local)
            }
        }));
        let basis = independent_subset(out.iter());
        debug_assert_eq!(basis.len(), self.n);
        self.gens = basis;
    }

    /// State of the qubits in `keep` (relabelled in increasing order), which
    /// requires the other qubits to be unentangled with them.
    pub fn reduced(&self, keep: &[usize]) -> Result<StabilizerGroup> {
        let kmask = keep.iter().fold(0u64, |m, &k| m | 1 << k);
        let mut rows = self.gens.clone();
        let rank = eliminate(&mut rows, full_mask(self.n) & !kmask);
        let restricted: Vec<PauliOperator> = rows[rank..].iter().map(|g| g.restrict(keep)).collect();
        if restricted.len() != keep.len() {
            return Err(Error::InvalidGroup(format!(
                "discarded qubits are entangled with the kept ones ({} of {} generators survive)",
                restricted.len(),
                keep.len()
            )));
        }
        StabilizerGroup::new(keep.len(), restricted)
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1 << n) - 1
    }
}

/// Row-reduces on the X and Z columns of the qubits in `cols`. Returns the
/// rank; rows from the rank on vanish on those columns.
fn eliminate(rows: &mut [PauliOperator], cols: u64) -> usize {
    let mut rank = 0;
    for q in (0..64).filter(|q| cols >> q & 1 == 1) {
        for z in [false, true] {
            let bit = |p: &PauliOperator| (if z { p.z_bits() } else { p.x_bits() }) >> q & 1 == 1;
            let Some(r) = (rank..rows.len()).find(|&r| bit(&rows[r])) else {
                continue;
            };
            rows.swap(rank, r);
            let pivot = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && bit(row) {
                    *row = row.mul_unchecked(&pivot);
                }
            }
            rank += 1;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn bell_pair() {
        let mut s = StabilizerState::zeros(2).unwrap();
        s.h(0);
        s.cnot(0, 1);
        let g = s.group();
        assert!(g.contains(&p("XX")));
        assert!(g.contains(&p("ZZ")));
        assert!(g.contains(&p("-YY")));
    }

    #[test]
    fn cz_on_plus_states_gives_graph_state() {
        let mut s = StabilizerState::zeros(3).unwrap();
        for q in 0..3 {
            s.h(q);
        }
        s.cz(0, 1);
        s.cz(1, 2);
        let g = s.group();
        for op in ["XZI", "ZXZ", "IZX"] {
            assert!(g.contains(&p(op)), "{op}");
        }
    }

    #[test]
    fn y_sign_under_hadamard() {
        // H Y H = −Y.
        let mut s = StabilizerState::zeros(1).unwrap();
        s.h(0);
        s.gens[0] = p("Y");
        s.h(0);
        assert_eq!(s.gens[0], p("-Y"));
    }

    #[test]
    fn measurement_and_reset() {
        let mut s = StabilizerState::zeros(2).unwrap();
        s.h(0);
        s.cnot(0, 1);
        s.measure_x(0, false).unwrap();
        let g = s.group();
        assert!(g.contains(&p("-XI")));
        assert!(g.contains(&p("-IX")));
        assert!(s.measure_x(1, true).is_err());
        s.reset_plus(0).unwrap();
        let g = s.group();
        assert!(g.contains(&p("XI")));
        assert!(g.contains(&p("-IX")));
        assert_eq!(s.reduced(&[1]).unwrap().generators(), &[p("-X")]);
    }

    #[test]
    fn entangled_qubit_cannot_be_reset() {
        let mut s = StabilizerState::zeros(2).unwrap();
        s.h(0);
        s.cnot(0, 1);
        assert!(s.reset_plus(0).is_err());
        assert!(s.reduced(&[1]).is_err());
    }
}
