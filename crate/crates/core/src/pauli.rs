//! Symplectic Pauli operators and stabilizer groups.
//!
//! A [`PauliOperator`] on `n ≤ 64` qubits is stored as two bit masks plus a
//! power of `i`. Bit `j` of `x`/`z` is the X/Z component on qubit `j`; a qubit
//! with both bits set carries `Y` (Hermitian convention, `Y = iXZ`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest qubit count a single operator can act on.
pub const MAX_QUBITS: usize = 64;

/// Default cap on the number of generators a group may be enumerated for.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Global phase `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Phase {
    #[default]
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    fn from_exponent(k: u32) -> Self {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }

    /// `Some(±1)` for real phases.
    pub fn sign(self) -> Option<i8> {
        match self {
            Phase::PlusOne => Some(1),
            Phase::MinusOne => Some(-1),
            _ => None,
        }
    }

    pub fn negate(self) -> Self {
        Phase::from_exponent(self.exponent() as u32 + 2)
    }

    pub fn times(self, other: Phase) -> Self {
        Phase::from_exponent(self.exponent() as u32 + other.exponent() as u32)
    }
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits are supported");
        PauliOperator {
            n,
            x: 0,
            z: 0,
            phase: Phase::PlusOne,
        }
    }

    pub fn from_bits(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::ResourceCap {
                what: "qubit count",
                value: n,
                cap: MAX_QUBITS,
            });
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::Parse(format!("bits set beyond qubit {n}")));
        }
        Ok(PauliOperator { n, x, z, phase })
    }

    /// Single-qubit Pauli `p` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut op = Self::identity(n);
        op.set(q, p);
        op
    }

    /// Product of `p` over all qubits in the bit mask `support`.
    pub fn uniform(n: usize, support: u64, p: Pauli) -> Self {
        let (x, z) = p.bits();
        let support = support & mask(n);
        PauliOperator {
            n,
            x: if x { support } else { 0 },
            z: if z { support } else { 0 },
            phase: Phase::PlusOne,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = self.phase.negate();
        self
    }

    /// Qubits acted on non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range");
        let (x, z) = p.bits();
        let bit = 1u64 << q;
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
    }

    /// Same letters and sign-insensitive equality.
    pub fn eq_up_to_phase(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Operator product `self · other` with exact phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (x1, z1, x2, z2) = (self.x, self.z, other.x, other.z);
        let (y1, xo1, zo1) = (x1 & z1, x1 & !z1, !x1 & z1);
        let (y2, xo2, zo2) = (x2 & z2, x2 & !z2, !x2 & z2);
        // Cyclic order X→Y→Z→X contributes +i, anti-cyclic −i.
        let plus = (xo1 & y2) | (y1 & zo2) | (zo1 & xo2);
        let minus = (xo1 & zo2) | (y1 & xo2) | (zo1 & y2);
        let k = self.phase.exponent() as u32
            + other.phase.exponent() as u32
            + plus.count_ones()
            + 3 * minus.count_ones();
        PauliOperator {
            n: self.n,
            x: x1 ^ x2,
            z: z1 ^ z2,
            phase: Phase::from_exponent(k),
        }
    }

    /// True iff the symplectic inner product is even.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0
    }

    /// True iff, on every qubit, the letter of `self` can be assembled from the
    /// parities listed in `measured`.
    pub fn qubitwise_commutes(&self, measured: &AvailableParities) -> bool {
        self.x & !measured.x == 0 && self.z & !measured.z == 0
    }

    /// Restriction to the qubits in `keep`, relabelled in increasing order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut out = PauliOperator::identity(keep.len());
        for (new, &old) in keep.iter().enumerate() {
            out.set(new, self.get(old));
        }
        out.phase = self.phase;
        out
    }

    /// Embed into a larger register, mapping qubit `j` to `targets[j]`.
    pub fn embed(&self, n: usize, targets: &[usize]) -> Self {
        let mut out = PauliOperator::identity(n);
        for (j, &t) in targets.iter().enumerate() {
            out.set(t, self.get(j));
        }
        out.phase = self.phase;
        out
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            Phase::PlusOne => "+",
            Phase::MinusOne => "-",
            Phase::PlusI => "+i",
            Phase::MinusI => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Accepts an optional phase prefix (`+`, `-`, `+i`, `-i`, `i`) followed by
    /// one letter per qubit; whitespace between letters is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::PlusI, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MinusI, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::PlusOne, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MinusOne, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (Phase::PlusI, r)
        } else {
            (Phase::PlusOne, s)
        };
        let mut op = PauliOperator {
            n: 0,
            x: 0,
            z: 0,
            phase,
        };
        for c in rest.chars().filter(|c| !c.is_whitespace()) {
            let p = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
            };
            if op.n == MAX_QUBITS {
                return Err(Error::ResourceCap {
                    what: "qubit count",
                    value: MAX_QUBITS + 1,
                    cap: MAX_QUBITS,
                });
            }
            op.n += 1;
            op.set(op.n - 1, p);
        }
        Ok(op)
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which single-qubit parities a measurement pattern recovered, per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AvailableParities {
    pub x: u64,
    pub z: u64,
}

/// Abelian group generated by independent, pairwise commuting Hermitian Paulis.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
    // Row-reduced copy of the generators: (pivot bit, row); rows are group elements.
    echelon: Vec<(u32, PauliOperator)>,
}

fn packed(p: &PauliOperator) -> u128 {
    (p.x as u128) | ((p.z as u128) << 64)
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        for g in &generators {
            if g.n != n {
                return Err(Error::Dimension { left: n, right: g.n });
            }
            if !g.phase.is_real() {
                return Err(Error::InvalidGroup(format!("generator {g} is not Hermitian")));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_unchecked(b) {
                    return Err(Error::InvalidGroup(format!("{a} and {b} anticommute")));
                }
            }
        }
        let mut echelon: Vec<(u32, PauliOperator)> = Vec::with_capacity(generators.len());
        for g in &generators {
            let mut row = *g;
            for (pivot, r) in &echelon {
                if packed(&row) >> pivot & 1 == 1 {
                    row = row.mul_unchecked(r);
                }
            }
            let bits = packed(&row);
            if bits == 0 {
                return Err(Error::InvalidGroup(format!(
                    "generator {g} is a product of the others"
                )));
            }
            let pivot = bits.trailing_zeros();
            for (_, r) in echelon.iter_mut() {
                if packed(r) >> pivot & 1 == 1 {
                    *r = r.mul_unchecked(&row);
                }
            }
            echelon.push((pivot, row));
        }
        Ok(StabilizerGroup {
            n,
            generators,
            echelon,
        })
    }

    pub fn trivial(n: usize) -> Self {
        StabilizerGroup {
            n,
            generators: Vec::new(),
            echelon: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.generators.len()
    }

    /// All `2^k` elements. Element `m` is the product of the generators whose
    /// index bit is set in `m`.
    pub fn enumerate(&self) -> Result<Vec<PauliOperator>> {
        self.enumerate_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(&self, cap: usize) -> Result<Vec<PauliOperator>> {
        let k = self.generators.len();
        if k > cap {
            return Err(Error::ResourceCap {
                what: "generator count",
                value: k,
                cap,
            });
        }
        let mut out = Vec::with_capacity(1 << k);
        out.push(PauliOperator::identity(self.n));
        for g in &self.generators {
            let half = out.len();
            for m in 0..half {
                let e = out[m].mul_unchecked(g);
                debug_assert!(e.phase.is_real());
                out.push(e);
            }
        }
        Ok(out)
    }

    /// If `±p` (or `±ip`) lies in the group, the phase `c` with `p = c·s` for
    /// the group element `s`. `None` when no element has the letters of `p`.
    pub fn membership(&self, p: &PauliOperator) -> Option<Phase> {
        if p.n != self.n {
            return None;
        }
        let mut rest = *p;
        for (pivot, r) in &self.echelon {
            if packed(&rest) >> pivot & 1 == 1 {
                rest = rest.mul_unchecked(r);
            }
        }
        // p·R = c·I with R a product of commuting involutions, so p = c·R.
        (packed(&rest) == 0).then_some(rest.phase)
    }

    /// True iff `p` itself, sign included, is a group element.
    pub fn contains(&self, p: &PauliOperator) -> bool {
        self.membership(p) == Some(Phase::PlusOne)
    }

    /// Same set of elements, signs included.
    pub fn same_group(&self, other: &StabilizerGroup) -> bool {
        self.n == other.n
            && self.order() == other.order()
            && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same elements up to signs.
    pub fn same_group_up_to_signs(&self, other: &StabilizerGroup) -> bool {
        self.n == other.n
            && self.order() == other.order()
            && self.generators.iter().all(|g| other.membership(g).is_some())
    }
}

/// GF(2) rank of a set of Pauli letter patterns.
pub fn binary_rank<'a>(ops: impl IntoIterator<Item = &'a PauliOperator>) -> usize {
    independent_subset(ops).len()
}

/// Greedy independent subset (first-come) of the given operators.
pub fn independent_subset<'a>(
    ops: impl IntoIterator<Item = &'a PauliOperator>,
) -> Vec<PauliOperator> {
    let mut basis: Vec<u128> = Vec::new();
    let mut kept = Vec::new();
    for op in ops {
        let mut v = packed(op);
        for b in &basis {
            let pivot = b.trailing_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let pivot = v.trailing_zeros();
            for b in basis.iter_mut() {
                if *b >> pivot & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
            kept.push(*op);
        }
    }
    kept
}
