//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use concat_codes::compiler::{GenerationSequence, Instruction, PhotonSite};
use concat_codes::enumerate::{enumerate_single_emitter_progenitors, ops_from_mask};
use concat_codes::fusion::Decoding;
use concat_codes::pauli::{Pauli, PauliOperator, Phase};
use concat_codes::{GraphCode, GraphState, LogicalBasis};
use num_complex::Complex64 as C;

pub fn codes(n: usize) -> Vec<GraphCode> {
    enumerate_single_emitter_progenitors(n)
        .unwrap()
        .iter()
        .map(|g| GraphCode::from_progenitor(g).unwrap())
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Outcome {
    Success,
    Fail,
    Loss,
}

fn all_outcomes(n: usize) -> Vec<Vec<Outcome>> {
    (0..3usize.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let o = [Outcome::Success, Outcome::Fail, Outcome::Loss][k % 3];
                    k /= 3;
                    o
                })
                .collect()
        })
        .collect()
}

fn probability(outcomes: &[Outcome], eta: f64, p_fail: f64) -> f64 {
    let t = eta * eta;
    outcomes
        .iter()
        .map(|o| match o {
            Outcome::Success => t * (1.0 - p_fail),
            Outcome::Fail => t * p_fail,
            Outcome::Loss => 1.0 - t,
        })
        .product()
}

/// Available `(XX, ZZ)` parities per pair; `w_j = 1` means a failure keeps XX.
fn availability(outcomes: &[Outcome], w: u64) -> Vec<(bool, bool)> {
    outcomes
        .iter()
        .enumerate()
        .map(|(j, o)| match o {
            Outcome::Success => (true, true),
            Outcome::Fail => (w >> j & 1 == 1, w >> j & 1 == 0),
            Outcome::Loss => (false, false),
        })
        .collect()
}

fn readable(p: &PauliOperator, avail: &[(bool, bool)]) -> bool {
    avail.iter().enumerate().all(|(j, &(ax, az))| {
        (p.x_bits() >> j & 1 == 0 || ax) && (p.z_bits() >> j & 1 == 0 || az)
    })
}

/// Is `L·s` readable for some `s` in the span of `gens`? Solved by GF(2)
/// elimination on the unreadable coordinates.
fn recoverable_linear(l: &PauliOperator, gens: &[PauliOperator], avail: &[(bool, bool)]) -> bool {
    let n = avail.len();
    let forbidden = |p: &PauliOperator| -> u64 {
        let mut v = 0u64;
        for (j, &(ax, az)) in avail.iter().enumerate() {
            if !ax && p.x_bits() >> j & 1 == 1 {
                v |= 1 << j;
            }
            if !az && p.z_bits() >> j & 1 == 1 {
                v |= 1 << (n + j);
            }
        }
        v
    };
    let mut rows: Vec<u64> = Vec::new();
    for g in gens {
        let mut v = forbidden(g);
        for r in &rows {
            v = v.min(v ^ r);
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut target = forbidden(l);
    for r in &rows {
        target = target.min(target ^ r);
    }
    target == 0
}

pub fn success_oracle(code: &GraphCode, basis: LogicalBasis, w: u64, eta: f64, p_fail: f64) -> f64 {
    let l = code.logical(basis);
    let gens = code.stabilizers().generators();
    all_outcomes(code.n_code())
        .iter()
        .filter(|o| recoverable_linear(&l, gens, &availability(o, w)))
        .map(|o| probability(o, eta, p_fail))
        .sum()
}

/// `p[fx][fz]` from the 16 two-photon depolarizing errors, flips read off by
/// commutation with `XX` and `ZZ`.
pub fn joint_flips(epsilon: f64) -> [[f64; 2]; 2] {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let xx: PauliOperator = "XX".parse().unwrap();
    let zz: PauliOperator = "ZZ".parse().unwrap();
    let mut p = [[0.0; 2]; 2];
    for a in letters {
        for b in letters {
            let mut e = PauliOperator::single(2, 0, a);
            e.set(1, b);
            let pr = |l: Pauli| if l == Pauli::I { 1.0 - epsilon } else { epsilon / 3.0 };
            let fx = !e.commutes(&xx).unwrap() as usize;
            let fz = !e.commutes(&zz).unwrap() as usize;
            p[fx][fz] += pr(a) * pr(b);
        }
    }
    p
}

fn flip_bit(p: &PauliOperator, flips: &[(usize, usize)]) -> usize {
    flips
        .iter()
        .enumerate()
        .map(|(j, &(fx, fz))| {
            (p.x_bits() >> j & 1) as usize * fx ^ (p.z_bits() >> j & 1) as usize * fz
        })
        .fold(0, |a, b| a ^ b)
}

pub fn error_oracle(
    code: &GraphCode,
    basis: LogicalBasis,
    w: u64,
    eta: f64,
    p_fail: f64,
    epsilon: f64,
    decoding: Decoding,
) -> f64 {
    let n = code.n_code();
    let logicals = code.logical_set(basis).unwrap();
    let stabs = code.stabilizers().enumerate().unwrap();
    let joint = joint_flips(epsilon);
    let (mut num, mut den) = (0.0, 0.0);
    for o in all_outcomes(n) {
        let avail = availability(&o, w);
        // ML must not depend on the representative, so take the last readable
        // one. Raw parity is representative-dependent; use the first.
        let rep = match decoding {
            Decoding::MaximumLikelihood => logicals.iter().rev().find(|l| readable(l, &avail)),
            Decoding::Uncorrected => logicals.iter().find(|l| readable(l, &avail)),
        };
        let Some(rep) = rep else {
            continue;
        };
        let checks: Vec<&PauliOperator> = stabs.iter().filter(|s| readable(s, &avail)).collect();
        let mut table: BTreeMap<Vec<usize>, [f64; 2]> = BTreeMap::new();
        for config in 0..4usize.pow(n as u32) {
            let flips: Vec<(usize, usize)> =
                (0..n).map(|j| (config >> (2 * j) & 1, config >> (2 * j + 1) & 1)).collect();
            let pr: f64 = flips.iter().map(|&(fx, fz)| joint[fx][fz]).product();
            let syndrome: Vec<usize> = checks.iter().map(|s| flip_bit(s, &flips)).collect();
            table.entry(syndrome).or_insert([0.0; 2])[flip_bit(rep, &flips)] += pr;
        }
        let error: f64 = match decoding {
            Decoding::MaximumLikelihood => table.values().map(|p| p[0].min(p[1])).sum(),
            Decoding::Uncorrected => table.values().map(|p| p[1]).sum(),
        };
        let pi = probability(&o, eta, p_fail);
        num += pi * error;
        den += pi;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}


/// Every generatable outer target with `m` vertices, marked vertex last. The
/// first op is fixed since both choices give the same two-vertex graph.
pub fn outer_targets(m: usize) -> Vec<GraphState> {
    if m == 1 {
        return vec![GraphState::single_emitter()];
    }
    (0..1u64 << (m - 1))
        .filter(|mask| mask & 1 == 0)
        .map(|mask| GraphState::from_generation_ops(&ops_from_mask(m - 1, mask)))
        .collect()
}

/// Dense simulation of a generation sequence. Spins are qubits 0 and 1,
/// photon `p` is qubit `2 + p`. Measurement outcomes come from `plus`.
/// Returns the photon state with leaf frames undone, or `None` if the chosen
/// outcomes have zero probability.
pub fn dense_run(seq: &GenerationSequence, mut plus: impl FnMut(usize) -> bool) -> Option<Vec<C>> {
    let n = 2 + seq.photons.len();
    assert!(n <= 14, "dense oracle limited to 14 qubits");
    let mut psi = vec![C::new(0.0, 0.0); 1 << n];
    psi[0] = C::new(1.0, 0.0);
    for (i, op) in seq.ops.iter().enumerate() {
        match *op {
            Instruction::InitEmitter { emitter } => h(&mut psi, emitter),
            Instruction::SpinRotation { emitter } => h(&mut psi, emitter),
            Instruction::EmitPhoton { emitter, photon } => cnot(&mut psi, emitter, 2 + photon),
            Instruction::Cz { a, b } => cz(&mut psi, a, b),
            Instruction::Swap { a, b } => {
                cnot(&mut psi, a, b);
                cnot(&mut psi, b, a);
                cnot(&mut psi, a, b);
            }
            Instruction::MeasureX { emitter } => {
                h(&mut psi, emitter);
                let keep = if plus(i) { 0 } else { 1 };
                for (b, a) in psi.iter_mut().enumerate() {
                    if b >> emitter & 1 != keep {
                        *a = C::new(0.0, 0.0);
                    }
                }
                let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                if norm < 1e-9 {
                    return None;
                }
                psi.iter_mut().for_each(|a| *a /= norm);
                h(&mut psi, emitter);
            }
            Instruction::Reinit { emitter } => {
                // The spin is in a product |±⟩ state after measurement.
                h(&mut psi, emitter);
                let mut out = vec![C::new(0.0, 0.0); psi.len()];
                for (b, a) in psi.iter().enumerate() {
                    out[b & !(1 << emitter)] += a;
                }
                psi = out;
                h(&mut psi, emitter);
            }
        }
    }
    for (p, site) in seq.photons.iter().enumerate() {
        if site.hadamard_frame {
            h(&mut psi, 2 + p);
        }
    }
    // Spins end in |±⟩ (or untouched |0⟩): rotate to a computational state and
    // read off the one nonzero slice.
    for e in 0..2 {
        if seq.ops.iter().any(|op| matches!(op, Instruction::InitEmitter { emitter } if *emitter == e)) {
            h(&mut psi, e);
        }
    }
    let slices: Vec<Vec<C>> = (0..4)
        .map(|s| (0..1usize << (n - 2)).map(|b| psi[b << 2 | s]).collect())
        .collect();
    let norms: Vec<f64> = slices.iter().map(|v| v.iter().map(|a| a.norm_sqr()).sum()).collect();
    let best = (0..4).max_by(|&a, &b| norms[a].total_cmp(&norms[b])).unwrap();
    assert!((norms[best] - 1.0).abs() < 1e-9, "spins not disentangled: {norms:?}");
    Some(slices[best].clone())
}

fn h(psi: &mut [C], q: usize) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for b in 0..psi.len() {
        if b >> q & 1 == 0 {
            let (a0, a1) = (psi[b], psi[b | 1 << q]);
            psi[b] = (a0 + a1) * s;
            psi[b | 1 << q] = (a0 - a1) * s;
        }
    }
}

fn cnot(psi: &mut [C], c: usize, t: usize) {
    for b in 0..psi.len() {
        if b >> c & 1 == 1 && b >> t & 1 == 0 {
            psi.swap(b, b | 1 << t);
        }
    }
}

fn cz(psi: &mut [C], a: usize, b: usize) {
    for (i, amp) in psi.iter_mut().enumerate() {
        if i >> a & 1 == 1 && i >> b & 1 == 1 {
            *amp = -*amp;
        }
    }
}

/// Photon amplitudes of the concatenated target: the graph on photons and
/// virtual outer vertices, projected on `⟨+|` for every virtual vertex.
///
/// The sum over virtual assignments `v` is `Σ_v (−1)^{O(v) + v·c(b)}`, with
/// `O` the outer-edge parity and `c(b)` the virtual vertices hit an odd number
/// of times by photons set in `b`: a Walsh–Hadamard transform of `(−1)^O`.
pub fn dense_target(outer: &GraphState, inner: &GraphCode, photons: &[PhotonSite]) -> Vec<C> {
    let p = photons.len();
    let m = outer.len();
    let g = inner.progenitor();
    let q = inner.input_qubit();
    let mut walsh: Vec<f64> = (0..1usize << m)
        .map(|v| {
            let odd = outer.edges().iter().filter(|(x, y)| v >> x & v >> y & 1 == 1).count() % 2;
            if odd == 1 { -1.0 } else { 1.0 }
        })
        .collect();
    let mut len = 1;
    while len < walsh.len() {
        for i in (0..walsh.len()).step_by(2 * len) {
            for j in i..i + len {
                let (a, b) = (walsh[j], walsh[j + len]);
                walsh[j] = a + b;
                walsh[j + len] = a - b;
            }
        }
        len *= 2;
    }
    let mut vals = vec![C::new(0.0, 0.0); 1 << p];
    for (b, val) in vals.iter_mut().enumerate() {
        let mut c = 0usize;
        let mut parity = 0;
        for (i, si) in photons.iter().enumerate() {
            if b >> i & 1 == 0 {
                continue;
            }
            if g.has_edge(si.inner_vertex, q) {
                c ^= 1 << si.outer_vertex;
            }
            for (j, sj) in photons.iter().enumerate().skip(i + 1) {
                if b >> j & 1 == 1
                    && si.outer_vertex == sj.outer_vertex
                    && g.has_edge(si.inner_vertex, sj.inner_vertex)
                {
                    parity ^= 1;
                }
            }
        }
        let sign = if parity == 1 { -1.0 } else { 1.0 };
        *val = C::new(sign * walsh[c], 0.0);
    }
    let norm = vals.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    vals.iter().map(|a| a / norm).collect()
}

/// `|⟨a|b⟩|` for normalized vectors.
pub fn fidelity(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C>().norm()
}

/// `P|ψ⟩`, qubit `q` being bit `q` of the index.
pub fn apply_pauli(p: &PauliOperator, psi: &[C]) -> Vec<C> {
    let phase = match p.phase() {
        Phase::PlusOne => C::new(1.0, 0.0),
        Phase::PlusI => C::new(0.0, 1.0),
        Phase::MinusOne => C::new(-1.0, 0.0),
        Phase::MinusI => C::new(0.0, -1.0),
    };
    let mut out = vec![C::new(0.0, 0.0); psi.len()];
    for (b, amp) in psi.iter().enumerate() {
        let mut target = b;
        let mut c = phase * amp;
        for q in 0..p.num_qubits() {
            let bit = b >> q & 1;
            match p.get(q) {
                Pauli::I => {}
                Pauli::X => target ^= 1 << q,
                Pauli::Z => {
                    if bit == 1 {
                        c = -c;
                    }
                }
                Pauli::Y => {
                    target ^= 1 << q;
                    c *= if bit == 0 { C::new(0.0, 1.0) } else { C::new(0.0, -1.0) };
                }
            }
        }
        out[target] += c;
    }
    out
}
