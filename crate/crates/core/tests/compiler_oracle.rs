mod common;

use std::collections::BTreeSet;

use common::{apply_pauli, codes, dense_run, dense_target, fidelity, outer_targets};
use concat_codes::compiler::{
    compile, count_resources, simulate, simulate_with_outcomes, verify_sequence, CompileMode,
    ConcatenatedTarget, GenerationSequence, Instruction,
};
use concat_codes::pauli::{PauliOperator, StabilizerGroup};
use concat_codes::{Error, GenerationOp, GraphCode, GraphState, LogicalBasis};

const MODES: [CompileMode; 2] = [CompileMode::TwoEmitter, CompileMode::EmitterMemory];

/// The ten-vertex branched chain: a spine with a leaf hanging off every
/// other spine vertex.
fn branched_chain() -> GraphState {
    use GenerationOp::*;
    GraphState::from_generation_ops(&[
        Leaf, PathEdge, Leaf, PathEdge, PathEdge, Leaf, PathEdge, Leaf, PathEdge,
    ])
}

#[test]
fn dense_simulation_matches_target() {
    let mut checked = 0;
    for m in 1..=5 {
        for outer in outer_targets(m) {
            for n in 1..=3 {
                if m * n > 10 {
                    continue;
                }
                for inner in codes(n) {
                    for mode in MODES {
                        let seq = compile(&outer, &inner, mode).unwrap();
                        let got = dense_run(&seq, |_| true).unwrap();
                        let want = dense_target(&outer, &inner, &seq.photons);
                        assert!(
                            (fidelity(&got, &want) - 1.0).abs() < 1e-9,
                            "{mode} outer {} inner {}",
                            outer.to_json(),
                            inner.progenitor().to_json()
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

/// `Z̄` of the inner code placed on the photons of outer vertex `v`.
fn logical_z_on(seq: &GenerationSequence, inner: &GraphCode, v: usize) -> PauliOperator {
    let lz = inner.logical(LogicalBasis::Z);
    let mut out = PauliOperator::identity(seq.photons.len());
    for (i, &vertex) in inner.code_qubits().iter().enumerate() {
        let p = seq
            .photons
            .iter()
            .position(|s| s.outer_vertex == v && s.inner_vertex == vertex)
            .unwrap();
        out.set(p, lz.get(i));
    }
    out
}

fn conjugate(group: &StabilizerGroup, p: &PauliOperator) -> StabilizerGroup {
    let gens = group
        .generators()
        .iter()
        .map(|g| if g.commutes(p).unwrap() { *g } else { g.negated() })
        .collect();
    StabilizerGroup::new(group.num_qubits(), gens).unwrap()
}

/// A −1 outcome on the spin holding outer vertex `v` leaves the photons in
/// `Z̄_v` applied to the +1 state. Each measurement maps to a distinct vertex.
#[test]
fn minus_outcome_is_a_logical_z_byproduct() {
    for m in 1..=5 {
        for outer in outer_targets(m) {
            for n in 1..=3 {
                for inner in codes(n) {
                    for mode in MODES {
                        let seq = compile(&outer, &inner, mode).unwrap();
                        let plus = simulate(&seq).unwrap();
                        let flips: Vec<PauliOperator> =
                            (0..m).map(|v| logical_z_on(&seq, &inner, v)).collect();
                        let mut hit = BTreeSet::new();
                        for (i, op) in seq.ops.iter().enumerate() {
                            if !matches!(op, Instruction::MeasureX { .. }) {
                                continue;
                            }
                            let minus = simulate_with_outcomes(&seq, |s| s != i).unwrap();
                            assert!(!minus.same_group(&plus));
                            let v = (0..m)
                                .find(|&v| minus.same_group(&conjugate(&plus, &flips[v])))
                                .unwrap_or_else(|| panic!("{mode} step {i}: no Z̄ byproduct"));
                            assert!(hit.insert(v));
                        }
                        assert_eq!(hit.len(), m);
                    }
                }
            }
        }
    }
}

#[test]
fn dense_minus_branch_agrees_with_tableau() {
    let outer = branched_chain();
    let inner = &codes(1)[0];
    for mode in MODES {
        let seq = compile(&outer, inner, mode).unwrap();
        let plus = simulate(&seq).unwrap();
        for (i, op) in seq.ops.iter().enumerate() {
            if !matches!(op, Instruction::MeasureX { .. }) {
                continue;
            }
            let dense = dense_run(&seq, |s| s != i).unwrap();
            let tab = simulate_with_outcomes(&seq, |s| s != i).unwrap();
            // Every generator of the tableau result stabilizes the dense state.
            for g in tab.generators() {
                let applied = apply_pauli(g, &dense);
                let overlap: num_complex::Complex64 =
                    dense.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum();
                assert!((overlap.re - 1.0).abs() < 1e-9, "{mode} step {i}: {g}");
            }
            assert!(!tab.same_group(&plus));
        }
    }
}

#[test]
fn spin_spin_gates_depend_only_on_the_outer_graph() {
    let outer = branched_chain();
    let path_edges = 5;
    let mut depths = Vec::new();
    for n in 1..=8 {
        let inner = GraphCode::from_progenitor(&GraphState::from_generation_ops(
            &vec![GenerationOp::PathEdge; n],
        ))
        .unwrap();
        for mode in MODES {
            let seq = compile(&outer, &inner, mode).unwrap();
            let r = count_resources(&seq);
            assert_eq!(r.photons, 10 * n);
            let expected = match mode {
                CompileMode::TwoEmitter => 9,
                CompileMode::EmitterMemory => 9 + 1 + path_edges,
            };
            assert_eq!(r.spin_spin_gates, expected, "{mode} n={n}");
            if mode == CompileMode::TwoEmitter {
                depths.push(r.max_emitter_depth);
            }
        }
    }
    assert!(depths.windows(2).all(|d| d[1] > d[0]), "{depths:?}");
    // Every inner code of a given size gives the same count.
    for n in 1..=4 {
        for inner in codes(n) {
            let seq = compile(&outer, &inner, CompileMode::TwoEmitter).unwrap();
            assert_eq!(count_resources(&seq).spin_spin_gates, 9);
        }
    }
}

#[test]
fn both_modes_verify_against_the_same_target() {
    let outer = branched_chain();
    for n in 1..=4 {
        for inner in codes(n) {
            let target = ConcatenatedTarget::new(outer.clone(), inner.clone());
            let a = verify_sequence(&compile(&outer, &inner, CompileMode::TwoEmitter).unwrap(), &target)
                .unwrap();
            let b =
                verify_sequence(&compile(&outer, &inner, CompileMode::EmitterMemory).unwrap(), &target)
                    .unwrap();
            assert_eq!(a.photons, 10 * n);
            assert_eq!(a.checkpoints, b.checkpoints);
        }
    }
}

#[test]
fn tampered_sequences_fail_verification() {
    let outer = branched_chain();
    let inner = codes(3).remove(2);
    let target = ConcatenatedTarget::new(outer.clone(), inner.clone());
    let seq = compile(&outer, &inner, CompileMode::TwoEmitter).unwrap();
    for (i, op) in seq.ops.iter().enumerate() {
        if !matches!(op, Instruction::Cz { .. } | Instruction::SpinRotation { .. }) {
            continue;
        }
        let mut bad = seq.clone();
        bad.ops.remove(i);
        match verify_sequence(&bad, &target) {
            Err(Error::Verification { step, .. }) => assert!(step >= i, "{step} < {i}"),
            other => panic!("removing step {i} gave {other:?}"),
        }
    }
    let mut short = seq.clone();
    short.photons.pop();
    assert!(matches!(verify_sequence(&short, &target), Err(Error::Verification { .. })));
}

#[test]
fn non_caterpillar_outer_is_rejected() {
    let spider = GraphState::from_edges(
        7,
        &[[0, 1], [1, 2], [0, 3], [3, 4], [0, 5], [5, 6]],
        0,
    )
    .unwrap();
    let inner = &codes(2)[0];
    for mode in MODES {
        assert!(matches!(compile(&spider, inner, mode), Err(Error::NotGeneratable(_))));
    }
}
