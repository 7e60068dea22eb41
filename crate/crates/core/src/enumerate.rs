//! Single-emitter progenitor graphs, deduplicated up to marked isomorphism.
//!
//! Every graph reachable from a lone emitter by leaf and path-edge creation is
//! a tree, so marked isomorphism reduces to rooted-tree isomorphism with the
//! emitter as root. Canonical forms are AHU strings; the canonical relabelling
//! is the preorder walk that visits children in canonical-string order.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GenerationOp, GraphState};

/// Default cap on the number of photons in an enumerated progenitor.
pub const DEFAULT_PHOTON_CAP: usize = 8;

fn subtree_codes(g: &GraphState, v: usize, parent: Option<usize>) -> (String, Vec<usize>) {
    let mut children: Vec<(String, Vec<usize>)> = g
        .neighbors(v)
        .filter(|&u| Some(u) != parent)
        .map(|u| subtree_codes(g, u, Some(v)))
        .collect();
    children.sort();
    let mut code = String::from("(");
    let mut order = vec![v];
    for (c, o) in children {
        code.push_str(&c);
        order.extend(o);
    }
    code.push(')');
    (code, order)
}

/// AHU canonical string of a tree rooted at its emitter vertex.
pub fn canonical_form(g: &GraphState) -> Result<String> {
    if !g.is_tree() {
        return Err(Error::NotGeneratable("canonical form needs a tree".into()));
    }
    Ok(subtree_codes(g, g.emitter(), None).0)
}

/// Canonical representative: emitter relabelled to 0, children visited in
/// canonical order.
pub fn canonical_graph(g: &GraphState) -> Result<(String, GraphState)> {
    if !g.is_tree() {
        return Err(Error::NotGeneratable("canonical form needs a tree".into()));
    }
    let (code, order) = subtree_codes(g, g.emitter(), None);
    Ok((code, g.relabel(&order)?))
}

/// Decodes bit `i` of `mask` as the op that creates photon `i` (1 = path edge).
pub fn ops_from_mask(n_photons: usize, mask: u64) -> Vec<GenerationOp> {
    (0..n_photons)
        .map(|i| {
            if mask >> i & 1 == 1 {
                GenerationOp::PathEdge
            } else {
                GenerationOp::Leaf
            }
        })
        .collect()
}

pub fn enumerate_single_emitter_progenitors(n_photons: usize) -> Result<Vec<GraphState>> {
    enumerate_with_cap(n_photons, DEFAULT_PHOTON_CAP)
}

/// All marked graphs from every sequence in `{Leaf, PathEdge}^n_photons`,
/// one canonical representative per isomorphism class, sorted by canonical
/// string.
pub fn enumerate_with_cap(n_photons: usize, cap: usize) -> Result<Vec<GraphState>> {
    if n_photons == 0 {
        return Err(Error::OutOfRange {
            name: "n_photons",
            value: 0.0,
        });
    }
    if n_photons > cap {
        return Err(Error::ResourceCap {
            what: "photon count",
            value: n_photons,
            cap,
        });
    }
    let classes: BTreeMap<String, GraphState> = (0..1u64 << n_photons)
        .into_par_iter()
        .map(|mask| {
            let g = GraphState::from_generation_ops(&ops_from_mask(n_photons, mask));
            canonical_graph(&g).expect("generated graphs are trees")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(classes.into_values().collect())
}
