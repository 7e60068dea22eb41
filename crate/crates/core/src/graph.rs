//! Graph states with a marked emitter vertex.

use std::fmt::Write as _;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator, StabilizerGroup, MAX_QUBITS};

/// Single-emitter graph growth step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationOp {
    /// New photonic vertex attached to the emitter.
    Leaf,
    /// New vertex attached to the emitter, which then takes over the emitter
    /// role; the old emitter vertex becomes photonic.
    PathEdge,
}

/// Simple undirected graph on at most 64 vertices with one marked vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphState {
    adj: Vec<u64>,
    emitter: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    emitter: usize,
}

impl GraphState {
    /// `n` isolated vertices.
    pub fn empty(n: usize, emitter: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::ResourceCap {
                what: "vertex count",
                value: n,
                cap: MAX_QUBITS,
            });
        }
        if emitter >= n {
            return Err(Error::InvalidVertex { vertex: emitter, n });
        }
        Ok(GraphState {
            adj: vec![0; n],
            emitter,
        })
    }

    /// The lone emitter vertex every generation sequence starts from.
    pub fn single_emitter() -> Self {
        GraphState {
            adj: vec![0],
            emitter: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[[usize; 2]], emitter: usize) -> Result<Self> {
        let mut g = Self::empty(n, emitter)?;
        for &[a, b] in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::InvalidVertex { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::Parse(format!("self-loop at vertex {a}")));
            }
            g.adj[a] |= 1 << b;
            g.adj[b] |= 1 << a;
        }
        Ok(g)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_edges(raw.n, &raw.edges, raw.emitter)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json_repr()).expect("graph serializes")
    }

    fn json_repr(&self) -> GraphJson {
        GraphJson {
            n: self.len(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            emitter: self.emitter,
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn emitter(&self) -> usize {
        self.emitter
    }

    pub fn with_emitter(&self, emitter: usize) -> Result<Self> {
        self.check_vertex(emitter)?;
        let mut g = self.clone();
        g.emitter = emitter;
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.len() {
            return Err(Error::InvalidVertex {
                vertex: v,
                n: self.len(),
            });
        }
        Ok(())
    }

    /// Neighbourhood of `v` as a bit mask.
    pub fn neighborhood(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.adj[v];
        (0..self.len()).filter(move |&u| row >> u & 1 == 1)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn toggle_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "self-loops are not allowed");
        self.adj[a] ^= 1 << b;
        self.adj[b] ^= 1 << a;
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.neighbors(a) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Appends an isolated vertex and returns its index.
    pub fn add_vertex(&mut self) -> usize {
        assert!(self.len() < MAX_QUBITS, "graph is full");
        self.adj.push(0);
        self.len() - 1
    }

    /// `S_i = X_i ∏_{j∈N(i)} Z_j`, one per vertex.
    pub fn stabilizer_generators(&self) -> StabilizerGroup {
        let n = self.len();
        let gens = (0..n)
            .map(|i| {
                PauliOperator::from_bits(n, 1 << i, self.adj[i], Default::default())
                    .expect("in range")
            })
            .collect();
        StabilizerGroup::new(n, gens).expect("graph-state generators are independent")
    }

    pub fn stabilizer(&self, i: usize) -> PauliOperator {
        PauliOperator::from_bits(self.len(), 1 << i, self.adj[i], Default::default())
            .expect("in range")
    }

    /// Complements the subgraph induced on `N(q)`.
    pub fn local_complement(&self, q: usize) -> Result<Self> {
        self.check_vertex(q)?;
        let mut g = self.clone();
        let nq = self.adj[q];
        for a in self.neighbors(q) {
            // a keeps q; its edges inside N(q) flip.
            g.adj[a] ^= nq & !(1 << a);
        }
        Ok(g)
    }

    /// Image of `p` under the local Clifford implementing LC at `q`:
    /// on `q`: X→X, Y→−Z, Z→Y; on each neighbour: X→−Y, Y→X, Z→Z.
    pub fn lc_pauli_transform(&self, p: &PauliOperator, q: usize) -> Result<PauliOperator> {
        self.check_vertex(q)?;
        if p.num_qubits() != self.len() {
            return Err(Error::Dimension {
                left: p.num_qubits(),
                right: self.len(),
            });
        }
        let mut out = *p;
        let mut negate = false;
        let (mapped_q, flip_q) = match p.get(q) {
            Pauli::X => (Pauli::X, false),
            Pauli::Y => (Pauli::Z, true),
            Pauli::Z => (Pauli::Y, false),
            Pauli::I => (Pauli::I, false),
        };
        out.set(q, mapped_q);
        negate ^= flip_q;
        for a in self.neighbors(q) {
            let (mapped, flip) = match p.get(a) {
                Pauli::X => (Pauli::Y, true),
                Pauli::Y => (Pauli::X, false),
                other => (other, false),
            };
            out.set(a, mapped);
            negate ^= flip;
        }
        Ok(if negate { out.negated() } else { out })
    }

    pub fn apply_generation_op(&self, op: GenerationOp) -> Self {
        let mut g = self.clone();
        let v = g.add_vertex();
        g.toggle_edge(self.emitter, v);
        if op == GenerationOp::PathEdge {
            g.emitter = v;
        }
        g
    }

    /// Graph produced by running `ops` from a lone emitter vertex. Vertex `k`
    /// is the one created by the `k`-th op (vertex 0 is the starting vertex).
    pub fn from_generation_ops(ops: &[GenerationOp]) -> Self {
        ops.iter()
            .fold(Self::single_emitter(), |g, &op| g.apply_generation_op(op))
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in 0..self.len() {
                if frontier >> v & 1 == 1 {
                    next |= self.adj[v];
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.len()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.len()
    }

    /// Tree whose non-leaf vertices form a path. Paths and stars qualify.
    pub fn is_caterpillar(&self) -> bool {
        if !self.is_tree() {
            return false;
        }
        if self.len() <= 2 {
            return true;
        }
        let spine: Vec<usize> = (0..self.len()).filter(|&v| self.degree(v) > 1).collect();
        let spine_degree = |v: usize| spine.iter().filter(|&&u| self.has_edge(u, v)).count();
        // The spine induces a subtree; a subtree with maximum degree 2 is a path.
        spine.iter().all(|&v| spine_degree(v) <= 2)
    }

    /// Recovers a single-emitter generation sequence for this marked graph.
    pub fn generation_sequence(&self) -> Result<GenerationPlan> {
        if !self.is_tree() {
            return Err(Error::NotGeneratable("graph is not a tree".into()));
        }
        // Walk from the emitter along the unique non-leaf continuation.
        let mut path = vec![self.emitter];
        let mut prev: Option<usize> = None;
        let mut cur = self.emitter;
        loop {
            let inner: Vec<usize> = self
                .neighbors(cur)
                .filter(|&u| Some(u) != prev && self.degree(u) > 1)
                .collect();
            match inner.as_slice() {
                [] => break,
                [next] => {
                    prev = Some(cur);
                    cur = *next;
                    path.push(cur);
                }
                _ => {
                    return Err(Error::NotGeneratable(format!(
                        "vertex {cur} branches into more than one non-leaf subtree"
                    )))
                }
            }
        }
        path.reverse();
        let mut ops = Vec::with_capacity(self.len().saturating_sub(1));
        let mut order = vec![path[0]];
        for (i, &v) in path.iter().enumerate() {
            let next = path.get(i + 1).copied();
            let before = if i == 0 { None } else { Some(path[i - 1]) };
            for leaf in self.neighbors(v) {
                if Some(leaf) != next && Some(leaf) != before {
                    ops.push(GenerationOp::Leaf);
                    order.push(leaf);
                }
            }
            if let Some(next) = next {
                ops.push(GenerationOp::PathEdge);
                order.push(next);
            }
        }
        debug_assert_eq!(order.len(), self.len());
        Ok(GenerationPlan { ops, order })
    }

    /// Relabels vertices: new vertex `k` is old vertex `order[k]`.
    pub fn relabel(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            self.check_vertex(old)?;
            inverse[old] = new;
        }
        if order.len() != n || inverse.contains(&usize::MAX) {
            return Err(Error::Parse("relabelling is not a permutation".into()));
        }
        let mut g = GraphState::empty(n, inverse[self.emitter])?;
        for (a, b) in self.edges() {
            g.toggle_edge(inverse[a], inverse[b]);
        }
        Ok(g)
    }

    /// Isomorphism that maps emitter to emitter.
    pub fn is_marked_isomorphic(&self, other: &GraphState) -> bool {
        if self.len() != other.len() || self.edge_count() != other.edge_count() {
            return false;
        }
        is_isomorphic_matching(
            &self.to_petgraph(),
            &other.to_petgraph(),
            |a, b| a == b,
            |_, _| true,
        )
    }

    fn to_petgraph(&self) -> UnGraph<bool, ()> {
        let mut g = UnGraph::new_undirected();
        let nodes: Vec<_> = (0..self.len()).map(|v| g.add_node(v == self.emitter)).collect();
        for (a, b) in self.edges() {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    }

    /// Graphviz rendering; the emitter vertex is filled red.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{name}\" {{");
        for v in 0..self.len() {
            if v == self.emitter {
                let _ = writeln!(s, "  {v} [style=filled, fillcolor=red];");
            } else {
                let _ = writeln!(s, "  {v} [style=filled, fillcolor=lightblue];");
            }
        }
        for (a, b) in self.edges() {
            let _ = writeln!(s, "  {a} -- {b};");
        }
        s.push_str("}\n");
        s
    }
}

impl Serialize for GraphState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.json_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        GraphState::from_edges(raw.n, &raw.edges, raw.emitter).map_err(serde::de::Error::custom)
    }
}

/// A generation sequence together with the vertex each op creates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationPlan {
    pub ops: Vec<GenerationOp>,
    /// `order[0]` is the starting vertex, `order[k]` the vertex made by op `k-1`.
    pub order: Vec<usize>,
}
