//! Base graphs, scalar weightings and matrix weightings.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{abs, eigh, SymMatrix, Tolerances};
use crate::subset::VertexSet;

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a < b {
            Self { u: a, v: b }
        } else {
            Self { u: b, v: a }
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A simple undirected graph on vertices `0..n`; edges are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    n: usize,
    edges: Vec<Edge>,
    /// Per vertex: `(neighbor, edge index)`, sorted by neighbor.
    incidence: Vec<Vec<(usize, usize)>>,
}

impl BaseGraph {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: a.max(b), bound: n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            edges.push(Edge::new(a, b));
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge { u: w[0].u, v: w[0].v });
        }
        Ok(Self::from_sorted(n, edges))
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.u].push((e.v, i));
            incidence[e.v].push((e.u, i));
        }
        for list in &mut incidence {
            list.sort();
        }
        Self { n, edges, incidence }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| Edge { u, v })).collect();
        Self::from_sorted(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::new(a + b, (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)))).expect("valid K_{a,b}")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::new(10, outer.chain(spokes).chain(inner)).expect("valid Petersen graph")
    }

    /// Disjoint union, relabeling `other` to `n..n + other.n`.
    pub fn disjoint_union(&self, other: &BaseGraph) -> BaseGraph {
        let shift = self.n;
        let pairs = self.edges.iter().map(|e| (e.u, e.v)).chain(other.edges.iter().map(|e| (e.u + shift, e.v + shift)));
        BaseGraph::new(self.n + other.n, pairs).expect("disjoint union is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(neighbor, edge index)` pairs for `v`, sorted by neighbor.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incidence[v].iter().map(|&(u, _)| u)
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.n || b >= self.n {
            return None;
        }
        self.incidence[a].binary_search_by_key(&b, |&(u, _)| u).ok().map(|i| self.incidence[a][i].1)
    }

    /// Geometric degree (number of incident edges).
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `Some(r)` when every vertex has geometric degree `r`.
    pub fn regular_degree(&self) -> Option<usize> {
        let r = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == r).then_some(r)
    }

    /// Component label per vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for y in self.neighbors(x) {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Two-coloring of the vertices, if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let sx = side[x].unwrap();
                for y in self.neighbors(x) {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            stack.push(y);
                        }
                        Some(sy) if sy == sx => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::IndexOutOfRange { index: v, bound: self.n });
        }
        Ok(())
    }
}

/// A graph with a nonnegative real weight per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarWeightedGraph {
    base: BaseGraph,
    weights: Vec<f64>,
}

impl ScalarWeightedGraph {
    pub fn new(base: BaseGraph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != base.edge_count() {
            return Err(Error::DimMismatch { expected: base.edge_count(), found: weights.len() });
        }
        for (e, &w) in base.edges().iter().zip(&weights) {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidScalarWeight { u: e.u, v: e.v });
            }
        }
        Ok(Self { base, weights })
    }

    pub fn unit(base: BaseGraph) -> Self {
        let weights = vec![1.0; base.edge_count()];
        Self { base, weights }
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The `n × n` weighted Laplacian.
    pub fn laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.base.n());
        for (e, &w) in self.base.edges().iter().zip(&self.weights) {
            l.set(e.u, e.u, l.get(e.u, e.u) + w);
            l.set(e.v, e.v, l.get(e.v, e.v) + w);
            l.set(e.u, e.v, l.get(e.u, e.v) - w);
        }
        l
    }

    pub fn adjacency(&self) -> SymMatrix {
        let mut a = SymMatrix::zeros(self.base.n());
        for (e, &w) in self.base.edges().iter().zip(&self.weights) {
            a.set(e.u, e.v, a.get(e.u, e.v) + w);
        }
        a
    }
}

/// The algebraic-degree classification of a matrix-weighted graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Regularity {
    Irregular,
    /// Every `D_v` equals the given matrix, which is not a multiple of `I`.
    Regular(SymMatrix),
    /// Every `D_v` equals `d·I`.
    ScalarRegular(f64),
}

impl Regularity {
    pub fn scalar_degree(&self) -> Option<f64> {
        match self {
            Regularity::ScalarRegular(d) => Some(*d),
            _ => None,
        }
    }

    pub fn is_regular(&self) -> bool {
        !matches!(self, Regularity::Irregular)
    }
}

/// An undirected graph with a `k × k` PSD weight matrix on every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWeightedGraph {
    base: BaseGraph,
    k: usize,
    weights: Vec<SymMatrix>,
}

impl MatrixWeightedGraph {
    /// Builds a graph from an edge list. Repeated pairs are merged by summing
    /// their weights; every merged weight must be `k × k` and PSD.
    pub fn from_edge_list(
        n: usize,
        k: usize,
        entries: impl IntoIterator<Item = (usize, usize, SymMatrix)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Edge, SymMatrix> = BTreeMap::new();
        for (a, b, w) in entries {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: a.max(b), bound: n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if w.dim() != k {
                return Err(Error::DimMismatch { expected: k, found: w.dim() });
            }
            merged.entry(Edge::new(a, b)).and_modify(|acc| *acc += &w).or_insert(w);
        }
        let (edges, weights): (Vec<Edge>, Vec<SymMatrix>) = merged.into_iter().unzip();
        let base = BaseGraph::from_sorted(n, edges);
        Self::new(base, k, weights, tol)
    }

    /// Attaches weights (in edge order) to a base graph.
    pub fn new(base: BaseGraph, k: usize, weights: Vec<SymMatrix>, tol: &Tolerances) -> Result<Self> {
        if weights.len() != base.edge_count() {
            return Err(Error::DimMismatch { expected: base.edge_count(), found: weights.len() });
        }
        for (e, w) in base.edges().iter().zip(&weights) {
            if w.dim() != k {
                return Err(Error::DimMismatch { expected: k, found: w.dim() });
            }
            let s = eigh(w)?;
            if s.min() < -tol.psd * s.abs_max().max(1.0) {
                return Err(Error::NotPsdEdge { u: e.u, v: e.v, min_eigenvalue: s.min() });
            }
        }
        Ok(Self { base, k, weights })
    }

    /// `W_e = w_e · I_k`.
    pub fn lift_identity(g: &ScalarWeightedGraph, k: usize) -> Self {
        assert!(k >= 1, "block size must be positive");
        let weights = g.weights().iter().map(|&w| SymMatrix::scaled_identity(k, w)).collect();
        Self { base: g.base().clone(), k, weights }
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        self.base.edges()
    }

    pub fn weights(&self) -> &[SymMatrix] {
        &self.weights
    }

    pub fn weight(&self, edge_index: usize) -> &SymMatrix {
        &self.weights[edge_index]
    }

    /// `W_uv`, or `None` when `u` and `v` are not adjacent.
    pub fn weight_between(&self, u: usize, v: usize) -> Option<&SymMatrix> {
        self.base.edge_index(u, v).map(|i| &self.weights[i])
    }

    pub fn iter_edges(&self) -> impl Iterator<Item = (Edge, &SymMatrix)> {
        self.base.edges().iter().copied().zip(&self.weights)
    }

    /// Algebraic degree `D_v = Σ_u W_uv`.
    pub fn degree(&self, v: usize) -> Result<SymMatrix> {
        self.base.check_vertex(v)?;
        let mut d = SymMatrix::zeros(self.k);
        for &(_, e) in self.base.incident(v) {
            d += &self.weights[e];
        }
        Ok(d)
    }

    pub fn degrees(&self) -> Vec<SymMatrix> {
        (0..self.n()).map(|v| self.degree(v).expect("vertex in range")).collect()
    }

    pub fn geometric_degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.base.degree(v)).collect()
    }

    /// Classifies the algebraic degrees: equal within `resid`, and a multiple
    /// of the identity within `resid`.
    pub fn regularity(&self, tol: &Tolerances) -> Regularity {
        let degrees = self.degrees();
        let Some(first) = degrees.first() else {
            return Regularity::ScalarRegular(0.0);
        };
        let scale = first.frobenius_norm().max(1.0);
        if degrees.iter().any(|d| d.max_abs_diff(first) > tol.resid * scale) {
            return Regularity::Irregular;
        }
        let mean: SymMatrix = {
            let mut acc = SymMatrix::zeros(self.k);
            for d in &degrees {
                acc += d;
            }
            acc.scale(1.0 / degrees.len() as f64)
        };
        let d = mean.trace() / self.k as f64;
        if mean.max_abs_diff(&SymMatrix::scaled_identity(self.k, d)) <= tol.resid * scale {
            Regularity::ScalarRegular(d)
        } else {
            Regularity::Regular(mean)
        }
    }

    /// `(G, tr W)`.
    pub fn scalarize_trace(&self) -> ScalarWeightedGraph {
        let weights = self.weights.iter().map(|w| w.trace().max(0.0)).collect();
        ScalarWeightedGraph { base: self.base.clone(), weights }
    }

    /// `vol(S) = Σ_{s∈S} D_s`.
    pub fn volume(&self, s: &VertexSet) -> Result<SymMatrix> {
        if s.universe() != self.n() {
            return Err(Error::DimMismatch { expected: self.n(), found: s.universe() });
        }
        let mut vol = SymMatrix::zeros(self.k);
        for v in s.iter() {
            vol += &self.degree(v)?;
        }
        Ok(vol)
    }

    /// `vol(G)`, the volume of the whole vertex set.
    pub fn total_volume(&self) -> SymMatrix {
        let mut vol = SymMatrix::zeros(self.k);
        for w in &self.weights {
            vol += &w.scale(2.0);
        }
        vol
    }

    /// The same graph with all-zero weights removed.
    pub fn without_zero_edges(&self) -> Self {
        let (edges, weights): (Vec<Edge>, Vec<SymMatrix>) =
            self.iter_edges().filter(|(_, w)| !w.is_zero()).map(|(e, w)| (e, w.clone())).unzip();
        Self { base: BaseGraph::from_sorted(self.n(), edges), k: self.k, weights }
    }

    /// Checks that every weight is an orthogonal projection within `resid`;
    /// the error carries the first offending edge.
    pub fn has_projection_weights(&self, tol: &Tolerances) -> core::result::Result<(), Edge> {
        for (e, w) in self.iter_edges() {
            let sq = w.to_matrix().mul(&w.to_matrix());
            let dev = sq.as_slice().iter().zip(w.as_slice()).fold(0.0f64, |m, (a, b)| m.max(abs(a - b)));
            if dev > tol.resid {
                return Err(e);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r3() -> f64 {
        3f64.sqrt() / 4.0
    }

    fn a() -> SymMatrix {
        SymMatrix::diag(&[1.0, 0.0])
    }

    fn b() -> SymMatrix {
        SymMatrix::from_row_major(2, vec![0.25, r3(), r3(), 0.75], 0.0).unwrap()
    }

    fn c() -> SymMatrix {
        SymMatrix::from_row_major(2, vec![0.25, -r3(), -r3(), 0.75], 0.0).unwrap()
    }

    /// K4 with the perfect matchings {01,23}, {02,13}, {03,12} weighted a, b, c.
    fn k4_abc() -> MatrixWeightedGraph {
        let t = Tolerances::default();
        let entries = vec![(0, 1, a()), (2, 3, a()), (0, 2, b()), (1, 3, b()), (0, 3, c()), (1, 2, c())];
        MatrixWeightedGraph::from_edge_list(4, 2, entries, &t).unwrap()
    }

    #[test]
    fn base_graph_validation() {
        assert_eq!(BaseGraph::new(3, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert!(matches!(BaseGraph::new(3, [(0, 5)]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(BaseGraph::new(3, [(0, 1), (1, 0)]), Err(Error::DuplicateEdge { .. })));
        let p = BaseGraph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert_eq!(p.regular_degree(), Some(3));
        assert!(p.bipartition().is_none());
        assert!(BaseGraph::complete_bipartite(3, 3).bipartition().is_some());
    }

    #[test]
    fn parallel_entries_are_summed() {
        let t = Tolerances::default();
        let g = MatrixWeightedGraph::from_edge_list(2, 2, vec![(0, 1, a()), (1, 0, b())], &t).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert!(g.weight(0).max_abs_diff(&(&a() + &b())) < 1e-15);
    }

    #[test]
    fn non_psd_weight_names_edge() {
        let t = Tolerances::default();
        let err =
            MatrixWeightedGraph::from_edge_list(3, 2, vec![(2, 1, SymMatrix::diag(&[1.0, -1.0]))], &t).unwrap_err();
        assert!(matches!(err, Error::NotPsdEdge { u: 1, v: 2, .. }));
    }

    #[test]
    fn degree_examples() {
        let t = Tolerances::default();
        let g = MatrixWeightedGraph::from_edge_list(3, 2, vec![(0, 1, a()), (0, 2, b())], &t).unwrap();
        let d0 = g.degree(0).unwrap();
        let expected = SymMatrix::from_row_major(2, vec![1.25, r3(), r3(), 0.75], 0.0).unwrap();
        assert!(d0.max_abs_diff(&expected) < 1e-15);
        let isolated = MatrixWeightedGraph::from_edge_list(3, 2, vec![(0, 1, a())], &t).unwrap();
        assert!(isolated.degree(2).unwrap().is_zero());
        assert!(matches!(g.degree(3), Err(Error::IndexOutOfRange { .. })));
        for d in k4_abc().degrees() {
            assert!(d.max_abs_diff(&SymMatrix::scaled_identity(2, 1.5)) < 1e-15);
        }
    }

    #[test]
    fn regularity_examples() {
        let t = Tolerances::default();
        let cube_like = MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(BaseGraph::complete(4)), 2);
        assert_eq!(cube_like.regularity(&t), Regularity::ScalarRegular(3.0));
        match k4_abc().regularity(&t) {
            Regularity::ScalarRegular(d) => assert!((d - 1.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        let path = MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(BaseGraph::path(3)), 2);
        assert_eq!(path.regularity(&t), Regularity::Irregular);
        let single = MatrixWeightedGraph::from_edge_list(2, 2, vec![(0, 1, a())], &t).unwrap();
        assert!(matches!(single.regularity(&t), Regularity::Regular(_)));
    }

    #[test]
    fn scalarize_and_lift() {
        let t = Tolerances::default();
        for w in k4_abc().scalarize_trace().weights() {
            assert!((w - 1.0).abs() < 1e-15);
        }
        let g = MatrixWeightedGraph::from_edge_list(2, 2, vec![(0, 1, SymMatrix::diag(&[3.0, 4.0]))], &t).unwrap();
        assert_eq!(g.scalarize_trace().weights(), &[7.0]);
        let base = ScalarWeightedGraph::new(BaseGraph::cycle(4), vec![1.0, 2.0, 0.5, 3.0]).unwrap();
        let round = MatrixWeightedGraph::lift_identity(&base, 3).scalarize_trace();
        for (x, y) in round.weights().iter().zip(base.weights()) {
            assert_eq!(*x, 3.0 * y);
        }
    }

    #[test]
    fn volume_examples() {
        let g = k4_abc();
        let all = VertexSet::full(4);
        assert!(g.volume(&all).unwrap().max_abs_diff(&SymMatrix::scaled_identity(2, 6.0)) < 1e-14);
        assert!(g.volume(&VertexSet::empty(4)).unwrap().is_zero());
        let one = VertexSet::from_indices(4, &[2]).unwrap();
        assert_eq!(g.volume(&one).unwrap(), g.degree(2).unwrap());
        assert!(g.total_volume().max_abs_diff(&g.volume(&all).unwrap()) < 1e-14);
    }

    #[test]
    fn zero_weights_can_be_dropped() {
        let t = Tolerances::default();
        let g = MatrixWeightedGraph::from_edge_list(
            3,
            1,
            vec![(0, 1, SymMatrix::zeros(1)), (1, 2, SymMatrix::identity(1))],
            &t,
        )
        .unwrap();
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.without_zero_edges().edges(), &[Edge::new(1, 2)]);
    }
}
