#![allow(dead_code)]

use mwg_core::coloring::proper_edge_coloring;
use mwg_core::{BaseGraph, MatrixWeightedGraph, SymMatrix, Tolerances, VertexSet};
use proptest::prelude::*;

pub fn tol() -> Tolerances {
    Tolerances::default()
}

/// `BᵀB` for a random `rank × k` matrix `B`.
pub fn psd(k: usize) -> impl Strategy<Value = SymMatrix> {
    (0..=k).prop_flat_map(move |rank| {
        prop::collection::vec(-1.0f64..1.0, rank * k)
            .prop_map(move |b| SymMatrix::from_upper_fn(k, |i, j| (0..rank).map(|r| b[r * k + i] * b[r * k + j]).sum()))
    })
}

/// Random PSD weights on a random subset of the pairs of `n ≤ max_n` vertices.
pub fn psd_graph(max_n: usize, max_k: usize) -> impl Strategy<Value = MatrixWeightedGraph> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        (prop::collection::vec(any::<bool>(), m), prop::collection::vec(psd(k), m)).prop_map(move |(keep, ws)| {
            let entries: Vec<_> = pairs
                .iter()
                .zip(keep)
                .zip(ws)
                .filter(|((_, keep), _)| *keep)
                .map(|((&(u, v), _), w)| (u, v, w))
                .collect();
            MatrixWeightedGraph::from_edge_list(n, k, entries, &tol()).unwrap()
        })
    })
}

pub fn cube() -> BaseGraph {
    let pairs = (0..8usize).flat_map(|u| (0..3).map(move |b| (u, u ^ (1 << b)))).filter(|(u, v)| u < v);
    BaseGraph::new(8, pairs).unwrap()
}

/// Small regular graphs with a proper coloring by `degree` colors.
pub fn colorable_regular() -> Vec<BaseGraph> {
    vec![
        BaseGraph::cycle(4),
        BaseGraph::cycle(6),
        BaseGraph::complete(4),
        BaseGraph::complete_bipartite(3, 3),
        cube(),
        BaseGraph::complete(6),
    ]
}

/// A `dI`-regular graph: colors `0..r−1` get random PSD weights and the
/// last color gets `cI − Σ`, with `c` the largest eigenvalue of the sum.
pub fn scalar_regular(max_k: usize) -> impl Strategy<Value = MatrixWeightedGraph> {
    (0..colorable_regular().len(), 1..=max_k).prop_flat_map(|(gi, k)| {
        let g = colorable_regular().swap_remove(gi);
        let r = g.regular_degree().unwrap();
        prop::collection::vec(psd(k), r - 1).prop_map(move |ps| {
            let mut sum = SymMatrix::zeros(k);
            for p in &ps {
                sum += p;
            }
            let c = mwg_core::linalg::eigh(&sum).unwrap().max().max(0.0);
            let mut weights_by_color = ps.clone();
            weights_by_color.push(&SymMatrix::scaled_identity(k, c) - &sum);
            let coloring = proper_edge_coloring(&g, r).unwrap();
            let weights = coloring.colors().iter().map(|&c| weights_by_color[c].clone()).collect();
            MatrixWeightedGraph::new(g.clone(), k, weights, &tol()).unwrap()
        })
    })
}

pub fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    prop::collection::vec(any::<bool>(), n).prop_map(move |bits| {
        let idx: Vec<usize> = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
        VertexSet::from_indices(n, &idx).unwrap()
    })
}
