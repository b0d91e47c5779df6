//! Cheeger ratios of `dI`-regular matrix-weighted graphs.
//!
//! Only subsets containing vertex 0 are visited (complementation leaves both
//! ratios unchanged), in Gray-code order so the boundary `E(S, V∖S)` is
//! updated one vertex at a time.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expansion::edge_count;
use crate::graph::{MatrixWeightedGraph, Regularity};
use crate::linalg::{abs, eigh, kernel_dim, SymMatrix, Tolerances};
use crate::report::BoundReport;
use crate::spectral::{laplacian, laplacian_spectrum};
use crate::subset::VertexSet;

/// Default largest `n` for exhaustive minimization (`2^{n−1}` subsets).
pub const N_EXHAUSTIVE: usize = 20;

fn scalar_degree(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<f64> {
    match g.regularity(tol) {
        Regularity::ScalarRegular(d) => Ok(d),
        _ => Err(Error::NotScalarRegular),
    }
}

/// `(h^tr(S), h^⪯(S))`: the trace and the matrix `E(S, V∖S)` divided by
/// `d · min(|S|, |V∖S|)`.
pub fn cheeger_ratios(g: &MatrixWeightedGraph, s: &VertexSet, tol: &Tolerances) -> Result<(f64, SymMatrix)> {
    let d = scalar_degree(g, tol)?;
    if s.universe() != g.n() {
        return Err(Error::DimMismatch { expected: g.n(), found: s.universe() });
    }
    if s.is_empty() || s.is_full() {
        return Err(Error::EmptyOrFullSubset);
    }
    let boundary = edge_count(g, s, &s.complement())?;
    let denom = d * s.len().min(g.n() - s.len()) as f64;
    Ok(ratio(&boundary, denom))
}

fn ratio(boundary: &SymMatrix, denom: f64) -> (f64, SymMatrix) {
    if denom == 0.0 {
        // d = 0: every boundary is zero as well
        return (0.0, SymMatrix::zeros(boundary.dim()));
    }
    let h = boundary.scale(1.0 / denom);
    (h.trace(), h)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheegerReport {
    pub d: f64,
    /// `h^tr_G = min_S h^tr(S)`.
    pub h_trace: f64,
    /// A minimizing subset (the smallest bitset among near-ties).
    pub argmin: Vec<usize>,
    /// `α = min_S λ_min(h^⪯(S))`.
    pub h_loewner_alpha: f64,
    pub alpha_argmin: Vec<usize>,
    /// Smallest and largest numerical rank of `E(S, V∖S)` over all `S`.
    pub boundary_rank_range: (usize, usize),
    pub subsets_checked: u64,
    /// `(S, h^⪯(S))` for every visited subset, when requested.
    pub per_subset: Option<Vec<(Vec<usize>, SymMatrix)>>,
}

/// Exhaustive minimization over nonempty proper subsets up to complement.
pub fn cheeger_constants(g: &MatrixWeightedGraph, tol: &Tolerances, keep_per_subset: bool) -> Result<CheegerReport> {
    cheeger_constants_with_limit(g, tol, keep_per_subset, N_EXHAUSTIVE)
}

pub fn cheeger_constants_with_limit(
    g: &MatrixWeightedGraph,
    tol: &Tolerances,
    keep_per_subset: bool,
    limit: usize,
) -> Result<CheegerReport> {
    let d = scalar_degree(g, tol)?;
    let (n, k) = (g.n(), g.k());
    if n > limit.min(63) {
        return Err(Error::TooLarge { n, limit: limit.min(63) });
    }
    if n < 2 {
        return Err(Error::EmptyOrFullSubset);
    }
    let blocks = neighbor_blocks(g);
    let full = (1u64 << n) - 1;
    // S = {0} to start; the boundary is every edge at vertex 0.
    let mut mask = 1u64;
    let mut boundary = SymMatrix::zeros(k);
    for (_, w) in &blocks[0] {
        boundary += w;
    }
    let mut best = (f64::INFINITY, u64::MAX);
    let mut best_alpha = (f64::INFINITY, u64::MAX);
    let mut ranks = (usize::MAX, 0usize);
    let mut per_subset = keep_per_subset.then(Vec::new);
    let steps = 1u64 << (n - 1);
    let mut checked = 0u64;
    for step in 0..steps {
        if step > 0 {
            let v = step.trailing_zeros() as usize + 1;
            mask ^= 1 << v;
            let entering = mask >> v & 1 == 1;
            for (u, w) in &blocks[v] {
                // an edge to the same side leaves the boundary, otherwise joins it
                let same_side = (mask >> u & 1 == 1) == entering;
                let sign = if same_side { -1.0 } else { 1.0 };
                boundary = &boundary + &w.scale(sign);
            }
        }
        if mask == full {
            continue;
        }
        checked += 1;
        let size = mask.count_ones() as usize;
        let (h_tr, h) = ratio(&boundary, d * size.min(n - size) as f64);
        let s = eigh(&h)?;
        let lam_min = s.values().first().copied().unwrap_or(0.0);
        let cutoff = tol.rank_rel * s.max().max(1.0);
        let r = s.values().iter().filter(|&&x| x > cutoff).count();
        ranks = (ranks.0.min(r), ranks.1.max(r));
        best = pick(best, (h_tr, mask), tol.check);
        best_alpha = pick(best_alpha, (lam_min, mask), tol.check);
        if let Some(table) = per_subset.as_mut() {
            table.push((VertexSet::from_mask(n, mask).to_vec(), h));
        }
    }
    Ok(CheegerReport {
        d,
        h_trace: best.0,
        argmin: VertexSet::from_mask(n, best.1).to_vec(),
        h_loewner_alpha: best_alpha.0,
        alpha_argmin: VertexSet::from_mask(n, best_alpha.1).to_vec(),
        boundary_rank_range: ranks,
        subsets_checked: checked,
        per_subset,
    })
}

/// Keeps the smaller value; values within `eps` tie and the smaller mask wins.
fn pick(best: (f64, u64), cand: (f64, u64), eps: f64) -> (f64, u64) {
    let scale = abs(best.0).max(1.0);
    if best.0.is_infinite() || cand.0 < best.0 - eps * scale {
        cand
    } else if abs(cand.0 - best.0) <= eps * scale && cand.1 < best.1 {
        (cand.0.min(best.0), cand.1)
    } else {
        best
    }
}

fn neighbor_blocks(g: &MatrixWeightedGraph) -> Vec<Vec<(usize, SymMatrix)>> {
    let mut out = alloc::vec![Vec::new(); g.n()];
    for (e, w) in g.iter_edges() {
        out[e.u].push((e.v, w.clone()));
        out[e.v].push((e.u, w.clone()));
    }
    out
}

/// Checks `h^tr_G ≥ (1/2d) Σ_{i≤k} λ_{k+i}` and, subset by subset,
/// `(λ_{k+1}/2d) I ⪯ h^⪯(S)`; the second is reported through `α`.
pub fn check_cheeger_lower_bounds(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<(BoundReport, BoundReport)> {
    let report = cheeger_constants(g, tol, false)?;
    let k = g.k();
    let lam = laplacian_spectrum(g)?;
    let lam = lam.values();
    let two_d = 2.0 * report.d;
    let sum: f64 = lam[k..2 * k].iter().sum();
    let (trace_bound, loewner_bound) = if two_d > 0.0 { (sum / two_d, lam[k] / two_d) } else { (0.0, 0.0) };
    let trace = BoundReport::single("cheeger_trace_lower", trace_bound, report.h_trace, tol.check)
        .with("sum_lambda_k+i", sum)
        .with("d", report.d);
    let loewner = BoundReport::single("cheeger_loewner_lower", loewner_bound, report.h_loewner_alpha, tol.loewner)
        .with("lambda_k+1", lam[k])
        .with("subsets_checked", report.subsets_checked as f64);
    Ok((trace, loewner))
}

/// Evidence that the Laplacian spectrum cannot bound the Cheeger constants
/// from above: `λ_{2k} = 0` while every boundary has full rank.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleCertificate {
    pub kernel_dim: usize,
    pub k: usize,
    pub lambda_2k: f64,
    pub min_boundary_rank: usize,
    pub alpha: f64,
    pub h_trace: f64,
    pub witness_alpha: Vec<usize>,
    pub witness_h_trace: Vec<usize>,
}

impl CounterexampleCertificate {
    pub fn is_counterexample(&self, tol: &Tolerances) -> bool {
        self.kernel_dim >= 2 * self.k
            && self.min_boundary_rank == self.k
            && self.alpha > tol.loewner
            && self.h_trace > tol.check
    }
}

pub fn verify_counterexample(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<CounterexampleCertificate> {
    let report = cheeger_constants(g, tol, false)?;
    let k = g.k();
    let lam = laplacian_spectrum(g)?;
    Ok(CounterexampleCertificate {
        kernel_dim: kernel_dim(&laplacian(g), tol)?,
        k,
        lambda_2k: lam.values().get(2 * k - 1).copied().unwrap_or(f64::NAN),
        min_boundary_rank: report.boundary_rank_range.0,
        alpha: report.h_loewner_alpha,
        h_trace: report.h_trace,
        witness_alpha: report.alpha_argmin,
        witness_h_trace: report.argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BaseGraph, ScalarWeightedGraph};
    use alloc::vec;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn lift(b: BaseGraph, k: usize) -> MatrixWeightedGraph {
        MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(b), k)
    }

    #[test]
    fn single_edge_ratios() {
        let g = lift(BaseGraph::path(2), 3);
        let (h_tr, h) = cheeger_ratios(&g, &VertexSet::from_indices(2, &[0]).unwrap(), &t()).unwrap();
        assert_eq!(h_tr, 3.0);
        assert_eq!(h, SymMatrix::identity(3));
        let r = cheeger_constants(&g, &t(), false).unwrap();
        assert_eq!((r.h_trace, r.argmin.clone()), (3.0, vec![0]));
        let (tr, lo) = check_cheeger_lower_bounds(&lift(BaseGraph::path(2), 2), &t()).unwrap();
        assert!((tr.lhs - 2.0).abs() < 1e-12 && tr.holds && lo.holds);
    }

    #[test]
    fn four_cycle() {
        let r = cheeger_constants(&lift(BaseGraph::cycle(4), 1), &t(), true).unwrap();
        assert_eq!(r.h_trace, 0.5);
        assert_eq!(r.argmin, vec![0, 1]);
        assert_eq!(r.subsets_checked, 7);
        assert_eq!(r.per_subset.unwrap().len(), 7);
    }

    #[test]
    fn disconnected_is_zero() {
        let g = lift(BaseGraph::cycle(3).disjoint_union(&BaseGraph::cycle(3)), 2);
        let r = cheeger_constants(&g, &t(), false).unwrap();
        assert_eq!(r.h_trace, 0.0);
        assert_eq!(r.argmin, vec![0, 1, 2]);
        let (h_tr, h) = cheeger_ratios(&g, &VertexSet::from_indices(6, &[3, 4, 5]).unwrap(), &t()).unwrap();
        assert!(h_tr == 0.0 && h.is_zero());
        assert!(!verify_counterexample(&g, &t()).unwrap().is_counterexample(&t()));
    }

    #[test]
    fn incremental_matches_direct() {
        let g = lift(BaseGraph::petersen(), 2);
        let r = cheeger_constants(&g, &t(), true).unwrap();
        for (s, h) in r.per_subset.unwrap().iter().step_by(17) {
            let (_, direct) = cheeger_ratios(&g, &VertexSet::from_indices(10, s).unwrap(), &t()).unwrap();
            assert!(direct.max_abs_diff(h) < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let g = lift(BaseGraph::path(3), 1);
        assert_eq!(cheeger_constants(&g, &t(), false), Err(Error::NotScalarRegular));
        let g = lift(BaseGraph::cycle(4), 1);
        assert_eq!(cheeger_ratios(&g, &VertexSet::empty(4), &t()), Err(Error::EmptyOrFullSubset));
        assert_eq!(cheeger_constants_with_limit(&g, &t(), false, 3), Err(Error::TooLarge { n: 4, limit: 3 }));
    }

    #[test]
    fn identity_connected_is_not_counterexample() {
        let c = verify_counterexample(&lift(BaseGraph::complete(4), 2), &t()).unwrap();
        assert_eq!(c.kernel_dim, 2);
        assert!(!c.is_counterexample(&t()));
    }
}
