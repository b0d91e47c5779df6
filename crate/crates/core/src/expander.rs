//! Matrix-weighted expanders from a 1-factorization and a tight fusion frame.

use alloc::vec::Vec;

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::frame::FusionFrame;
use crate::graph::{BaseGraph, MatrixWeightedGraph, Regularity};
use crate::linalg::{abs, cluster_count, sqrt, Tolerances};
use crate::report::BoundReport;
use crate::spectral::adjacency_spectrum;

/// Gives every edge of color `c` the weight `P_{assignment[c]}`.
/// `assignment = None` uses the identity map.
pub fn build_expander_with(
    g: &BaseGraph,
    coloring: &EdgeColoring,
    frame: &FusionFrame,
    assignment: Option<&[usize]>,
    tol: &Tolerances,
) -> Result<MatrixWeightedGraph> {
    let r = coloring.r();
    if frame.len() != r {
        return Err(Error::FrameSizeMismatch { expected: r, found: frame.len() });
    }
    let coloring = EdgeColoring::new(g, coloring.colors().to_vec(), r)?;
    coloring.require_one_factorization(g)?;
    frame.verify_tight(tol)?;
    let weights: Vec<_> =
        coloring.colors().iter().map(|&c| frame.projections()[assignment.map_or(c, |a| a[c])].clone()).collect();
    MatrixWeightedGraph::new(g.clone(), frame.k(), weights, tol)
}

pub fn build_expander(
    g: &BaseGraph,
    coloring: &EdgeColoring,
    frame: &FusionFrame,
    tol: &Tolerances,
) -> Result<MatrixWeightedGraph> {
    build_expander_with(g, coloring, frame, None, tol)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExpanderReport {
    pub d: f64,
    pub k: usize,
    pub n: usize,
    /// `d − max(|μ_{k+1}|, |μ_{kn}|)`.
    pub eta: f64,
    /// `μ_{k+1}`, the largest nontrivial eigenvalue.
    pub mu_max: f64,
    /// `μ_{kn}`.
    pub mu_min: f64,
    /// Number of eigenvalues clustered at `d`.
    pub trivial_multiplicity: usize,
    /// Set when the cluster at `d` is larger than `k`.
    pub multiplicity_warning: bool,
    /// `2(ℓ/k)√(r−1)`, for uniform rank `ℓ` and geometric degree `r`.
    pub alon_boppana_matrix: Option<f64>,
    /// `2√(d−1)`, when `d > 1`.
    pub alon_boppana_classical: Option<f64>,
}

/// The two-sided expansion constant of a `dI`-regular graph with
/// projection weights.
pub fn eta(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<ExpanderReport> {
    let d = match g.regularity(tol) {
        Regularity::ScalarRegular(d) => d,
        _ => return Err(Error::NotScalarRegular),
    };
    g.has_projection_weights(tol).map_err(|e| Error::NotProjectionWeights { u: e.u, v: e.v })?;
    let (n, k) = (g.n(), g.k());
    let mu = adjacency_spectrum(g)?;
    let trivial = cluster_count(mu.values(), d, tol.rank_rel * d.max(1.0));
    let (mu_max, mu_min) = if n * k > k { (mu.mu(k + 1), mu.mu(k * n)) } else { (0.0, 0.0) };
    let eta = d - abs(mu_max).max(abs(mu_min));

    let ranks: Vec<usize> = g.weights().iter().map(|w| libm::round(w.trace()) as usize).collect();
    let uniform = ranks.first().filter(|&&l| ranks.iter().all(|&x| x == l)).copied();
    let geometric = g.base().regular_degree();
    let alon_boppana_matrix = match (uniform, geometric) {
        (Some(l), Some(r)) if r >= 1 && k > 0 => Some(2.0 * l as f64 / k as f64 * sqrt((r - 1) as f64)),
        _ => None,
    };
    let alon_boppana_classical = (d > 1.0).then(|| 2.0 * sqrt(d - 1.0));
    Ok(ExpanderReport {
        d,
        k,
        n,
        eta,
        mu_max,
        mu_min,
        trivial_multiplicity: trivial,
        multiplicity_warning: trivial > k,
        alon_boppana_matrix,
        alon_boppana_classical,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlonBoppana {
    /// `d = rℓ/k`.
    pub d: f64,
    /// `2(ℓ/k)√(r−1)`.
    pub matrix_bound: f64,
    /// `2√(d−1)`.
    pub classical_bound: f64,
    /// `√(r−1)/r ≤ √(d−1)/d`, checked only for `2 < d < r`.
    pub comparison: Option<BoundReport>,
}

pub fn alon_boppana_compare(r: usize, l: usize, k: usize, tol: &Tolerances) -> Result<AlonBoppana> {
    if r < 2 {
        return Err(Error::DomainError("Alon-Boppana comparison needs r >= 2"));
    }
    if k == 0 || l == 0 || l > k {
        return Err(Error::DomainError("Alon-Boppana comparison needs 1 <= l <= k"));
    }
    let (rf, lf, kf) = (r as f64, l as f64, k as f64);
    let d = rf * lf / kf;
    if d <= 1.0 {
        return Err(Error::DomainError("classical bound needs d > 1"));
    }
    let comparison = (2.0 < d && d < rf)
        .then(|| BoundReport::single("sqrt(r-1)/r <= sqrt(d-1)/d", sqrt(rf - 1.0) / rf, sqrt(d - 1.0) / d, tol.check));
    Ok(AlonBoppana {
        d,
        matrix_bound: 2.0 * lf / kf * sqrt(rf - 1.0),
        classical_bound: 2.0 * sqrt(d - 1.0),
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::proper_edge_coloring;
    use crate::frame::equiangular_2d;
    use crate::graph::ScalarWeightedGraph;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn k4_with_three_lines() {
        let g = BaseGraph::complete(4);
        let c = proper_edge_coloring(&g, 3).unwrap();
        let m = build_expander(&g, &c, &equiangular_2d(3).unwrap(), &t()).unwrap();
        match m.regularity(&t()) {
            Regularity::ScalarRegular(d) => assert!((d - 1.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let rep = eta(&m, &t()).unwrap();
        assert!(rep.eta <= rep.d);
        assert!((rep.alon_boppana_matrix.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        for w in m.scalarize_trace().weights() {
            assert!((w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bipartite_with_equiangular_frame() {
        for r in 2..=5 {
            let g = BaseGraph::complete_bipartite(r, r);
            let c = proper_edge_coloring(&g, r).unwrap();
            let m = build_expander(&g, &c, &equiangular_2d(r).unwrap(), &t()).unwrap();
            assert_eq!(m.regularity(&t()).scalar_degree().map(|d| (d * 2.0).round()), Some(r as f64));
        }
    }

    #[test]
    fn complete_graph_identity() {
        for n in 3..=6 {
            let m = MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(BaseGraph::complete(n)), 2);
            let rep = eta(&m, &t()).unwrap();
            assert!((rep.eta - (n as f64 - 2.0)).abs() < 1e-10);
            assert!(!rep.multiplicity_warning);
            assert_eq!(rep.trivial_multiplicity, 2);
        }
    }

    #[test]
    fn disconnected_has_zero_eta() {
        let two = BaseGraph::complete(4).disjoint_union(&BaseGraph::complete(4));
        let m = MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(two), 2);
        let rep = eta(&m, &t()).unwrap();
        assert!(rep.eta.abs() < 1e-10);
        assert!(rep.multiplicity_warning);
    }

    #[test]
    fn construction_errors() {
        let g = BaseGraph::complete(4);
        let c = proper_edge_coloring(&g, 3).unwrap();
        let f2 = equiangular_2d(2).unwrap();
        assert_eq!(build_expander(&g, &c, &f2, &t()), Err(Error::FrameSizeMismatch { expected: 3, found: 2 }));
        let f = equiangular_2d(3).unwrap();
        let not_tight = FusionFrame::new(2, alloc::vec![f.projections()[0].clone(); 3], &t()).unwrap();
        assert!(matches!(build_expander(&g, &c, &not_tight, &t()), Err(Error::NotTight { .. })));
    }

    #[test]
    fn alon_boppana_values() {
        let ab = alon_boppana_compare(4, 1, 2, &t()).unwrap();
        assert!((ab.matrix_bound - 3f64.sqrt()).abs() < 1e-12);
        assert!((ab.classical_bound - 2.0).abs() < 1e-12);
        assert!(ab.comparison.is_none());
        let same = alon_boppana_compare(4, 2, 2, &t()).unwrap();
        assert!((same.matrix_bound - same.classical_bound).abs() < 1e-12);
        let odd = alon_boppana_compare(3, 1, 2, &t()).unwrap();
        assert!((odd.matrix_bound - 2f64.sqrt()).abs() < 1e-12);
        assert!(odd.comparison.is_none());
        let mid = alon_boppana_compare(6, 1, 2, &t()).unwrap();
        assert!(mid.comparison.unwrap().holds);
        assert!(alon_boppana_compare(2, 1, 2, &t()).is_err());
    }
}
