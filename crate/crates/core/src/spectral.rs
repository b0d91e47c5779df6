//! Block operators of a matrix-weighted graph and the spectral inequalities
//! relating them.
//!
//! Vertex `v` owns rows `v·k .. (v+1)·k` of every `kn × kn` operator.

use alloc::vec::Vec;

use crate::error::Result;
use crate::graph::MatrixWeightedGraph;
use crate::linalg::{abs, eigh, pseudo_sqrt_inv, Spectrum, SymMatrix, Tolerances};
use crate::report::BoundReport;

/// `A`, `D`, `L = D − A` and the normalized `L̃ = D^{†/2} L D^{†/2}`,
/// `Ã = D^{†/2} A D^{†/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBundle {
    pub k: usize,
    pub n: usize,
    pub adjacency: SymMatrix,
    pub degree: SymMatrix,
    pub laplacian: SymMatrix,
    /// Block-diagonal `D^{†/2}`.
    pub degree_pinv_sqrt: SymMatrix,
    pub normalized_laplacian: SymMatrix,
    pub normalized_adjacency: SymMatrix,
}

pub fn adjacency(g: &MatrixWeightedGraph) -> SymMatrix {
    let k = g.k();
    let mut a = SymMatrix::zeros(k * g.n());
    for (e, w) in g.iter_edges() {
        a.add_block(e.u * k, e.v * k, w, 1.0);
    }
    a
}

pub fn degree_matrix(g: &MatrixWeightedGraph) -> SymMatrix {
    let k = g.k();
    let mut d = SymMatrix::zeros(k * g.n());
    for (v, dv) in g.degrees().iter().enumerate() {
        d.set_block(v * k, v * k, dv);
    }
    d
}

/// `L` assembled edge by edge: `+W` on both diagonal blocks, `−W` off-diagonal.
pub fn laplacian(g: &MatrixWeightedGraph) -> SymMatrix {
    let k = g.k();
    let mut l = SymMatrix::zeros(k * g.n());
    for (e, w) in g.iter_edges() {
        l.add_block(e.u * k, e.u * k, w, 1.0);
        l.add_block(e.v * k, e.v * k, w, 1.0);
        l.add_block(e.u * k, e.v * k, w, -1.0);
    }
    l
}

pub fn assemble(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<OperatorBundle> {
    let k = g.k();
    let n = g.n();
    let adjacency = adjacency(g);
    let degree = degree_matrix(g);
    let laplacian = &degree - &adjacency;
    let mut half = SymMatrix::zeros(k * n);
    for (v, dv) in g.degrees().iter().enumerate() {
        half.set_block(v * k, v * k, &pseudo_sqrt_inv(dv, tol)?);
    }
    let normalized_laplacian = laplacian.congruence(&half);
    let normalized_adjacency = adjacency.congruence(&half);
    Ok(OperatorBundle {
        k,
        n,
        adjacency,
        degree,
        laplacian,
        degree_pinv_sqrt: half,
        normalized_laplacian,
        normalized_adjacency,
    })
}

/// `⟨x, Lx⟩ = Σ_e ⟨x_v − x_u, W_e (x_v − x_u)⟩`, evaluated edge by edge.
pub fn laplacian_quadratic_form(g: &MatrixWeightedGraph, x: &[f64]) -> f64 {
    let k = g.k();
    let mut total = 0.0;
    let mut diff = alloc::vec![0.0; k];
    for (e, w) in g.iter_edges() {
        for i in 0..k {
            diff[i] = x[e.v * k + i] - x[e.u * k + i];
        }
        let wd = w.mul_vec(&diff);
        total += diff.iter().zip(&wd).map(|(a, b)| a * b).sum::<f64>();
    }
    total
}

/// Laplacian eigenvalues `λ_1 ≤ … ≤ λ_{kn}`.
pub fn laplacian_spectrum(g: &MatrixWeightedGraph) -> Result<Spectrum> {
    eigh(&laplacian(g))
}

/// Adjacency eigenvalues, indexed in decreasing order `μ_1 ≥ μ_2 ≥ …`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencySpectrum {
    spectrum: Spectrum,
    descending: Vec<f64>,
}

impl AdjacencySpectrum {
    pub fn new(spectrum: Spectrum) -> Self {
        let descending = spectrum.descending();
        Self { spectrum, descending }
    }

    /// `μ_i` with the 1-based index used throughout the literature.
    pub fn mu(&self, i: usize) -> f64 {
        self.descending[i - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.descending
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }
}

pub fn adjacency_spectrum(g: &MatrixWeightedGraph) -> Result<AdjacencySpectrum> {
    Ok(AdjacencySpectrum::new(eigh(&adjacency(g))?))
}

/// Outcome of the `λ_max(L̃) ≤ 2` check.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedBound {
    pub report: BoundReport,
    /// `|λ_max(L̃) − 2| ≤ attain`.
    pub attained: bool,
}

pub fn check_normalized_bound(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<NormalizedBound> {
    let ops = assemble(g, tol)?;
    let s = eigh(&ops.normalized_laplacian)?;
    let lambda_max = s.max();
    let attained = abs(lambda_max - 2.0) <= tol.attain;
    let report = BoundReport::single("normalized_laplacian_max <= 2", lambda_max, 2.0, tol.check)
        .with("lambda_min", s.min())
        .with("attained", if attained { 1.0 } else { 0.0 });
    Ok(NormalizedBound { report, attained })
}

fn sum_range(values: &[f64], from: usize, count: usize) -> f64 {
    values[from..from + count].iter().sum()
}

/// Compares `L_W` against `L_{tr W}`:
///
/// `Σ_{i≤k} λ_{k+i}(L_W) ≤ λ_2(L_trW) ≤ λ_n(L_trW) ≤ Σ_{i≤k} λ_{(n−1)k+i}(L_W)`,
/// together with `λ_{k+1}(L_W) ≤ λ_2(L_trW)/k` and `λ_n(L_trW)/k ≤ λ_{nk}(L_W)`.
/// Graphs with fewer than two vertices hold vacuously.
pub fn check_laplacian_trace_bounds(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<BoundReport> {
    let (n, k) = (g.n(), g.k());
    if n < 2 {
        return Ok(BoundReport::chain("laplacian_trace_bounds", &[], tol.check));
    }
    let lw = laplacian_spectrum(g)?;
    let lw = lw.values();
    let ltr = eigh(&g.scalarize_trace().laplacian())?;
    let ltr = ltr.values();
    let kf = k as f64;
    let low_sum = sum_range(lw, k, k);
    let high_sum = sum_range(lw, (n - 1) * k, k);
    let links = [
        ("sum_lambda_k+i(L_W) <= lambda_2(L_trW)", low_sum, ltr[1]),
        ("lambda_2(L_trW) <= lambda_n(L_trW)", ltr[1], ltr[n - 1]),
        ("lambda_n(L_trW) <= sum_lambda_(n-1)k+i(L_W)", ltr[n - 1], high_sum),
        ("lambda_k+1(L_W) <= lambda_2(L_trW)/k", lw[k], ltr[1] / kf),
        ("lambda_n(L_trW)/k <= lambda_nk(L_W)", ltr[n - 1] / kf, lw[n * k - 1]),
    ];
    Ok(BoundReport::chain("laplacian_trace_bounds", &links, tol.check))
}

/// `Σ_{i≤k} μ_i(A_W) ≥ μ_1(A_trW) ≥ μ_n(A_trW) ≥ Σ_{i≤k} μ_{(n−1)k+i}(A_W)`.
pub fn check_adjacency_trace_bounds(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<BoundReport> {
    let (n, k) = (g.n(), g.k());
    if n == 0 {
        return Ok(BoundReport::chain("adjacency_trace_bounds", &[], tol.check));
    }
    let aw = adjacency_spectrum(g)?;
    let atr = eigh(&g.scalarize_trace().adjacency())?.descending();
    let top: f64 = (1..=k).map(|i| aw.mu(i)).sum();
    let bottom: f64 = (1..=k).map(|i| aw.mu((n - 1) * k + i)).sum();
    let links = [
        ("mu_1(A_trW) <= sum_mu_i(A_W)", atr[0], top),
        ("mu_n(A_trW) <= mu_1(A_trW)", atr[n - 1], atr[0]),
        ("sum_mu_(n-1)k+i(A_W) <= mu_n(A_trW)", bottom, atr[n - 1]),
    ];
    Ok(BoundReport::chain("adjacency_trace_bounds", &links, tol.check))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BaseGraph, ScalarWeightedGraph};
    use alloc::vec;

    fn b() -> SymMatrix {
        let r3 = 3f64.sqrt() / 4.0;
        SymMatrix::from_row_major(2, vec![0.25, r3, r3, 0.75], 0.0).unwrap()
    }

    fn single_edge(w: SymMatrix) -> MatrixWeightedGraph {
        let k = w.dim();
        MatrixWeightedGraph::from_edge_list(2, k, vec![(0, 1, w)], &Tolerances::default()).unwrap()
    }

    fn lift(base: BaseGraph, k: usize) -> MatrixWeightedGraph {
        MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(base), k)
    }

    fn close(a: &[f64], b: &[f64], eps: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
    }

    #[test]
    fn single_edge_blocks() {
        let w = b();
        let ops = assemble(&single_edge(w.clone()), &Tolerances::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(ops.laplacian.get(i, j), w.get(i, j));
                assert_eq!(ops.laplacian.get(i, 2 + j), -w.get(i, j));
                assert_eq!(ops.adjacency.get(2 + i, j), w.get(i, j));
                assert_eq!(ops.adjacency.get(i, j), 0.0);
                assert_eq!(ops.degree.get(2 + i, 2 + j), w.get(i, j));
                assert_eq!(ops.degree.get(i, 2 + j), 0.0);
            }
        }
    }

    #[test]
    fn identity_lift_is_kronecker_product() {
        let base = BaseGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let k = 3;
        let lg = ScalarWeightedGraph::unit(base.clone()).laplacian();
        let lw = laplacian(&lift(base, k));
        for p in 0..4 * k {
            for q in 0..4 * k {
                let expected = if p % k == q % k { lg.get(p / k, q / k) } else { 0.0 };
                assert_eq!(lw.get(p, q), expected);
            }
        }
    }

    #[test]
    fn empty_graph_operators_vanish() {
        let g = MatrixWeightedGraph::from_edge_list(3, 2, Vec::new(), &Tolerances::default()).unwrap();
        let ops = assemble(&g, &Tolerances::default()).unwrap();
        assert!(ops.laplacian.is_zero() && ops.adjacency.is_zero() && ops.normalized_laplacian.is_zero());
    }

    #[test]
    fn spectra_examples() {
        let s = laplacian_spectrum(&single_edge(b())).unwrap();
        assert!(close(s.values(), &[0.0, 0.0, 0.0, 2.0], 1e-13));
        let s = laplacian_spectrum(&lift(BaseGraph::complete(3), 2)).unwrap();
        assert!(close(s.values(), &[0.0, 0.0, 3.0, 3.0, 3.0, 3.0], 1e-13));
        let s = laplacian_spectrum(&single_edge(SymMatrix::identity(2))).unwrap();
        assert!(close(s.values(), &[0.0, 0.0, 2.0, 2.0], 1e-13));
        let mu = adjacency_spectrum(&lift(BaseGraph::complete(3), 2)).unwrap();
        assert!(close(mu.values(), &[2.0, 2.0, -1.0, -1.0, -1.0, -1.0], 1e-13));
    }

    #[test]
    fn normalized_bound_examples() {
        let t = Tolerances::default();
        let k2 = check_normalized_bound(&single_edge(SymMatrix::identity(2)), &t).unwrap();
        assert!(k2.report.holds && k2.attained);
        assert!((k2.report.lhs - 2.0).abs() < 1e-13);
        let k3 = check_normalized_bound(&lift(BaseGraph::complete(3), 1), &t).unwrap();
        assert!(k3.report.holds && !k3.attained);
        assert!((k3.report.lhs - 1.5).abs() < 1e-13);
    }

    #[test]
    fn trace_bound_examples() {
        let t = Tolerances::default();
        let r = check_laplacian_trace_bounds(&lift(BaseGraph::complete(3), 2), &t).unwrap();
        assert!(r.holds);
        let first = &r.links[0];
        assert!((first.lhs - 6.0).abs() < 1e-12 && (first.rhs - 6.0).abs() < 1e-12);

        let r = check_laplacian_trace_bounds(&single_edge(b()), &t).unwrap();
        assert!(r.holds);
        assert!((r.links[0].lhs - 2.0).abs() < 1e-12 && (r.links[0].rhs - 2.0).abs() < 1e-12);

        let r = check_adjacency_trace_bounds(&single_edge(b()), &t).unwrap();
        assert!(r.holds);
        assert!((r.links[0].lhs - 1.0).abs() < 1e-12 && (r.links[0].rhs - 1.0).abs() < 1e-12);

        let r = check_adjacency_trace_bounds(&lift(BaseGraph::cycle(5), 2), &t).unwrap();
        assert!(r.holds);
        assert!(r.links[0].slack.abs() < 1e-12 && r.links[2].slack.abs() < 1e-12);
    }

    #[test]
    fn quadratic_form_matches_matrix() {
        let base = BaseGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let g = MatrixWeightedGraph::new(base, 2, vec![b(), SymMatrix::identity(2)], &Tolerances::default()).unwrap();
        let x = [0.3, -1.0, 2.0, 0.5, -0.7, 1.1];
        let lx = laplacian(&g).mul_vec(&x);
        let direct: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
        assert!((direct - laplacian_quadratic_form(&g, &x)).abs() < 1e-13);
    }
}
