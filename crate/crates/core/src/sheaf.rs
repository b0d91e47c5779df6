//! The weighted cellular sheaf of a matrix-weighted graph.
//!
//! Vertex stalks are `ℝ^k`; the stalk over edge `e` is `im W_e`, written in
//! the coordinates `B_e = Σ_i √σ_i u_iᵀ` built from the positive eigenpairs
//! of `W_e`. With these coordinates `B_eᵀ B_e = W_e`, the edge inner product
//! becomes the standard one, and the sheaf Laplacian is literally `δᵀδ`.

use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Edge, MatrixWeightedGraph};
use crate::linalg::{eigh, Matrix, Tolerances};
use crate::report::BoundReport;
use crate::spectral::laplacian;

/// Placement of one edge inside the coboundary matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBlock {
    pub edge: Edge,
    pub tail: usize,
    pub head: usize,
    pub rows: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coboundary {
    /// `(Σ_e rank W_e) × kn`.
    pub matrix: Matrix,
    pub blocks: Vec<EdgeBlock>,
    /// `rank(W_e) × k` factors, in edge order.
    pub factors: Vec<Matrix>,
}

/// `B_e` with `B_eᵀ B_e = W_e`; rows span `im W_e`.
pub fn edge_factor(w: &crate::linalg::SymMatrix, tol: &Tolerances) -> Result<Matrix> {
    let s = eigh(w)?;
    let k = w.dim();
    if s.min() < -tol.psd * s.abs_max().max(1.0) {
        return Err(Error::NotPsd { min_eigenvalue: s.min() });
    }
    let cutoff = tol.rank_rel * s.max().max(1.0);
    let kept: Vec<usize> = (0..k).rev().filter(|&i| s.values()[i] > cutoff).collect();
    let mut b = Matrix::zeros(kept.len(), k);
    for (row, &i) in kept.iter().enumerate() {
        let scale = libm::sqrt(s.values()[i]);
        for c in 0..k {
            b.set(row, c, scale * s.vectors().get(c, i));
        }
    }
    Ok(b)
}

/// `(δx)_e = B_e x_head − B_e x_tail`. `orientation` gives `(tail, head)` per
/// edge in edge order; `None` orients every edge from its smaller endpoint.
pub fn build_coboundary(
    g: &MatrixWeightedGraph,
    orientation: Option<&[(usize, usize)]>,
    tol: &Tolerances,
) -> Result<Coboundary> {
    let k = g.k();
    let edges = g.edges();
    if let Some(o) = orientation {
        if o.len() != edges.len() {
            return Err(Error::DimMismatch { expected: edges.len(), found: o.len() });
        }
        if let Some((e, &(tail, head))) = edges.iter().zip(o).find(|(e, &(t, h))| Edge::new(t, h) != **e) {
            return Err(Error::InvalidOrientation { u: e.u, v: e.v, tail, head });
        }
    }
    let factors: Vec<Matrix> = g.weights().iter().map(|w| edge_factor(w, tol)).collect::<Result<_>>()?;
    let total_rows: usize = factors.iter().map(Matrix::rows).sum();
    let mut matrix = Matrix::zeros(total_rows, k * g.n());
    let mut blocks = Vec::with_capacity(edges.len());
    let mut row = 0;
    for (i, (e, b)) in edges.iter().zip(&factors).enumerate() {
        let (tail, head) = orientation.map_or((e.u, e.v), |o| o[i]);
        for r in 0..b.rows() {
            for c in 0..k {
                matrix.set(row + r, head * k + c, b.get(r, c));
                matrix.set(row + r, tail * k + c, -b.get(r, c));
            }
        }
        blocks.push(EdgeBlock { edge: *e, tail, head, rows: row..row + b.rows() });
        row += b.rows();
    }
    Ok(Coboundary { matrix, blocks, factors })
}

/// Checks `‖δᵀδ − L‖_F ≤ resid · max(1, ‖L‖_F)`.
pub fn verify_factorization(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<BoundReport> {
    let delta = build_coboundary(g, None, tol)?;
    let gram = delta.matrix.gram();
    let l = laplacian(g);
    let residual = (&gram - &l).frobenius_norm();
    let scale = l.frobenius_norm().max(1.0);
    Ok(BoundReport::single("||delta^T delta - L|| <= resid*max(1,||L||)", residual, tol.resid * scale, 0.0)
        .with("laplacian_norm", l.frobenius_norm())
        .with("edge_stalk_total_dim", delta.matrix.rows() as f64))
}

/// Orthonormal basis (as columns) of `H⁰ = ker δ`, computed from the
/// coboundary rather than from the assembled Laplacian.
pub fn global_sections(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<Matrix> {
    let delta = build_coboundary(g, None, tol)?;
    let gram = delta.matrix.gram();
    let s = eigh(&gram)?;
    let cutoff = tol.rank_rel * s.max().max(1.0);
    let cols: Vec<Vec<f64>> = (0..s.len()).filter(|&i| s.values()[i] <= cutoff).map(|i| s.vector(i)).collect();
    Ok(Matrix::from_columns(gram.dim(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BaseGraph, ScalarWeightedGraph};
    use crate::linalg::{kernel_dim, SymMatrix};
    use alloc::vec;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn single(w: SymMatrix) -> MatrixWeightedGraph {
        MatrixWeightedGraph::from_edge_list(2, w.dim(), vec![(0, 1, w)], &t()).unwrap()
    }

    #[test]
    fn identity_edge_coboundary() {
        let d = build_coboundary(&single(SymMatrix::identity(2)), None, &t()).unwrap();
        assert_eq!(d.matrix.rows(), 2);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(d.matrix.get(r, c), -d.matrix.get(r, c + 2));
            }
        }
        assert!(d.factors[0].gram().max_abs_diff(&SymMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn rank_one_edge_coboundary() {
        let d = build_coboundary(&single(SymMatrix::diag(&[1.0, 0.0])), None, &t()).unwrap();
        assert_eq!(d.matrix.rows(), 1);
        assert_eq!(d.matrix.as_slice(), &[-1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn reversing_orientation_negates() {
        let r3 = 3f64.sqrt() / 4.0;
        let b = SymMatrix::from_row_major(2, vec![0.25, r3, r3, 0.75], 0.0).unwrap();
        let g = single(b);
        let fwd = build_coboundary(&g, None, &t()).unwrap();
        let rev = build_coboundary(&g, Some(&[(1, 0)]), &t()).unwrap();
        for (a, b) in fwd.matrix.as_slice().iter().zip(rev.matrix.as_slice()) {
            assert_eq!(*a, -*b);
        }
        assert_eq!(fwd.matrix.gram(), rev.matrix.gram());
        assert!(build_coboundary(&g, Some(&[(0, 2)]), &t()).is_err());
    }

    #[test]
    fn factor_reproduces_weight() {
        let w = SymMatrix::from_row_major(3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0], 0.0).unwrap();
        let b = edge_factor(&w, &t()).unwrap();
        assert!(b.gram().max_abs_diff(&w) < 1e-13);
    }

    #[test]
    fn sections_of_components() {
        let two = BaseGraph::complete(3).disjoint_union(&BaseGraph::path(2));
        let g = MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(two), 2);
        let h0 = global_sections(&g, &t()).unwrap();
        assert_eq!(h0.cols(), 4);
        assert_eq!(kernel_dim(&laplacian(&g), &t()).unwrap(), 4);
        assert!(verify_factorization(&g, &t()).unwrap().holds);
    }
}
