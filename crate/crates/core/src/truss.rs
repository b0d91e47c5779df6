//! Bar-and-joint frameworks in ℝ³ as matrix-weighted graphs.
//!
//! Each bar contributes `s · û ûᵀ` (its stiffness times the projection onto
//! the bar direction), so the Laplacian is the stiffness matrix and every
//! infinitesimal rigid motion lies in its kernel.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::MatrixWeightedGraph;
use crate::linalg::{dot, norm, Matrix, SymMatrix, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bar {
    pub u: usize,
    pub v: usize,
    pub stiffness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Truss {
    points: Vec<[f64; 3]>,
    bars: Vec<Bar>,
}

impl Truss {
    pub fn new(points: Vec<[f64; 3]>, bars: Vec<Bar>) -> Result<Self> {
        let n = points.len();
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for b in &bars {
            if b.u >= n || b.v >= n {
                return Err(Error::IndexOutOfRange { index: b.u.max(b.v), bound: n });
            }
            if b.u == b.v || points[b.u] == points[b.v] {
                return Err(Error::DegenerateEdge { u: b.u, v: b.v });
            }
            if !b.stiffness.is_finite() || b.stiffness <= 0.0 {
                return Err(Error::InvalidStiffness { u: b.u, v: b.v });
            }
        }
        Ok(Self { points, bars })
    }

    /// Unit-stiffness bars between every pair of points.
    pub fn complete(points: Vec<[f64; 3]>) -> Result<Self> {
        let n = points.len();
        let bars = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| Bar { u, v, stiffness: 1.0 })).collect();
        Self::new(points, bars)
    }

    /// The regular tetrahedron on alternate vertices of the cube `[-1, 1]³`.
    pub fn regular_tetrahedron() -> Self {
        let pts = alloc::vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
        Self::complete(pts).expect("tetrahedron is valid")
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// `k = 3`, `W_e = s_e û ûᵀ`.
pub fn truss_to_mwg(t: &Truss, tol: &Tolerances) -> Result<MatrixWeightedGraph> {
    let entries = t.bars.iter().map(|b| {
        let d = sub(&t.points[b.v], &t.points[b.u]);
        let len = norm(&d);
        let unit = [d[0] / len, d[1] / len, d[2] / len];
        (b.u, b.v, SymMatrix::outer(&unit, b.stiffness))
    });
    MatrixWeightedGraph::from_edge_list(t.points.len(), 3, entries.collect::<Vec<_>>(), tol)
}

/// Orthonormal basis (columns of a `3n × m` matrix, `m ≤ 6`) of the
/// infinitesimal rigid motions: three translations and the rotations
/// `p ↦ ω × (p − centroid)` for `ω = e_1, e_2, e_3`. Dependent generators
/// (collinear or coincident points) are dropped.
pub fn rigid_motions(points: &[[f64; 3]], tol: &Tolerances) -> Matrix {
    let n = points.len();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let mut centroid = [0.0; 3];
    for p in points {
        for i in 0..3 {
            centroid[i] += p[i] / n as f64;
        }
    }
    let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(6);
    for axis in 0..3 {
        let mut field = alloc::vec![0.0; 3 * n];
        for v in 0..n {
            field[3 * v + axis] = 1.0;
        }
        candidates.push(field);
    }
    for axis in 0..3 {
        let mut field = alloc::vec![0.0; 3 * n];
        for (v, p) in points.iter().enumerate() {
            let r = sub(p, &centroid);
            let w = match axis {
                0 => [0.0, -r[2], r[1]],
                1 => [r[2], 0.0, -r[0]],
                _ => [-r[1], r[0], 0.0],
            };
            field[3 * v..3 * v + 3].copy_from_slice(&w);
        }
        candidates.push(field);
    }
    let scale = points.iter().map(|p| norm(&sub(p, &centroid))).fold(1.0f64, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut c in candidates {
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &basis {
                let proj = dot(&c, q);
                for (x, y) in c.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let len = norm(&c);
        if len > tol.ortho * scale * libm::sqrt(n as f64) {
            basis.push(c.into_iter().map(|x| x / len).collect());
        }
    }
    Matrix::from_columns(3 * n, &basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kernel_dim;
    use crate::spectral::laplacian;
    use alloc::vec;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn unit_bar_along_x() {
        let truss = Truss::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], vec![Bar { u: 0, v: 1, stiffness: 1.0 }]).unwrap();
        let g = truss_to_mwg(&truss, &t()).unwrap();
        assert!(g.weight(0).max_abs_diff(&SymMatrix::diag(&[1.0, 0.0, 0.0])) < 1e-15);
        assert_eq!(kernel_dim(&laplacian(&g), &t()).unwrap(), 5);
    }

    #[test]
    fn tetrahedron_kernel() {
        let truss = Truss::regular_tetrahedron();
        let g = truss_to_mwg(&truss, &t()).unwrap();
        let l = laplacian(&g);
        assert_eq!(kernel_dim(&l, &t()).unwrap(), 6);
        let motions = rigid_motions(truss.points(), &t());
        assert_eq!(motions.cols(), 6);
        for j in 0..6 {
            let r = l.mul_vec(&motions.column(j));
            assert!(norm(&r) < 1e-12);
        }
    }

    #[test]
    fn degenerate_configurations() {
        assert_eq!(rigid_motions(&[[2.0, -1.0, 5.0]], &t()).cols(), 3);
        let line = [[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [3.0, 3.0, 3.0]];
        assert_eq!(rigid_motions(&line, &t()).cols(), 5);
    }

    #[test]
    fn rejects_bad_bars() {
        let p = vec![[0.0; 3], [0.0; 3]];
        assert!(matches!(
            Truss::new(p, vec![Bar { u: 0, v: 1, stiffness: 1.0 }]),
            Err(Error::DegenerateEdge { u: 0, v: 1 })
        ));
        let p = vec![[0.0; 3], [1.0, 0.0, 0.0]];
        assert!(matches!(Truss::new(p, vec![Bar { u: 0, v: 1, stiffness: 0.0 }]), Err(Error::InvalidStiffness { .. })));
    }
}
