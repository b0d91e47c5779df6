//! Fusion frames: collections of orthogonal projections on `ℝ^k`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{eigh, Matrix, SymMatrix, Tolerances};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FusionFrame {
    k: usize,
    projections: Vec<SymMatrix>,
    ranks: Vec<usize>,
}

fn projection_residual(p: &SymMatrix) -> f64 {
    let m = p.to_matrix();
    let sq = m.mul(&m);
    sq.as_slice().iter().zip(p.as_slice()).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
}

impl FusionFrame {
    /// Validates that every element is a `k × k` orthogonal projection.
    pub fn new(k: usize, projections: Vec<SymMatrix>, tol: &Tolerances) -> Result<Self> {
        let mut ranks = Vec::with_capacity(projections.len());
        for (index, p) in projections.iter().enumerate() {
            if p.dim() != k {
                return Err(Error::DimMismatch { expected: k, found: p.dim() });
            }
            let residual = projection_residual(p);
            if residual.is_nan() || residual > tol.resid {
                return Err(Error::NotProjection { index, residual });
            }
            // eigenvalues of a projection are 0 or 1
            let ones = eigh(p)?.values().iter().filter(|&&x| x > 0.5).count();
            ranks.push(ones);
        }
        Ok(Self { k, projections, ranks })
    }

    /// `r` copies of `I_k`.
    pub fn identity_copies(k: usize, r: usize) -> Self {
        Self { k, projections: alloc::vec![SymMatrix::identity(k); r], ranks: alloc::vec![k; r] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn projections(&self) -> &[SymMatrix] {
        &self.projections
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// The common rank `ℓ`, if all elements share one.
    pub fn uniform_rank(&self) -> Option<usize> {
        let first = *self.ranks.first()?;
        self.ranks.iter().all(|&r| r == first).then_some(first)
    }

    pub fn sum(&self) -> SymMatrix {
        let mut s = SymMatrix::zeros(self.k);
        for p in &self.projections {
            s += p;
        }
        s
    }

    /// Groups identical elements: `labels[i] == labels[j]` iff elements
    /// `i` and `j` agree within `resid`. Labels are first-occurrence indices.
    pub fn element_classes(&self, tol: &Tolerances) -> Vec<usize> {
        let mut labels = Vec::with_capacity(self.len());
        for (i, p) in self.projections.iter().enumerate() {
            let same = (0..i).find(|&j| self.projections[j].max_abs_diff(p) <= tol.resid);
            labels.push(same.map_or(i, |j| labels[j]));
        }
        labels
    }

    /// `{P_i} ∪ {I_k}`.
    pub fn augment_with_identity(&self) -> Self {
        let mut out = self.clone();
        out.projections.push(SymMatrix::identity(self.k));
        out.ranks.push(self.k);
        out
    }

    /// The frame constant `c` with `Σ P_i = c I`, estimated as `tr(Σ P_i)/k`.
    pub fn verify_tight(&self, tol: &Tolerances) -> Result<f64> {
        if self.k == 0 {
            return Ok(0.0);
        }
        let s = self.sum();
        let c = s.trace() / self.k as f64;
        let residual = (&s - &SymMatrix::scaled_identity(self.k, c)).frobenius_norm();
        if residual <= tol.resid {
            Ok(c)
        } else {
            Err(Error::NotTight { residual })
        }
    }
}

/// Projections onto the lines at angles `iπ/r`, `i = 0, …, r−1`, in `ℝ²`.
/// The sum is `(r/2) I`.
pub fn equiangular_2d(r: usize) -> Result<FusionFrame> {
    if r < 2 {
        return Err(Error::DomainError("equiangular frame needs at least two lines"));
    }
    let projections = (0..r)
        .map(|i| {
            let theta = core::f64::consts::PI * i as f64 / r as f64;
            SymMatrix::outer(&[libm::cos(theta), libm::sin(theta)], 1.0)
        })
        .collect();
    Ok(FusionFrame { k: 2, projections, ranks: alloc::vec![1; r] })
}

/// Projection onto the column span of `basis` (`k × ℓ`, orthonormal columns).
pub fn projection_onto(basis: &Matrix) -> SymMatrix {
    let p = basis.mul(&basis.transpose());
    SymMatrix::symmetrized(p.rows(), p.as_slice().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FrameExistence {
    Exists,
    Nonexistent,
    UnknownByBounds,
}

/// Whether a tight fusion frame of `r` subspaces of dimension `l` in `ℝ^k`
/// exists: yes for `r ≥ ⌈k/l⌉ + 2`, no for `r ≤ ⌈k/l⌉`, undecided in between.
/// Orthogonal decompositions (`l = k`, or `l | k` with `r = k/l`) exist
/// regardless and are reported as such.
pub fn frame_existence(k: usize, l: usize, r: usize) -> Result<FrameExistence> {
    if l == 0 || l > k || r == 0 {
        return Err(Error::DomainError("frame existence needs 1 <= l <= k and r >= 1"));
    }
    let ceil = k.div_ceil(l);
    Ok(if l == k || (k.is_multiple_of(l) && r == k / l) || r >= ceil + 2 {
        FrameExistence::Exists
    } else if r <= ceil {
        FrameExistence::Nonexistent
    } else {
        FrameExistence::UnknownByBounds
    })
}
