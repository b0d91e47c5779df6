use super::{abs, eigh, Spectrum, SymMatrix, Tolerances};
use crate::error::{Error, Result};

/// Largest eigenvalue magnitude.
pub fn spectral_norm(m: &SymMatrix) -> Result<f64> {
    Ok(eigh(m)?.abs_max())
}

fn psd_margin(s: &Spectrum, tol: &Tolerances) -> f64 {
    tol.psd * s.abs_max().max(1.0)
}

/// `min λ(M) ≥ −psd · max(1, ‖M‖)`.
pub fn is_psd(m: &SymMatrix, tol: &Tolerances) -> Result<bool> {
    let s = eigh(m)?;
    Ok(s.min() >= -psd_margin(&s, tol))
}

pub(crate) fn require_psd(m: &SymMatrix, tol: &Tolerances) -> Result<Spectrum> {
    let s = eigh(m)?;
    if s.min() < -psd_margin(&s, tol) {
        return Err(Error::NotPsd { min_eigenvalue: s.min() });
    }
    Ok(s)
}

fn rank_cutoff(s: &Spectrum, tol: &Tolerances) -> f64 {
    tol.rank_rel * s.max().max(1.0)
}

/// Moore–Penrose pseudoinverse of the square root, `M^{†/2}`.
///
/// Eigenvalues above `rank_rel · λ_max` map to `λ^{-1/2}`, the rest to zero.
pub fn pseudo_sqrt_inv(m: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
    let s = require_psd(m, tol)?;
    let cutoff = tol.rank_rel * s.max();
    Ok(s.reconstruct_with(|x| if x > cutoff && x > 0.0 { 1.0 / libm::sqrt(x) } else { 0.0 }))
}

/// Inverse of a symmetric matrix through its spectrum. Fails with
/// [`Error::SingularVolume`] when an eigenvalue magnitude falls below
/// `rank_rel · max(1, ‖M‖)`.
pub fn inverse(m: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
    let s = eigh(m)?;
    let cutoff = tol.rank_rel * s.abs_max().max(1.0);
    if let Some(&bad) = s.values().iter().find(|x| abs(**x) <= cutoff) {
        return Err(Error::SingularVolume { min_eigenvalue: bad });
    }
    Ok(s.reconstruct_with(|x| 1.0 / x))
}

/// `A ⪯ B` in the Loewner order: `B − A` is PSD within `loewner` slack.
pub fn loewner_leq(a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    let s = eigh(&(b - a))?;
    let scale = eigh(a)?.abs_max().max(eigh(b)?.abs_max()).max(1.0);
    Ok(s.min() >= -tol.loewner * scale)
}

/// Number of eigenvalues at or below `rank_rel · max(1, λ_max)`.
pub fn kernel_dim(m: &SymMatrix, tol: &Tolerances) -> Result<usize> {
    let s = require_psd(m, tol)?;
    let cutoff = rank_cutoff(&s, tol);
    Ok(s.values().iter().filter(|&&x| x <= cutoff).count())
}

pub fn rank(m: &SymMatrix, tol: &Tolerances) -> Result<usize> {
    Ok(m.dim() - kernel_dim(m, tol)?)
}

/// Size of the cluster of `values` around `target`, grown by gaps: a value
/// joins when it lies within `gap` of the target or of a value already in
/// the cluster.
pub fn cluster_count(values: &[f64], target: f64, gap: f64) -> usize {
    let mut sorted: alloc::vec::Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| abs(a - target).total_cmp(&abs(b - target)));
    let mut count = 0;
    let mut reach = 0.0;
    for x in sorted {
        let dist = abs(x - target);
        if dist <= reach + gap {
            count += 1;
            reach = reach.max(dist);
        } else {
            break;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn frame_a() -> SymMatrix {
        SymMatrix::diag(&[1.0, 0.0])
    }

    fn frame_c() -> SymMatrix {
        let r3 = 3f64.sqrt() / 4.0;
        SymMatrix::from_row_major(2, vec![0.25, -r3, -r3, 0.75], 0.0).unwrap()
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&SymMatrix::zeros(3), &tol()).unwrap());
        assert!(!is_psd(&SymMatrix::diag(&[1.0, -1.0]), &tol()).unwrap());
        assert!(is_psd(&frame_c(), &tol()).unwrap());
    }

    #[test]
    fn pseudo_sqrt_inv_examples() {
        let id = pseudo_sqrt_inv(&SymMatrix::identity(3), &tol()).unwrap();
        assert!(id.max_abs_diff(&SymMatrix::identity(3)) < 1e-14);
        let p = pseudo_sqrt_inv(&SymMatrix::diag(&[4.0, 0.0]), &tol()).unwrap();
        assert!(p.max_abs_diff(&SymMatrix::diag(&[0.5, 0.0])) < 1e-14);
        let s = pseudo_sqrt_inv(&SymMatrix::scaled_identity(2, 1.5), &tol()).unwrap();
        let expected = (2.0f64 / 3.0).sqrt();
        assert!(s.max_abs_diff(&SymMatrix::scaled_identity(2, expected)) < 1e-14);
        assert!(matches!(pseudo_sqrt_inv(&SymMatrix::diag(&[1.0, -1.0]), &tol()), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn loewner_examples() {
        let t = tol();
        let z = SymMatrix::zeros(2);
        assert!(loewner_leq(&z, &frame_c(), &t).unwrap());
        assert!(loewner_leq(&SymMatrix::identity(2), &SymMatrix::scaled_identity(2, 2.0), &t).unwrap());
        let e1 = SymMatrix::diag(&[1.0, 0.0]);
        let e2 = SymMatrix::diag(&[0.0, 1.0]);
        assert!(!loewner_leq(&e1, &e2, &t).unwrap());
        assert!(!loewner_leq(&e2, &e1, &t).unwrap());
        assert!(matches!(loewner_leq(&e1, &SymMatrix::identity(3), &t), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn kernel_dim_examples() {
        let t = tol();
        assert_eq!(kernel_dim(&SymMatrix::identity(3), &t).unwrap(), 0);
        assert_eq!(kernel_dim(&SymMatrix::zeros(4), &t).unwrap(), 4);
        // [[W, −W], [−W, W]] with W = diag(1, 0)
        let mut l = SymMatrix::zeros(4);
        l.add_block(0, 0, &frame_a(), 1.0);
        l.add_block(2, 2, &frame_a(), 1.0);
        l.add_block(0, 2, &frame_a(), -1.0);
        assert_eq!(kernel_dim(&l, &t).unwrap(), 3);
        assert!(matches!(kernel_dim(&SymMatrix::diag(&[-1.0]), &t), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn inverse_and_singular() {
        let m = SymMatrix::from_row_major(2, vec![2.0, 1.0, 1.0, 2.0], 0.0).unwrap();
        let inv = inverse(&m, &tol()).unwrap();
        let p = m.to_matrix().mul(&inv.to_matrix());
        assert!((p.get(0, 0) - 1.0).abs() < 1e-14 && p.get(0, 1).abs() < 1e-14);
        assert!(matches!(inverse(&frame_a(), &tol()), Err(Error::SingularVolume { .. })));
    }

    #[test]
    fn clustering_by_gaps() {
        let values = [2.5, 2.5 + 1e-13, 2.5 - 2e-13, 1.8, -2.4];
        assert_eq!(cluster_count(&values, 2.5, 1e-10), 3);
        assert_eq!(cluster_count(&values, 0.0, 1e-10), 0);
    }
}
