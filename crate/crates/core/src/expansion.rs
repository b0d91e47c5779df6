//! Matrix-valued edge counts and the expander mixing lemmas.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{MatrixWeightedGraph, Regularity};
use crate::linalg::{abs, eigh, inverse, sqrt, Matrix, SymMatrix, Tolerances};
use crate::report::BoundReport;
use crate::spectral::{adjacency, adjacency_spectrum, assemble};
use crate::subset::VertexSet;

/// Largest `n` accepted by [`RegularEml::exhaustive`] (`4^n` subset pairs).
pub const EXHAUSTIVE_EML_LIMIT: usize = 10;

fn check_universe(g: &MatrixWeightedGraph, s: &VertexSet) -> Result<()> {
    if s.universe() != g.n() {
        return Err(Error::DimMismatch { expected: g.n(), found: s.universe() });
    }
    Ok(())
}

/// `E(S,T) = Σ_{s∈S, t∈T} W_st`, summed over edges. An edge with both
/// endpoints in `S ∩ T` contributes twice, once per ordered pair.
pub fn edge_count(g: &MatrixWeightedGraph, s: &VertexSet, t: &VertexSet) -> Result<SymMatrix> {
    check_universe(g, s)?;
    check_universe(g, t)?;
    let mut e = SymMatrix::zeros(g.k());
    for (edge, w) in g.iter_edges() {
        let times =
            (s.contains(edge.u) && t.contains(edge.v)) as u32 + (s.contains(edge.v) && t.contains(edge.u)) as u32;
        if times > 0 {
            e += &w.scale(times as f64);
        }
    }
    Ok(e)
}

/// `I_Sᵀ A I_T` with the assembled block adjacency.
pub fn edge_count_via_adjacency(g: &MatrixWeightedGraph, s: &VertexSet, t: &VertexSet) -> Result<Matrix> {
    check_universe(g, s)?;
    check_universe(g, t)?;
    let k = g.k();
    let a = adjacency(g);
    let mut e = Matrix::zeros(k, k);
    for u in s.iter() {
        for v in t.iter() {
            for i in 0..k {
                for j in 0..k {
                    e.set(i, j, e.get(i, j) + a.get(u * k + i, v * k + j));
                }
            }
        }
    }
    Ok(e)
}

/// `‖(I_S^⊥)ᵀ A I_G‖_max` where `I_S^⊥ = I_S − (|S|/n) I_G`; zero for
/// `dI`-regular graphs.
pub fn middle_term_residual(g: &MatrixWeightedGraph, s: &VertexSet) -> Result<f64> {
    check_universe(g, s)?;
    let (n, k) = (g.n(), g.k());
    if n == 0 {
        return Ok(0.0);
    }
    let a = adjacency(g);
    let frac = s.len() as f64 / n as f64;
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let mut x = 0.0;
            for u in 0..n {
                let coeff = if s.contains(u) { 1.0 } else { 0.0 } - frac;
                for v in 0..n {
                    x += coeff * a.get(u * k + i, v * k + j);
                }
            }
            worst = worst.max(abs(x));
        }
    }
    Ok(worst)
}

/// Both regular mixing-lemma checks for one subset pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmlReport {
    /// `|tr E(S,T) − kd|S||T|/n| ≤ |μ| √(|S||T|(1−|S|/n)(1−|T|/n))`.
    pub trace_check: BoundReport,
    /// `max |eig(E(S,T) − (d|S||T|/n) I)| ≤ max(|μ_{k+1}|, |μ_{kn}|) √(…)`.
    pub spectral_check: BoundReport,
    /// `max(Σ_i μ_{k+i}, Σ_i |μ_{(n−1)k+i}|)`.
    pub abs_mu: f64,
}

/// Raw numbers behind an [`EmlReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmlValues {
    pub trace_lhs: f64,
    pub trace_rhs: f64,
    pub spectral_lhs: f64,
    pub spectral_rhs: f64,
    /// Spectral left side with the alternative centering `k|S||T|/n`.
    pub spectral_lhs_k_centered: f64,
}

impl EmlValues {
    pub fn trace_slack(&self) -> f64 {
        self.trace_rhs - self.trace_lhs
    }

    pub fn spectral_slack(&self) -> f64 {
        self.spectral_rhs - self.spectral_lhs
    }
}

/// Spectral data of a `dI`-regular graph, reusable across subset pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularEml {
    n: usize,
    k: usize,
    d: f64,
    abs_mu: f64,
    spectral_factor: f64,
}

impl RegularEml {
    pub fn new(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<Self> {
        let d = match g.regularity(tol) {
            Regularity::ScalarRegular(d) => d,
            _ => return Err(Error::NotScalarRegular),
        };
        let (n, k) = (g.n(), g.k());
        let (abs_mu, spectral_factor) = if n < 2 || k == 0 {
            (0.0, 0.0)
        } else {
            let mu = adjacency_spectrum(g)?;
            let upper: f64 = (1..=k).map(|i| mu.mu(k + i)).sum();
            let lower: f64 = (1..=k).map(|i| abs(mu.mu((n - 1) * k + i))).sum();
            (upper.max(lower), abs(mu.mu(k + 1)).max(abs(mu.mu(k * n))))
        };
        Ok(Self { n, k, d, abs_mu, spectral_factor })
    }

    pub fn degree(&self) -> f64 {
        self.d
    }

    pub fn abs_mu(&self) -> f64 {
        self.abs_mu
    }

    /// `max(|μ_{k+1}|, |μ_{kn}|)`.
    pub fn spectral_factor(&self) -> f64 {
        self.spectral_factor
    }

    /// Evaluates both inequalities from a precomputed `E(S,T)`.
    pub fn evaluate(&self, e: &SymMatrix, s_len: usize, t_len: usize) -> Result<EmlValues> {
        let n = self.n as f64;
        let (s, t) = (s_len as f64, t_len as f64);
        let size = if self.n == 0 { 0.0 } else { s * t * (1.0 - s / n) * (1.0 - t / n) };
        let root = sqrt(size.max(0.0));
        let st_n = if self.n == 0 { 0.0 } else { s * t / n };
        let trace_lhs = abs(e.trace() - self.k as f64 * self.d * st_n);
        let centered = |c: f64| -> Result<f64> {
            let shifted = e - &SymMatrix::scaled_identity(self.k, c);
            Ok(eigh(&shifted)?.abs_max())
        };
        Ok(EmlValues {
            trace_lhs,
            trace_rhs: self.abs_mu * root,
            spectral_lhs: centered(self.d * st_n)?,
            spectral_rhs: self.spectral_factor * root,
            spectral_lhs_k_centered: centered(self.k as f64 * st_n)?,
        })
    }

    pub fn report(&self, v: &EmlValues, tol: &Tolerances) -> EmlReport {
        EmlReport {
            trace_check: BoundReport::single("eml_trace", v.trace_lhs, v.trace_rhs, tol.check)
                .with("abs_mu", self.abs_mu)
                .with("d", self.d),
            spectral_check: BoundReport::single("eml_spectral", v.spectral_lhs, v.spectral_rhs, tol.check)
                .with("spectral_factor", self.spectral_factor)
                .with("lhs_k_centered", v.spectral_lhs_k_centered),
            abs_mu: self.abs_mu,
        }
    }

    pub fn check(&self, g: &MatrixWeightedGraph, s: &VertexSet, t: &VertexSet, tol: &Tolerances) -> Result<EmlReport> {
        let e = edge_count(g, s, t)?;
        Ok(self.report(&self.evaluate(&e, s.len(), t.len())?, tol))
    }

    /// Checks every ordered pair of subsets, including empty and full ones.
    pub fn exhaustive(&self, g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<ExhaustiveEml> {
        let n = g.n();
        if n > EXHAUSTIVE_EML_LIMIT {
            return Err(Error::TooLarge { n, limit: EXHAUSTIVE_EML_LIMIT });
        }
        let k = g.k();
        let blocks = vertex_blocks(g);
        let count = 1u64 << n;
        let mut worst_trace = (f64::INFINITY, 0u64, 0u64);
        let mut worst_spectral = (f64::INFINITY, 0u64, 0u64);
        let mut all_hold = true;
        let mut row_sums = alloc::vec![SymMatrix::zeros(k); n];
        for s_mask in 0..count {
            // row_sums[t] = Σ_{s∈S} W_st
            for (t, sum) in row_sums.iter_mut().enumerate() {
                *sum = SymMatrix::zeros(k);
                for s in (0..n).filter(|s| s_mask >> s & 1 == 1) {
                    if let Some(w) = &blocks[s * n + t] {
                        *sum += w;
                    }
                }
            }
            let s_len = s_mask.count_ones() as usize;
            let mut e = SymMatrix::zeros(k);
            let mut t_mask = 0u64;
            for step in 0..count {
                if step > 0 {
                    let bit = step.trailing_zeros() as usize;
                    t_mask ^= 1 << bit;
                    let sign = if t_mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
                    e = &e + &row_sums[bit].scale(sign);
                }
                let v = self.evaluate(&e, s_len, t_mask.count_ones() as usize)?;
                let (ts, ss) = (v.trace_slack(), v.spectral_slack());
                if !(ts >= -tol.check && ss >= -tol.check) {
                    all_hold = false;
                }
                if ts < worst_trace.0 || ts.is_nan() {
                    worst_trace = (ts, s_mask, t_mask);
                }
                if ss < worst_spectral.0 || ss.is_nan() {
                    worst_spectral = (ss, s_mask, t_mask);
                }
            }
        }
        let at = |(_, s, t): (f64, u64, u64)| -> Result<(VertexSet, VertexSet, EmlReport)> {
            let (s, t) = (VertexSet::from_mask(n, s), VertexSet::from_mask(n, t));
            let r = self.check(g, &s, &t, tol)?;
            Ok((s, t, r))
        };
        Ok(ExhaustiveEml {
            pairs_checked: count * count,
            holds: all_hold,
            worst_trace: at(worst_trace)?,
            worst_spectral: at(worst_spectral)?,
        })
    }
}

/// `W_uv` (or `None`) for every ordered vertex pair, row-major.
fn vertex_blocks(g: &MatrixWeightedGraph) -> Vec<Option<SymMatrix>> {
    let n = g.n();
    let mut blocks = alloc::vec![None; n * n];
    for (e, w) in g.iter_edges() {
        blocks[e.u * n + e.v] = Some(w.clone());
        blocks[e.v * n + e.u] = Some(w.clone());
    }
    blocks
}

/// Summary of [`RegularEml::exhaustive`]; the worst pairs are recomputed
/// from scratch.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveEml {
    pub pairs_checked: u64,
    pub holds: bool,
    pub worst_trace: (VertexSet, VertexSet, EmlReport),
    pub worst_spectral: (VertexSet, VertexSet, EmlReport),
}

pub fn eml_regular(g: &MatrixWeightedGraph, s: &VertexSet, t: &VertexSet, tol: &Tolerances) -> Result<EmlReport> {
    RegularEml::new(g, tol)?.check(g, s, t, tol)
}

/// Volume data and `|μ̃_{k+1}|` for the irregular mixing lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct IrregularEml {
    k: usize,
    total_volume_inv: SymMatrix,
    /// `(k+1)`-th largest `|μ̃|` of the normalized adjacency.
    mu_tilde: f64,
}

impl IrregularEml {
    pub fn new(g: &MatrixWeightedGraph, tol: &Tolerances) -> Result<Self> {
        let k = g.k();
        let total_volume_inv = inverse(&g.total_volume(), tol)?;
        let ops = assemble(g, tol)?;
        let mut by_abs: Vec<f64> = eigh(&ops.normalized_adjacency)?.values().iter().map(|x| abs(*x)).collect();
        by_abs.sort_by(|a, b| b.total_cmp(a));
        let mu_tilde = by_abs.get(k).copied().unwrap_or(0.0);
        Ok(Self { k, total_volume_inv, mu_tilde })
    }

    pub fn mu_tilde(&self) -> f64 {
        self.mu_tilde
    }

    /// `V(A,B) = vol(A) vol(G)^{-1} vol(B)`.
    fn v(&self, a: &SymMatrix, b: &SymMatrix) -> Matrix {
        a.to_matrix().mul(&self.total_volume_inv.to_matrix()).mul(&b.to_matrix())
    }

    pub fn check(
        &self,
        g: &MatrixWeightedGraph,
        s: &VertexSet,
        t: &VertexSet,
        tol: &Tolerances,
    ) -> Result<BoundReport> {
        let e = edge_count(g, s, t)?;
        let (vol_s, vol_t) = (g.volume(s)?, g.volume(t)?);
        let trace = |m: &Matrix| (0..self.k).map(|i| m.get(i, i)).sum::<f64>();
        let lhs = abs(e.trace() - trace(&self.v(&vol_s, &vol_t)));
        let spread_s = (vol_s.trace() - trace(&self.v(&vol_s, &vol_s))).max(0.0);
        let spread_t = (vol_t.trace() - trace(&self.v(&vol_t, &vol_t))).max(0.0);
        let rhs = self.mu_tilde * sqrt(spread_s * spread_t);
        Ok(BoundReport::single("eml_irregular", lhs, rhs, tol.check).with("mu_tilde_k+1", self.mu_tilde))
    }
}

pub fn eml_irregular(g: &MatrixWeightedGraph, s: &VertexSet, t: &VertexSet, tol: &Tolerances) -> Result<BoundReport> {
    IrregularEml::new(g, tol)?.check(g, s, t, tol)
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

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, v).unwrap()
    }

    #[test]
    fn edge_count_basics() {
        let w = SymMatrix::from_row_major(2, vec![2.0, 1.0, 1.0, 3.0], 0.0).unwrap();
        let g = MatrixWeightedGraph::from_edge_list(3, 2, vec![(0, 1, w.clone())], &t()).unwrap();
        assert_eq!(edge_count(&g, &set(3, &[0]), &set(3, &[1])).unwrap(), w);
        assert!(edge_count(&g, &set(3, &[0]), &set(3, &[2])).unwrap().is_zero());
        let all = VertexSet::full(3);
        assert_eq!(edge_count(&g, &all, &all).unwrap(), g.total_volume());
        let via = edge_count_via_adjacency(&g, &all, &set(3, &[1, 2])).unwrap();
        assert_eq!(via, w.to_matrix());
    }

    #[test]
    fn empty_and_full_subsets_are_equalities() {
        let g = lift(BaseGraph::complete(4), 2);
        let r = eml_regular(&g, &VertexSet::empty(4), &set(4, &[1]), &t()).unwrap();
        assert_eq!((r.trace_check.lhs, r.trace_check.rhs), (0.0, 0.0));
        let full = VertexSet::full(4);
        let r = eml_regular(&g, &full, &full, &t()).unwrap();
        assert!(r.trace_check.lhs.abs() < 1e-12 && r.trace_check.rhs == 0.0);
        assert!(r.trace_check.holds && r.spectral_check.holds);
    }

    #[test]
    fn complete_graph_disjoint_pair() {
        // K5 lifted with k = 2: μ = 4 (×2), −1 (×8), so |μ| = 2.
        let g = lift(BaseGraph::complete(5), 2);
        let eml = RegularEml::new(&g, &t()).unwrap();
        assert!((eml.abs_mu() - 2.0).abs() < 1e-12);
        let r = eml.check(&g, &set(5, &[0, 1]), &set(5, &[2, 3]), &t()).unwrap();
        let rhs = 2.0 * (4.0f64 * 0.6 * 0.6).sqrt();
        assert!((r.trace_check.rhs - rhs).abs() < 1e-12);
        // tr E = 2·4 = 8, centered at kd|S||T|/n = 2·4·4/5
        assert!((r.trace_check.lhs - (8.0 - 6.4f64)).abs() < 1e-12);
        assert!(r.trace_check.holds && r.spectral_check.holds);
    }

    #[test]
    fn rejects_irregular() {
        let g = lift(BaseGraph::path(3), 1);
        assert_eq!(RegularEml::new(&g, &t()), Err(Error::NotScalarRegular));
    }

    #[test]
    fn exhaustive_on_cycle() {
        let g = lift(BaseGraph::cycle(5), 2);
        let ex = RegularEml::new(&g, &t()).unwrap().exhaustive(&g, &t()).unwrap();
        assert_eq!(ex.pairs_checked, 1024);
        assert!(ex.holds);
        assert!(ex.worst_trace.2.trace_check.slack >= -1e-8);
    }

    #[test]
    fn irregular_single_edge_equality() {
        let g = lift(BaseGraph::path(2), 1);
        let r = eml_irregular(&g, &set(2, &[0]), &set(2, &[1]), &t()).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-12);
        assert!((r.rhs - 0.5).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn irregular_full_set_vanishes() {
        let g = lift(BaseGraph::path(4), 2);
        let r = eml_irregular(&g, &VertexSet::full(4), &set(4, &[1, 3]), &t()).unwrap();
        assert!(r.lhs < 1e-12 && r.rhs < 1e-6);
    }

    #[test]
    fn irregular_singular_volume() {
        let g = MatrixWeightedGraph::from_edge_list(2, 2, vec![(0, 1, SymMatrix::diag(&[1.0, 0.0]))], &t()).unwrap();
        assert!(matches!(IrregularEml::new(&g, &t()), Err(Error::SingularVolume { .. })));
    }

    #[test]
    fn middle_terms_vanish_when_regular() {
        let g = lift(BaseGraph::petersen(), 2);
        assert!(middle_term_residual(&g, &set(10, &[0, 3, 7])).unwrap() < 1e-12);
    }
}
