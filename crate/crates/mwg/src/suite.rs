//! The seeded randomized graph suite behind the acceptance criteria.

use mwg_core::coloring::proper_edge_coloring;
use mwg_core::enumerate::{all_graphs, regular_graphs};
use mwg_core::expander::build_expander;
use mwg_core::expansion::IrregularEml;
use mwg_core::frame::equiangular_2d;
use mwg_core::linalg::eigh;
use mwg_core::{
    BaseGraph, MatrixWeightedGraph, Regularity, Result, ScalarWeightedGraph, SymMatrix, Tolerances, VertexSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sizes of the generated families. The defaults are the acceptance minimums.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub random_graphs: usize,
    pub max_n: usize,
    pub max_k: usize,
    /// Random `dI`-regular weightings per colorable base graph.
    pub regular_per_base: usize,
    pub irregular_graphs: usize,
    pub pairs_per_graph: usize,
    /// Identity lifts cover every graph on at most this many vertices.
    pub lift_max_n: usize,
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            random_graphs: 1000,
            max_n: 8,
            max_k: 3,
            regular_per_base: 6,
            irregular_graphs: 500,
            pairs_per_graph: 200,
            lift_max_n: 6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteGraph {
    pub label: String,
    pub graph: MatrixWeightedGraph,
}

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `BᵀB` for a random `rank × k` matrix `B` with entries in `[−1, 1)`.
pub fn random_psd(rng: &mut impl Rng, k: usize) -> SymMatrix {
    let rank = rng.random_range(0..=k);
    let b: Vec<f64> = (0..rank * k).map(|_| rng.random_range(-1.0..1.0)).collect();
    SymMatrix::from_upper_fn(k, |i, j| (0..rank).map(|r| b[r * k + i] * b[r * k + j]).sum())
}

/// Each pair of vertices becomes an edge with probability 1/2.
pub fn random_graph(rng: &mut impl Rng, n: usize, k: usize, tol: &Tolerances) -> Result<MatrixWeightedGraph> {
    let mut entries = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(0.5) {
                entries.push((u, v, random_psd(rng, k)));
            }
        }
    }
    MatrixWeightedGraph::from_edge_list(n, k, entries, tol)
}

/// Random PSD weights on the first `r − 1` color classes of a proper
/// coloring and `cI − Σ` on the last, with `c = λ_max(Σ)`.
pub fn random_scalar_regular(
    rng: &mut impl Rng,
    g: &BaseGraph,
    k: usize,
    tol: &Tolerances,
) -> Result<MatrixWeightedGraph> {
    let r = g.regular_degree().unwrap_or(0);
    let coloring = proper_edge_coloring(g, r)?;
    let mut by_color: Vec<SymMatrix> = (0..r.saturating_sub(1)).map(|_| random_psd(rng, k)).collect();
    let mut sum = SymMatrix::zeros(k);
    for p in &by_color {
        sum += p;
    }
    let c = eigh(&sum)?.max().max(0.0);
    by_color.push(&SymMatrix::scaled_identity(k, c) - &sum);
    let weights = coloring.colors().iter().map(|&c| by_color[c].clone()).collect();
    MatrixWeightedGraph::new(g.clone(), k, weights, tol)
}

pub fn random_subset(rng: &mut impl Rng, n: usize) -> VertexSet {
    let idx: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    VertexSet::from_indices(n, &idx).expect("indices are in range")
}

/// Connected `r`-regular class-one graphs on at most `max_n` vertices, for
/// `r = 2, 3, 4`.
pub fn colorable_regular_bases(max_n: usize) -> Result<Vec<BaseGraph>> {
    let mut out = Vec::new();
    for r in 2..=4 {
        for n in (r + 1)..=max_n {
            for g in regular_graphs(n, r, true)? {
                if proper_edge_coloring(&g, r).is_ok() {
                    out.push(g);
                }
            }
        }
    }
    Ok(out)
}

/// The graphs every criterion draws from, plus construction failures (which
/// only occur under unusual tolerance overrides).
#[derive(Debug, Clone, Default)]
pub struct Suite {
    /// Random PSD weights, `n ≤ max_n`, `k ≤ max_k`.
    pub random: Vec<SuiteGraph>,
    /// `k = 1, 2` identity lifts of every graph on `n ≤ lift_max_n` vertices.
    pub lifts: Vec<SuiteGraph>,
    /// Random `dI`-regular weightings and the frame expanders.
    pub regular: Vec<SuiteGraph>,
    pub rejected: Vec<String>,
}

impl Suite {
    pub fn build(cfg: &SuiteConfig, tol: &Tolerances) -> Self {
        let mut suite = Suite::default();
        let mut r = rng(cfg.seed, 1);
        for i in 0..cfg.random_graphs {
            let n = r.random_range(1..=cfg.max_n);
            let k = r.random_range(1..=cfg.max_k);
            suite.push_random(format!("random#{i} n={n} k={k}"), random_graph(&mut r, n, k, tol));
        }
        match lifts(cfg.lift_max_n) {
            Ok(l) => suite.lifts = l,
            Err(e) => suite.rejected.push(format!("identity lifts: {e}")),
        }
        let mut r = rng(cfg.seed, 2);
        match colorable_regular_bases(cfg.max_n) {
            Ok(bases) => {
                for (bi, base) in bases.iter().enumerate() {
                    for j in 0..cfg.regular_per_base {
                        let k = 1 + j % cfg.max_k;
                        let label = format!("regular base#{bi} n={} weighting#{j} k={k}", base.n());
                        match random_scalar_regular(&mut r, base, k, tol) {
                            Ok(graph) => suite.regular.push(SuiteGraph { label, graph }),
                            Err(e) => suite.rejected.push(format!("{label}: {e}")),
                        }
                    }
                    if base.regular_degree() == Some(3) {
                        let label = format!("expander base#{bi} n={} frame=equiangular3", base.n());
                        match frame_expander(base, tol) {
                            Ok(graph) => suite.regular.push(SuiteGraph { label, graph }),
                            Err(e) => suite.rejected.push(format!("{label}: {e}")),
                        }
                    }
                }
            }
            Err(e) => suite.rejected.push(format!("regular bases: {e}")),
        }
        suite
    }

    fn push_random(&mut self, label: String, g: Result<MatrixWeightedGraph>) {
        match g {
            Ok(graph) => self.random.push(SuiteGraph { label, graph }),
            Err(e) => self.rejected.push(format!("{label}: {e}")),
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &SuiteGraph> {
        self.random.iter().chain(&self.lifts).chain(&self.regular)
    }

    /// Every `dI`-regular member on at most `max_n` vertices.
    pub fn scalar_regular(&self, max_n: usize, tol: &Tolerances) -> Vec<(&SuiteGraph, f64)> {
        self.all()
            .filter(|g| g.graph.n() <= max_n)
            .filter_map(|g| match g.graph.regularity(tol) {
                Regularity::ScalarRegular(d) => Some((g, d)),
                _ => None,
            })
            .collect()
    }
}

fn lifts(max_n: usize) -> Result<Vec<SuiteGraph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for (i, g) in all_graphs(n)?.into_iter().enumerate() {
            for k in [1, 2] {
                let graph = MatrixWeightedGraph::lift_identity(&ScalarWeightedGraph::unit(g.clone()), k);
                out.push(SuiteGraph { label: format!("lift n={n} graph#{i} k={k}"), graph });
            }
        }
    }
    Ok(out)
}

fn frame_expander(base: &BaseGraph, tol: &Tolerances) -> Result<MatrixWeightedGraph> {
    let coloring = proper_edge_coloring(base, 3)?;
    build_expander(base, &coloring, &equiangular_2d(3)?, tol)
}

/// Random irregular graphs whose total volume is invertible; draws until
/// `count` are found or `count · 50` attempts have failed.
pub fn irregular_graphs(cfg: &SuiteConfig, tol: &Tolerances) -> (Vec<(SuiteGraph, IrregularEml)>, Vec<String>) {
    let mut r = rng(cfg.seed, 3);
    let mut out = Vec::new();
    let mut rejected = Vec::new();
    let mut attempts = 0;
    while out.len() < cfg.irregular_graphs && attempts < cfg.irregular_graphs * 50 {
        attempts += 1;
        let n = r.random_range(2..=cfg.max_n);
        let k = r.random_range(1..=cfg.max_k);
        let g = match random_graph(&mut r, n, k, tol) {
            Ok(g) => g,
            Err(e) => {
                rejected.push(format!("irregular attempt#{attempts}: {e}"));
                continue;
            }
        };
        if g.regularity(tol) != Regularity::Irregular {
            continue;
        }
        if let Ok(eml) = IrregularEml::new(&g, tol) {
            let label = format!("irregular#{} n={n} k={k}", out.len());
            out.push((SuiteGraph { label, graph: g }, eml));
        }
    }
    (out, rejected)
}
