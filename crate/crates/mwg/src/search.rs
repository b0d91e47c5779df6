//! Parallel expander search and its JSON-lines records.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use mwg_core::coloring::proper_edge_coloring;
use mwg_core::enumerate::{canonical_graph, graph6, MAX_CANON_N};
use mwg_core::expander::{build_expander_with, eta};
use mwg_core::frame::FusionFrame;
use mwg_core::search::{
    assemble_report, candidate_graphs, distinct_assignments, evaluate_graph, Candidate, GraphOutcome, SearchReport,
};
use mwg_core::{BaseGraph, Error, Result, Tolerances};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

/// One line of the search output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub n: usize,
    pub code: String,
    pub coloring: Vec<usize>,
    pub assignment: Vec<usize>,
    pub eta: f64,
    pub mu_min: f64,
    pub mu_max: f64,
    pub d: f64,
    /// Cospectral constructions this record stands for.
    pub equivalent: usize,
}

impl From<&Candidate> for SearchRecord {
    fn from(c: &Candidate) -> Self {
        Self {
            n: c.n,
            code: c.code.clone(),
            coloring: c.coloring.clone(),
            assignment: c.assignment.clone(),
            eta: c.report.eta,
            mu_min: c.report.mu_min,
            mu_max: c.report.mu_max,
            d: c.report.d,
            equivalent: c.equivalent,
        }
    }
}

/// Applies `f` to every item on `workers` threads; results come back in
/// input order, so the output does not depend on scheduling.
pub fn par_map<T: Sync, U: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::with_capacity(items.len()));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let out = f(item);
                done.lock().expect("no worker panicked").push((i, out));
            });
        }
    });
    let mut done = done.into_inner().expect("no worker panicked");
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, u)| u).collect()
}

/// The exhaustive search of `mwg_core::search`, parallel over base graphs.
pub fn search(n_max: usize, r: usize, frame: &FusionFrame, tol: &Tolerances, workers: usize) -> Result<SearchReport> {
    if frame.len() != r {
        return Err(Error::FrameSizeMismatch { expected: r, found: frame.len() });
    }
    let graphs = candidate_graphs(n_max, r)?;
    let outcomes =
        par_map(&graphs, workers, |g| evaluate_graph(g, frame, tol)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(assemble_report(r, n_max, outcomes))
}

/// A uniformly random perfect matching of `n·r` half-edges, retried until
/// the result is simple. `None` after `attempts` failures.
pub fn random_regular(rng: &mut impl Rng, n: usize, r: usize, attempts: usize) -> Option<BaseGraph> {
    if r >= n || (n * r) % 2 == 1 {
        return None;
    }
    let mut points: Vec<usize> = (0..n * r).map(|p| p / r).collect();
    'attempt: for _ in 0..attempts {
        points.shuffle(rng);
        let mut seen = BTreeSet::new();
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        return BaseGraph::new(n, seen).ok();
    }
    None
}

/// Sampling mode for graphs beyond the exhaustive range: `samples` random
/// connected `r`-regular graphs on `n` vertices, each with its first proper
/// coloring and every distinct frame assignment.
pub fn sample_search(
    n: usize,
    r: usize,
    samples: usize,
    frame: &FusionFrame,
    rng: &mut impl Rng,
    tol: &Tolerances,
    workers: usize,
) -> Result<SearchReport> {
    if frame.len() != r {
        return Err(Error::FrameSizeMismatch { expected: r, found: frame.len() });
    }
    let mut graphs: Vec<BaseGraph> = Vec::new();
    let mut codes = BTreeSet::new();
    for _ in 0..samples {
        let Some(g) = random_regular(rng, n, r, 10_000) else { continue };
        if !g.is_connected() {
            continue;
        }
        let g = if n <= MAX_CANON_N { canonical_graph(&g)? } else { g };
        if codes.insert(graph6(&g)) {
            graphs.push(g);
        }
    }
    let assignments = distinct_assignments(frame, tol);
    let outcomes = par_map(&graphs, workers, |g| -> Result<GraphOutcome> {
        let code = graph6(g);
        let mut outcome =
            GraphOutcome { n, code: code.clone(), constructed: 0, max_degree_deviation: 0.0, candidates: Vec::new() };
        let Ok(coloring) = proper_edge_coloring(g, r) else { return Ok(outcome) };
        let c = frame.verify_tight(tol)?;
        for a in &assignments {
            let m = build_expander_with(g, &coloring, frame, Some(a), tol)?;
            outcome.constructed += 1;
            for dv in m.degrees() {
                let dev = dv.max_abs_diff(&mwg_core::SymMatrix::scaled_identity(dv.dim(), c));
                outcome.max_degree_deviation = outcome.max_degree_deviation.max(dev);
            }
            outcome.candidates.push(Candidate {
                n,
                code: code.clone(),
                coloring: coloring.colors().to_vec(),
                assignment: a.clone(),
                report: eta(&m, tol)?,
                equivalent: 1,
            });
        }
        Ok(outcome)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(assemble_report(r, n, outcomes))
}
