//! Exhaustive search for matrix-weighted expanders over small regular graphs.

use alloc::string::String;
use alloc::vec::Vec;

use crate::coloring::{colorings_up_to_permutation, EdgeColoring};
use crate::enumerate::{graph6, parse_graph6, regular_graphs};
use crate::error::{Error, Result};
use crate::expander::{build_expander_with, eta, ExpanderReport};
use crate::frame::FusionFrame;
use crate::graph::{BaseGraph, MatrixWeightedGraph};
use crate::linalg::{abs, Tolerances};
use crate::spectral::adjacency_spectrum;

pub const SEARCH_N_MAX: usize = 12;
/// Colorings examined per graph, counted up to color renaming.
pub const COLORING_CAP: usize = 200_000;
/// Spectra closer than this (max entry difference) are merged.
pub const SPECTRUM_MERGE_TOL: f64 = 1e-9;

/// One construction: a graph, a coloring and an assignment of frame
/// elements to colors, standing for `equivalent` cospectral constructions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Candidate {
    pub n: usize,
    /// graph6 of the canonically labeled graph.
    pub code: String,
    pub coloring: Vec<usize>,
    /// `assignment[c]` is the frame element used for color `c`.
    pub assignment: Vec<usize>,
    pub report: ExpanderReport,
    pub equivalent: usize,
}

impl Candidate {
    pub fn build(&self, frame: &FusionFrame, tol: &Tolerances) -> Result<MatrixWeightedGraph> {
        let g = parse_graph6(&self.code)?;
        let coloring = EdgeColoring::new(&g, self.coloring.clone(), frame.len())?;
        build_expander_with(&g, &coloring, frame, Some(&self.assignment), tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraphOutcome {
    pub n: usize,
    pub code: String,
    /// Number of weighted graphs built (before merging cospectral ones).
    pub constructed: usize,
    /// `max_v ‖D_v − cI‖_max` over everything built.
    pub max_degree_deviation: f64,
    pub candidates: Vec<Candidate>,
}

/// Orderings of the frame that give different weightings: permutations of
/// `0..r`, deduplicated by the classes of identical elements.
pub fn distinct_assignments(frame: &FusionFrame, tol: &Tolerances) -> Vec<Vec<usize>> {
    let classes = frame.element_classes(tol);
    let r = frame.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut perm: Vec<usize> = (0..r).collect();
    loop {
        let labels: Vec<usize> = perm.iter().map(|&i| classes[i]).collect();
        if !seen.contains(&labels) {
            seen.push(labels);
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Builds every expander on `g` (assumed canonically labeled) and merges
/// cospectral results. An uncolorable graph yields no candidates.
pub fn evaluate_graph(g: &BaseGraph, frame: &FusionFrame, tol: &Tolerances) -> Result<GraphOutcome> {
    let c = frame.verify_tight(tol)?;
    let code = graph6(g);
    let assignments = distinct_assignments(frame, tol);
    let mut merged: Vec<(Vec<f64>, Candidate)> = Vec::new();
    let mut constructed = 0;
    let mut max_dev = 0.0f64;
    for coloring in colorings_up_to_permutation(g, frame.len(), COLORING_CAP) {
        for assignment in &assignments {
            let m = build_expander_with(g, &coloring, frame, Some(assignment), tol)?;
            constructed += 1;
            for dv in m.degrees() {
                for i in 0..dv.dim() {
                    for j in 0..dv.dim() {
                        let target = if i == j { c } else { 0.0 };
                        max_dev = max_dev.max(abs(dv.get(i, j) - target));
                    }
                }
            }
            let spectrum = adjacency_spectrum(&m)?.values().to_vec();
            let same =
                merged.iter_mut().find(|(s, _)| s.iter().zip(&spectrum).all(|(a, b)| abs(a - b) <= SPECTRUM_MERGE_TOL));
            if let Some((_, cand)) = same {
                cand.equivalent += 1;
                continue;
            }
            let report = eta(&m, tol)?;
            merged.push((
                spectrum,
                Candidate {
                    n: g.n(),
                    code: code.clone(),
                    coloring: coloring.colors().to_vec(),
                    assignment: assignment.clone(),
                    report,
                    equivalent: 1,
                },
            ));
        }
    }
    Ok(GraphOutcome {
        n: g.n(),
        code,
        constructed,
        max_degree_deviation: max_dev,
        candidates: merged.into_iter().map(|(_, c)| c).collect(),
    })
}

/// η descending, then canonical code, coloring and assignment ascending.
pub fn rank(candidates: &mut [Candidate]) {
    candidates.sort_by(|a, b| {
        b.report
            .eta
            .total_cmp(&a.report.eta)
            .then_with(|| a.code.cmp(&b.code))
            .then_with(|| a.coloring.cmp(&b.coloring))
            .then_with(|| a.assignment.cmp(&b.assignment))
    });
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchReport {
    pub r: usize,
    pub n_max: usize,
    /// Every connected `r`-regular graph examined, in enumeration order.
    pub graphs: Vec<GraphOutcome>,
    /// All candidates, ranked.
    pub ranked: Vec<Candidate>,
}

impl SearchReport {
    /// graph6 codes of the graphs without a proper `r`-edge-coloring.
    pub fn uncolorable(&self) -> Vec<&str> {
        self.graphs.iter().filter(|g| g.constructed == 0).map(|g| g.code.as_str()).collect()
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.ranked.first()
    }
}

/// Connected `r`-regular graphs on `n ≤ n_max` vertices, in order of `n`
/// and then canonical code.
pub fn candidate_graphs(n_max: usize, r: usize) -> Result<Vec<BaseGraph>> {
    if n_max > SEARCH_N_MAX {
        return Err(Error::TooLarge { n: n_max, limit: SEARCH_N_MAX });
    }
    let mut out = Vec::new();
    for n in (r + 1)..=n_max {
        out.extend(regular_graphs(n, r, true)?);
    }
    Ok(out)
}

pub fn assemble_report(r: usize, n_max: usize, graphs: Vec<GraphOutcome>) -> SearchReport {
    let mut ranked: Vec<Candidate> = graphs.iter().flat_map(|g| g.candidates.iter().cloned()).collect();
    rank(&mut ranked);
    SearchReport { r, n_max, graphs, ranked }
}

/// Sequential search; `r` must equal the frame size.
pub fn search_expanders(n_max: usize, r: usize, frame: &FusionFrame, tol: &Tolerances) -> Result<SearchReport> {
    if frame.len() != r {
        return Err(Error::FrameSizeMismatch { expected: r, found: frame.len() });
    }
    let graphs =
        candidate_graphs(n_max, r)?.iter().map(|g| evaluate_graph(g, frame, tol)).collect::<Result<Vec<_>>>()?;
    Ok(assemble_report(r, n_max, graphs))
}
