//! On-disk formats: MWG-JSON graphs, truss JSON and frame JSON, plus the
//! built-in named frames.

use std::path::Path;

use mwg_core::enumerate::parse_graph6;
use mwg_core::frame::{equiangular_2d, FusionFrame};
use mwg_core::truss::{Bar, Truss};
use mwg_core::{BaseGraph, MatrixWeightedGraph, SymMatrix, Tolerances};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Anything wrong with user-supplied input. The CLI maps these to exit 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] mwg_core::Error),
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, InputError> {
    std::fs::read(path).map_err(|source| InputError::Read { path: path.display().to_string(), source })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    u: usize,
    v: usize,
    /// `k·k` entries, row-major.
    w: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    k: usize,
    n: usize,
    edges: Vec<EdgeRecord>,
}

fn square(k: usize, data: Vec<f64>, what: &str, tol: &Tolerances) -> Result<SymMatrix, InputError> {
    if data.len() != k * k {
        return Err(InputError::Invalid(format!("{what} has {} entries, expected {}", data.len(), k * k)));
    }
    Ok(SymMatrix::from_row_major(k, data, tol.sym)?)
}

/// Parses MWG-JSON. Repeated pairs are merged by summing their weights.
pub fn load_graph(bytes: &[u8], tol: &Tolerances) -> Result<MatrixWeightedGraph, InputError> {
    let file: GraphFile = serde_json::from_slice(bytes)?;
    if file.k == 0 {
        return Err(InputError::Invalid("block size k must be positive".into()));
    }
    let mut entries = Vec::with_capacity(file.edges.len());
    for e in file.edges {
        let w = square(file.k, e.w, &format!("weight of edge {{{},{}}}", e.u, e.v), tol)?;
        entries.push((e.u, e.v, w));
    }
    Ok(MatrixWeightedGraph::from_edge_list(file.n, file.k, entries, tol)?)
}

/// Serializes to MWG-JSON with edges sorted by `(min, max)` and zero
/// weights dropped.
pub fn save_graph(g: &MatrixWeightedGraph) -> String {
    let mut edges: Vec<EdgeRecord> = g
        .iter_edges()
        .filter(|(_, w)| !w.is_zero())
        .map(|(e, w)| EdgeRecord { u: e.u, v: e.v, w: w.as_slice().to_vec() })
        .collect();
    edges.sort_by_key(|e| (e.u, e.v));
    let file = GraphFile { k: g.k(), n: g.n(), edges };
    serde_json::to_string_pretty(&file).expect("graph serializes") + "\n"
}

/// A base graph from MWG-JSON (weights ignored) or a graph6 string.
pub fn load_base_graph(bytes: &[u8], tol: &Tolerances) -> Result<BaseGraph, InputError> {
    let text = std::str::from_utf8(bytes).map_err(|e| InputError::Invalid(format!("input is not UTF-8: {e}")))?;
    let text = text.trim();
    if text.starts_with('{') {
        Ok(load_graph(text.as_bytes(), tol)?.base().clone())
    } else {
        Ok(parse_graph6(text)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BarRecord {
    u: usize,
    v: usize,
    s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrussFile {
    points: Vec<[f64; 3]>,
    edges: Vec<BarRecord>,
}

pub fn load_truss(bytes: &[u8]) -> Result<Truss, InputError> {
    let file: TrussFile = serde_json::from_slice(bytes)?;
    let bars = file.edges.into_iter().map(|b| Bar { u: b.u, v: b.v, stiffness: b.s }).collect();
    Ok(Truss::new(file.points, bars)?)
}

pub fn save_truss(t: &Truss) -> String {
    let file = TrussFile {
        points: t.points().to_vec(),
        edges: t.bars().iter().map(|b| BarRecord { u: b.u, v: b.v, s: b.stiffness }).collect(),
    };
    serde_json::to_string_pretty(&file).expect("truss serializes") + "\n"
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    k: usize,
    /// One row-major `k·k` list per element.
    projections: Vec<Vec<f64>>,
}

pub fn load_frame(bytes: &[u8], tol: &Tolerances) -> Result<FusionFrame, InputError> {
    let file: FrameFile = serde_json::from_slice(bytes)?;
    let projections = file
        .projections
        .into_iter()
        .enumerate()
        .map(|(i, p)| square(file.k, p, &format!("projection {i}"), tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FusionFrame::new(file.k, projections, tol)?)
}

pub fn save_frame(f: &FusionFrame) -> String {
    let file = FrameFile { k: f.k(), projections: f.projections().iter().map(|p| p.as_slice().to_vec()).collect() };
    serde_json::to_string_pretty(&file).expect("frame serializes") + "\n"
}

/// Resolves `equiangular{r}`, `equiangular{r}+I`, `identity{k}` or a
/// frame file path. `identity{k}` takes its size from `colors`.
pub fn resolve_frame(name: &str, colors: Option<usize>, tol: &Tolerances) -> Result<FusionFrame, InputError> {
    let number = |s: &str| s.parse::<usize>().ok();
    if let Some(rest) = name.strip_prefix("equiangular") {
        let (count, with_identity) = match rest.strip_suffix("+I") {
            Some(c) => (c, true),
            None => (rest, false),
        };
        if let Some(r) = number(count) {
            let f = equiangular_2d(r)?;
            return Ok(if with_identity { f.augment_with_identity() } else { f });
        }
    }
    if let Some(k) = name.strip_prefix("identity").and_then(number) {
        let r = colors.ok_or_else(|| InputError::Invalid(format!("frame `{name}` needs a color count")))?;
        if k == 0 {
            return Err(InputError::Invalid("identity frames need k >= 1".into()));
        }
        return Ok(FusionFrame::identity_copies(k, r));
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(InputError::Invalid(format!("unknown frame `{name}` (not a built-in name or an existing file)")));
    }
    load_frame(&read_file(path)?, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mwg_core::Error;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn scalar_single_edge() {
        let g = load_graph(br#"{"k":1,"n":2,"edges":[{"u":0,"v":1,"w":[2.0]}]}"#, &t()).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.weight(0).get(0, 0), 2.0);
    }

    #[test]
    fn repeated_pairs_are_summed() {
        let json = br#"{"k":2,"n":2,"edges":[
            {"u":0,"v":1,"w":[1,0,0,0]},
            {"u":1,"v":0,"w":[0,0,0,3]}]}"#;
        let g = load_graph(json, &t()).unwrap();
        assert_eq!(g.weight(0), &SymMatrix::diag(&[1.0, 3.0]));
    }

    #[test]
    fn indefinite_weight_names_the_edge() {
        let json = br#"{"k":2,"n":3,"edges":[{"u":2,"v":1,"w":[1,0,0,-1]}]}"#;
        match load_graph(json, &t()) {
            Err(InputError::Core(Error::NotPsdEdge { u: 1, v: 2, .. })) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(load_graph(b"{", &t()), Err(InputError::Parse(_))));
        let short = br#"{"k":2,"n":2,"edges":[{"u":0,"v":1,"w":[1,0,0]}]}"#;
        assert!(matches!(load_graph(short, &t()), Err(InputError::Invalid(_))));
        let out = br#"{"k":1,"n":2,"edges":[{"u":0,"v":5,"w":[1]}]}"#;
        assert!(matches!(load_graph(out, &t()), Err(InputError::Core(Error::IndexOutOfRange { .. }))));
    }

    #[test]
    fn save_sorts_and_drops_zero_edges() {
        let json = br#"{"k":1,"n":3,"edges":[{"u":2,"v":1,"w":[1.5]},{"u":0,"v":2,"w":[0]},{"u":1,"v":0,"w":[0.1]}]}"#;
        let g = load_graph(json, &t()).unwrap();
        let saved = save_graph(&g);
        let back = load_graph(saved.as_bytes(), &t()).unwrap();
        assert_eq!(back.edges().len(), 2);
        assert_eq!(back.weight_between(1, 2).unwrap().get(0, 0), 1.5);
        assert_eq!(back.weight_between(0, 1).unwrap().get(0, 0), 0.1);
        assert_eq!(save_graph(&back), saved);
    }

    #[test]
    fn named_frames() {
        assert_eq!(resolve_frame("equiangular3", None, &t()).unwrap().len(), 3);
        let f = resolve_frame("equiangular3+I", None, &t()).unwrap();
        assert_eq!(f.len(), 4);
        assert!((f.verify_tight(&t()).unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(resolve_frame("identity2", Some(4), &t()).unwrap().len(), 4);
        assert!(resolve_frame("identity2", None, &t()).is_err());
        assert!(resolve_frame("no-such-frame", None, &t()).is_err());
    }

    #[test]
    fn frame_and_truss_round_trip() {
        let f = equiangular_2d(3).unwrap();
        let back = load_frame(save_frame(&f).as_bytes(), &t()).unwrap();
        assert_eq!(back, f);
        let tr = Truss::regular_tetrahedron();
        assert_eq!(load_truss(save_truss(&tr).as_bytes()).unwrap(), tr);
    }

    #[test]
    fn base_graph_from_either_format() {
        assert_eq!(load_base_graph(b"C~\n", &t()).unwrap().edge_count(), 6);
        let json = br#"{"k":1,"n":2,"edges":[{"u":0,"v":1,"w":[1]}]}"#;
        assert_eq!(load_base_graph(json, &t()).unwrap().edge_count(), 1);
    }
}
