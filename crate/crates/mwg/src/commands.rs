//! The subcommands, as functions from parsed arguments to a report value.

use mwg_core::cheeger::{check_cheeger_lower_bounds, cheeger_constants, verify_counterexample};
use mwg_core::coloring::{proper_edge_coloring, EdgeColoring};
use mwg_core::expander::{build_expander, eta};
use mwg_core::expansion::{IrregularEml, RegularEml, EXHAUSTIVE_EML_LIMIT};
use mwg_core::linalg::kernel_dim;
use mwg_core::sheaf::{build_coboundary, global_sections, verify_factorization};
use mwg_core::spectral::{adjacency_spectrum, check_normalized_bound, laplacian, laplacian_spectrum};
use mwg_core::truss::{rigid_motions, truss_to_mwg};
use mwg_core::{Error, MatrixWeightedGraph, Regularity, Tolerances, VertexSet};
use serde_json::{json, Value};

use crate::io::{load_base_graph, load_graph, load_truss, read_file, resolve_frame, save_graph, InputError};
use crate::output::rows;
use crate::search::{sample_search, search, SearchRecord};
use crate::suite::rng;
use crate::verify::{verify_paper, VerifyConfig, VerifyReport};

/// A rendered-to-be report and whether every verification in it passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

fn regularity_value(g: &MatrixWeightedGraph, tol: &Tolerances) -> Value {
    match g.regularity(tol) {
        Regularity::Irregular => json!({"kind": "irregular"}),
        Regularity::Regular(d) => json!({"kind": "regular", "degree": rows(&d)}),
        Regularity::ScalarRegular(d) => json!({"kind": "scalar_regular", "d": d}),
    }
}

pub fn parse_subset(n: usize, list: &str) -> Result<VertexSet, InputError> {
    let idx = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| InputError::Invalid(format!("`{s}` is not a vertex index"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexSet::from_indices(n, &idx)?)
}

pub fn spectrum(path: &std::path::Path, tol: &Tolerances) -> Result<Outcome, InputError> {
    let g = load_graph(&read_file(path)?, tol)?;
    let lam = laplacian_spectrum(&g)?;
    let mu = adjacency_spectrum(&g)?;
    let normalized = check_normalized_bound(&g, tol)?;
    let value = json!({
        "n": g.n(),
        "k": g.k(),
        "lambda": lam.values(),
        "mu": mu.values(),
        "kernel_dim": kernel_dim(&laplacian(&g), tol)?,
        "regularity": regularity_value(&g, tol),
        "geometric_degrees": g.geometric_degrees(),
        "normalized_laplacian": {
            "lambda_max": normalized.report.lhs,
            "bound": 2.0,
            "holds": normalized.report.holds,
            "attained": normalized.attained,
        },
    });
    Ok(Outcome { value, ok: normalized.report.holds })
}

pub struct EmlArgs<'a> {
    pub s: Option<&'a str>,
    pub t: Option<&'a str>,
    pub exhaustive: bool,
}

pub fn eml(path: &std::path::Path, args: &EmlArgs, tol: &Tolerances) -> Result<Outcome, InputError> {
    let g = load_graph(&read_file(path)?, tol)?;
    let n = g.n();
    let regular = match RegularEml::new(&g, tol) {
        Ok(e) => Some(e),
        Err(Error::NotScalarRegular) => None,
        Err(e) => return Err(e.into()),
    };
    let irregular = match IrregularEml::new(&g, tol) {
        Ok(e) => Some(e),
        Err(Error::SingularVolume { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut ok = true;
    let mut value = json!({"n": n, "k": g.k(), "regularity": regularity_value(&g, tol)});
    if args.exhaustive {
        if n > EXHAUSTIVE_EML_LIMIT {
            return Err(Error::TooLarge { n, limit: EXHAUSTIVE_EML_LIMIT }.into());
        }
        if let Some(eml) = &regular {
            let ex = eml.exhaustive(&g, tol)?;
            ok &= ex.holds;
            value["regular"] = json!({
                "pairs_checked": ex.pairs_checked,
                "holds": ex.holds,
                "worst_trace": {"S": ex.worst_trace.0.to_vec(), "T": ex.worst_trace.1.to_vec(), "report": ex.worst_trace.2},
                "worst_spectral": {"S": ex.worst_spectral.0.to_vec(), "T": ex.worst_spectral.1.to_vec(), "report": ex.worst_spectral.2},
            });
        }
        if let Some(eml) = &irregular {
            let mut worst: Option<(f64, Vec<usize>, Vec<usize>)> = None;
            let mut pairs = 0u64;
            for sm in 0..1u64 << n {
                let s = VertexSet::from_mask(n, sm);
                for tm in 0..1u64 << n {
                    let t = VertexSet::from_mask(n, tm);
                    let b = eml.check(&g, &s, &t, tol)?;
                    pairs += 1;
                    ok &= b.holds;
                    if worst.as_ref().is_none_or(|w| b.slack < w.0) {
                        worst = Some((b.slack, s.to_vec(), t.to_vec()));
                    }
                }
            }
            let (slack, s, t) = worst.expect("at least the empty pair");
            value["irregular"] = json!({"pairs_checked": pairs, "min_slack": slack, "worst_S": s, "worst_T": t, "mu_tilde": eml.mu_tilde()});
        }
    } else {
        let (Some(s), Some(t)) = (args.s, args.t) else {
            return Err(InputError::Invalid("eml needs --S and --T, or --exhaustive".into()));
        };
        let (s, t) = (parse_subset(n, s)?, parse_subset(n, t)?);
        value["edge_count"] = json!(rows(&mwg_core::expansion::edge_count(&g, &s, &t)?));
        if let Some(eml) = &regular {
            let r = eml.check(&g, &s, &t, tol)?;
            ok &= r.trace_check.holds && r.spectral_check.holds;
            value["regular"] = json!(r);
        }
        if let Some(eml) = &irregular {
            let r = eml.check(&g, &s, &t, tol)?;
            ok &= r.holds;
            value["irregular"] = json!(r);
        }
    }
    if regular.is_none() {
        value["regular_skipped"] = json!("graph is not dI-regular");
    }
    if irregular.is_none() {
        value["irregular_skipped"] = json!("vol(G) is singular");
    }
    Ok(Outcome { value, ok })
}

pub fn cheeger(path: &std::path::Path, per_subset: bool, tol: &Tolerances) -> Result<Outcome, InputError> {
    let g = load_graph(&read_file(path)?, tol)?;
    let report = cheeger_constants(&g, tol, per_subset)?;
    let (trace, loewner) = check_cheeger_lower_bounds(&g, tol)?;
    let cert = verify_counterexample(&g, tol)?;
    let ok = trace.holds && loewner.holds;
    let subsets = report
        .per_subset
        .as_ref()
        .map(|all| all.iter().map(|(s, h)| json!({"S": s, "h": rows(h)})).collect::<Vec<_>>());
    let value = json!({
        "d": report.d,
        "h_trace": report.h_trace,
        "argmin": report.argmin,
        "h_loewner_alpha": report.h_loewner_alpha,
        "alpha_argmin": report.alpha_argmin,
        "boundary_rank_min": report.boundary_rank_range.0,
        "boundary_rank_max": report.boundary_rank_range.1,
        "subsets_checked": report.subsets_checked,
        "trace_lower_bound": trace,
        "loewner_lower_bound": loewner,
        "certificate": cert,
        "is_counterexample": cert.is_counterexample(tol),
        "per_subset": subsets,
    });
    Ok(Outcome { value, ok })
}

pub fn sheaf_check(path: &std::path::Path, tol: &Tolerances) -> Result<Outcome, InputError> {
    let g = load_graph(&read_file(path)?, tol)?;
    let fact = verify_factorization(&g, tol)?;
    let h0 = global_sections(&g, tol)?.cols();
    let ker = kernel_dim(&laplacian(&g), tol)?;
    let delta = build_coboundary(&g, None, tol)?;
    let ok = fact.holds && h0 == ker;
    let value = json!({
        "n": g.n(),
        "k": g.k(),
        "coboundary_rows": delta.matrix.rows(),
        "coboundary_cols": delta.matrix.cols(),
        "factorization": fact,
        "h0_dim": h0,
        "laplacian_kernel_dim": ker,
        "h0_matches_kernel": h0 == ker,
    });
    Ok(Outcome { value, ok })
}

pub fn truss(path: &std::path::Path, tol: &Tolerances) -> Result<Outcome, InputError> {
    let t = load_truss(&read_file(path)?)?;
    let g = truss_to_mwg(&t, tol)?;
    let l = laplacian(&g);
    let ker = kernel_dim(&l, tol)?;
    let motions = rigid_motions(t.points(), tol);
    let residuals: Vec<f64> =
        (0..motions.cols()).map(|j| l.mul_vec(&motions.column(j)).iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let scale = l.frobenius_norm().max(1.0);
    let ok = worst <= tol.resid * scale;
    let value = json!({
        "points": t.points().len(),
        "bars": t.bars().len(),
        "kernel_dim": ker,
        "rigid_motions": motions.cols(),
        "motion_residuals": residuals,
        "motions_in_kernel": ok,
        "infinitesimally_rigid": ker == motions.cols(),
    });
    Ok(Outcome { value, ok })
}

pub struct BuildArgs<'a> {
    pub frame: &'a str,
    pub colors: Option<&'a str>,
    pub out: Option<&'a std::path::Path>,
}

pub fn build_expander_cmd(path: &std::path::Path, args: &BuildArgs, tol: &Tolerances) -> Result<Outcome, InputError> {
    let base = load_base_graph(&read_file(path)?, tol)?;
    let r = base.regular_degree().ok_or_else(|| InputError::Invalid("base graph is not regular".into()))?;
    let frame = resolve_frame(args.frame, Some(r), tol)?;
    let coloring = match args.colors {
        Some(list) => {
            let colors = list
                .split(',')
                .map(|c| c.trim().parse::<usize>().map_err(|_| InputError::Invalid(format!("`{c}` is not a color"))))
                .collect::<Result<Vec<_>, _>>()?;
            EdgeColoring::new(&base, colors, frame.len())?
        }
        None => proper_edge_coloring(&base, frame.len())?,
    };
    let g = build_expander(&base, &coloring, &frame, tol)?;
    let report = eta(&g, tol)?;
    if let Some(out) = args.out {
        std::fs::write(out, save_graph(&g))
            .map_err(|source| InputError::Read { path: out.display().to_string(), source })?;
    }
    let value = json!({
        "n": g.n(),
        "k": g.k(),
        "frame_constant": frame.verify_tight(tol)?,
        "regularity": regularity_value(&g, tol),
        "coloring": coloring.colors(),
        "expander": report,
    });
    Ok(Outcome { value, ok: true })
}

pub struct SearchArgs<'a> {
    pub r: usize,
    pub n_max: usize,
    pub frame: &'a str,
    pub sample: Option<usize>,
    pub seed: u64,
    pub workers: usize,
}

/// Ranked records plus a summary line for stderr.
pub fn search_cmd(args: &SearchArgs, tol: &Tolerances) -> Result<(Vec<SearchRecord>, String), InputError> {
    let frame = resolve_frame(args.frame, Some(args.r), tol)?;
    let report = match args.sample {
        Some(samples) => sample_search(args.n_max, args.r, samples, &frame, &mut rng(args.seed, 0), tol, args.workers)?,
        None if args.n_max > mwg_core::search::SEARCH_N_MAX => {
            return Err(InputError::Invalid(format!("--n-max above {} needs --sample", mwg_core::search::SEARCH_N_MAX)))
        }
        None => search(args.n_max, args.r, &frame, tol, args.workers)?,
    };
    let constructed: usize = report.graphs.iter().map(|g| g.constructed).sum();
    let summary = format!(
        "{} graphs, {} uncolorable, {} constructions, {} distinct spectra",
        report.graphs.len(),
        report.uncolorable().len(),
        constructed,
        report.ranked.len()
    );
    Ok((report.ranked.iter().map(SearchRecord::from).collect(), summary))
}

pub fn verify_cmd(cfg: &VerifyConfig, only: &[String]) -> VerifyReport {
    verify_paper(cfg, only)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn identity_edge_spectrum() {
        let f = file(r#"{"k":2,"n":2,"edges":[{"u":0,"v":1,"w":[1,0,0,1]}]}"#);
        let out = spectrum(f.path(), &t()).unwrap();
        let lam: Vec<f64> = serde_json::from_value(out.value["lambda"].clone()).unwrap();
        for (x, want) in lam.iter().zip([0.0, 0.0, 2.0, 2.0]) {
            assert!((x - want).abs() < 1e-12);
        }
        assert_eq!(out.value["kernel_dim"], 2);
    }

    #[test]
    fn empty_graph_spectrum() {
        let f = file(r#"{"k":2,"n":3,"edges":[]}"#);
        let out = spectrum(f.path(), &t()).unwrap();
        assert_eq!(out.value["kernel_dim"], 6);
    }

    #[test]
    fn subsets_are_validated() {
        assert!(parse_subset(3, "0, 2").is_ok());
        assert!(parse_subset(3, "0,3").is_err());
        assert!(parse_subset(3, "x").is_err());
    }

    #[test]
    fn star_graph_irregular_eml() {
        let f = file(r#"{"k":1,"n":4,"edges":[{"u":0,"v":1,"w":[1]},{"u":0,"v":2,"w":[1]},{"u":0,"v":3,"w":[1]}]}"#);
        let args = EmlArgs { s: Some("0"), t: Some("1,2"), exhaustive: false };
        let out = eml(f.path(), &args, &t()).unwrap();
        assert!(out.ok);
        assert!(out.value["irregular"]["holds"].as_bool().unwrap());
        assert!(out.value.get("regular").is_none());
        let ex = eml(f.path(), &EmlArgs { s: None, t: None, exhaustive: true }, &t()).unwrap();
        assert!(ex.ok);
        assert_eq!(ex.value["irregular"]["pairs_checked"], 256);
    }

    #[test]
    fn k4_expander_has_degree_three_halves() {
        let f = file("C~\n");
        let args = BuildArgs { frame: "equiangular3", colors: None, out: None };
        let out = build_expander_cmd(f.path(), &args, &t()).unwrap();
        assert_eq!(out.value["regularity"]["d"], 1.5);
    }
}
