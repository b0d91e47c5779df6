use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mwg::commands::{self, BuildArgs, EmlArgs, Outcome, SearchArgs};
use mwg::io::InputError;
use mwg::output::{render, Format};
use mwg::verify::VerifyConfig;
use mwg_core::Tolerances;

/// Spectral checks, expansion bounds and fusion-frame expanders for
/// matrix-weighted graphs.
#[derive(Parser)]
#[command(name = "mwg", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every randomized suite and sampling mode.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Threads used by searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = parse_workers)]
    workers: usize,
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

fn parse_workers(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(w) if w >= 1 => Ok(w),
        _ => Err("worker count must be a positive integer".into()),
    }
}

/// Overrides for the numerical tolerances.
#[derive(Args)]
struct TolArgs {
    #[arg(long = "tol-sym", global = true)]
    sym: Option<f64>,
    #[arg(long = "tol-psd", visible_alias = "psd-tol", global = true)]
    psd: Option<f64>,
    #[arg(long = "tol-rank-rel", global = true)]
    rank_rel: Option<f64>,
    #[arg(long = "tol-loewner", global = true)]
    loewner: Option<f64>,
    #[arg(long = "tol-resid", global = true)]
    resid: Option<f64>,
    #[arg(long = "tol-ortho", global = true)]
    ortho: Option<f64>,
    #[arg(long = "tol-check", global = true)]
    check: Option<f64>,
    #[arg(long = "tol-attain", global = true)]
    attain: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Result<Tolerances, InputError> {
        let mut t = Tolerances::default();
        let overrides = [
            (&mut t.sym, self.sym),
            (&mut t.psd, self.psd),
            (&mut t.rank_rel, self.rank_rel),
            (&mut t.loewner, self.loewner),
            (&mut t.resid, self.resid),
            (&mut t.ortho, self.ortho),
            (&mut t.check, self.check),
            (&mut t.attain, self.attain),
        ];
        for (field, value) in overrides {
            if let Some(v) = value {
                *field = v;
            }
        }
        t.validate()?;
        Ok(t)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Laplacian and adjacency spectra, kernel dimension and regularity.
    Spectrum { graph: PathBuf },
    /// Expander mixing lemma checks for one subset pair or all of them.
    Eml {
        graph: PathBuf,
        /// Comma-separated vertex list.
        #[arg(long = "S", alias = "s")]
        s: Option<String>,
        #[arg(long = "T", alias = "t")]
        t: Option<String>,
        #[arg(long, conflicts_with_all = ["s", "t"])]
        exhaustive: bool,
    },
    /// Cheeger constants, their spectral lower bounds and the
    /// counterexample certificate.
    Cheeger {
        graph: PathBuf,
        /// Include h(S) for every visited subset.
        #[arg(long)]
        per_subset: bool,
    },
    /// Coboundary factorization and global sections.
    SheafCheck { graph: PathBuf },
    /// Stiffness Laplacian of a bar-joint framework.
    Truss { truss: PathBuf },
    /// Weights a regular base graph (MWG-JSON or graph6) by a frame.
    BuildExpander {
        base: PathBuf,
        #[arg(long)]
        frame: String,
        /// Comma-separated color per edge, in sorted edge order.
        #[arg(long)]
        colors: Option<String>,
        /// Write the weighted graph as MWG-JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ranks frame expanders over connected regular graphs.
    Search {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        frame: String,
        /// Sample this many random graphs on exactly n-max vertices instead
        /// of enumerating.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Runs the acceptance criteria A1-A12.
    VerifyPaper {
        /// Comma-separated criterion ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

fn run(cli: &Cli) -> Result<bool, InputError> {
    let tol = cli.tol.resolve()?;
    let outcome = match &cli.command {
        Command::Spectrum { graph } => commands::spectrum(graph, &tol)?,
        Command::Eml { graph, s, t, exhaustive } => {
            let args = EmlArgs { s: s.as_deref(), t: t.as_deref(), exhaustive: *exhaustive };
            commands::eml(graph, &args, &tol)?
        }
        Command::Cheeger { graph, per_subset } => commands::cheeger(graph, *per_subset, &tol)?,
        Command::SheafCheck { graph } => commands::sheaf_check(graph, &tol)?,
        Command::Truss { truss } => commands::truss(truss, &tol)?,
        Command::BuildExpander { base, frame, colors, out } => {
            let args = BuildArgs { frame, colors: colors.as_deref(), out: out.as_deref() };
            commands::build_expander_cmd(base, &args, &tol)?
        }
        Command::Search { r, n_max, frame, sample } => {
            let args =
                SearchArgs { r: *r, n_max: *n_max, frame, sample: *sample, seed: cli.seed, workers: cli.workers };
            let (records, summary) = commands::search_cmd(&args, &tol)?;
            eprintln!("{summary}");
            print_search(&records, cli.format);
            return Ok(true);
        }
        Command::VerifyPaper { only } => {
            let report = commands::verify_cmd(&VerifyConfig::new(cli.seed, cli.workers, tol), only);
            match cli.format {
                Format::Text => {
                    for c in &report.criteria {
                        emit(&format!("{}\n", c.line()));
                    }
                    let passed = report.criteria.iter().filter(|c| c.passed).count();
                    emit(&format!("{passed}/{} criteria passed\n", report.criteria.len()));
                }
                Format::Json => emit(&render(&serde_json::to_value(&report).expect("serializes"), Format::Json)),
                Format::Csv => {
                    let rows: Vec<_> = report
                        .criteria
                        .iter()
                        .map(|c| {
                            serde_json::json!({"id": c.id, "title": c.title, "passed": c.passed, "checked": c.checked,
                                "failure_count": c.failure_count, "first_failure": c.failures.first()})
                        })
                        .collect();
                    emit(&render(&serde_json::Value::Array(rows), Format::Csv));
                }
            }
            Outcome { value: serde_json::Value::Null, ok: report.passed }
        }
    };
    if !outcome.value.is_null() {
        emit(&render(&outcome.value, cli.format));
    }
    Ok(outcome.ok)
}

/// JSON lines for `--format json`, one record per candidate.
fn print_search(records: &[mwg::search::SearchRecord], format: Format) {
    match format {
        Format::Json => {
            for r in records {
                emit(&(serde_json::to_string(r).expect("record serializes") + "\n"));
            }
        }
        Format::Csv | Format::Text => {
            let value = serde_json::to_value(records).expect("records serialize");
            emit(&render(&value, format));
        }
    }
}

/// Writes to stdout; a closed pipe (`mwg ... | head`) ends the process quietly.
fn emit(text: &str) {
    if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
