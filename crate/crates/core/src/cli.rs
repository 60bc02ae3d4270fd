//! Command-line front end. Reports go to `--output` (or stdout), the human
//! summary to stderr.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 audit FAIL or
//! regression breach.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::audit::{audit_corpus, Auditor, ChainReport, Theorem};
use crate::compare::PowerExpr;
use crate::energy::energy_report_with;
use crate::error::{Error, Result};
use crate::exec::{with_workers, Exec};
use crate::family::{growth_scan, FamilyKind};
use crate::fixtures::{chain_entries, Fixtures};
use crate::incidence::{build_instance, count_incidences_with, lemma_st1_ratio, lemma_st2_ratio};
use crate::search::{extremal_search, SearchConfig};
use crate::set::{difference_set_size, product_set_size, sumset_size, ConvexFn, NumberSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

const DEFAULT_PRECISION: usize = 30;

#[derive(Debug, Parser)]
#[command(name = "convex-growth", version, about = "Exact sumset, energy and incidence workbench")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random choice in the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Significant digits in decimal output [default: 30].
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sizes of A+A, A-A, A*A and the energies of A.
    Stats {
        #[arg(long)]
        input: PathBuf,
    },
    /// Replay a growth chain on one or more set files.
    Audit(AuditArgs),
    /// Count incidences between (A+B)x(f(A)+C) and the translates of f.
    Incidence(IncidenceArgs),
    /// Growth table of a set family.
    Scan(ScanArgs),
    /// Annealing search for sets with a small growth objective.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Set files; each is audited independently.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value = "T1")]
    pub theorem: Theorem,
    #[arg(long = "fn", default_value = "square")]
    pub f: ConvexFn,
    /// Shift set C (defaults to f(A)).
    #[arg(long)]
    pub c: Option<PathBuf>,
    /// Ratio fixture file; created if missing, checked otherwise.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Fixture label (defaults to the input file stem).
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Args)]
pub struct IncidenceArgs {
    #[arg(long = "fn", default_value = "square")]
    pub f: ConvexFn,
    /// Set A.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub c: PathBuf,
    /// Richness thresholds.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub tau: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub kind: FamilyKind,
    #[arg(long = "fn", default_value = "square")]
    pub f: ConvexFn,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// JSON search configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Also write the best set as a set file.
    #[arg(long)]
    pub best: Option<PathBuf>,
}

/// Runs the CLI with the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, err) {
        Ok((report, code)) => {
            if let Err(e) = emit(&cli, &report, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(cli: &Cli, report: &str, out: &mut dyn Write) -> Result<()> {
    match &cli.output {
        Some(p) => std::fs::write(p, report)?,
        None => out.write_all(report.as_bytes())?,
    }
    Ok(())
}

/// Returns the machine-readable report and the exit code.
fn execute(cli: &Cli, err: &mut dyn Write) -> Result<(String, i32)> {
    let digits = cli.precision.unwrap_or(DEFAULT_PRECISION).max(1);
    let seed = cli.seed.unwrap_or(0);
    let (report, code, summary) = with_workers(cli.workers, |exec| match &cli.command {
        Command::Stats { input } => stats(input, seed, digits, exec),
        Command::Audit(a) => audit(a, seed, digits, exec),
        Command::Incidence(a) => incidence(a, seed, digits, exec),
        Command::Scan(a) => scan(a, seed, digits, exec),
        Command::Search(a) => search(a, cli.seed, cli.precision, exec),
    })?;
    let _ = err.write_all(summary.as_bytes());
    Ok((report, code))
}

fn read_set(path: &Path) -> Result<NumberSet> {
    NumberSet::read_file(path).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{message} (in {})", path.display()),
        },
        e => e,
    })
}

fn json_line<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string(v)?;
    s.push('\n');
    Ok(s)
}

fn stats(input: &Path, seed: u64, digits: usize, exec: Exec) -> Result<(String, i32, String)> {
    let a = read_set(input)?;
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum = sumset_size(&a, &a, exec)?;
    let diff = difference_set_size(&a, &a, exec)?;
    let prod = if a.all_positive() { Some(product_set_size(&a, &a, exec)?) } else { None };
    let energy = energy_report_with(&a, exec)?;
    let e15 = PowerExpr::radical(energy.e15.clone()).decimal(digits);
    let report = json!({
        "seed": seed,
        "precision": digits,
        "size": a.len(),
        "sumset": sum,
        "diffset": diff,
        "prodset": prod,
        "prodsetNote": if prod.is_none() { Some("set has nonpositive elements") } else { None },
        "energy": energy,
        "E15Decimal": e15,
    });
    let summary = format!(
        "|A|={} |A+A|={} |A-A|={} |A*A|={} E={} E3={} E1.5={}\n",
        a.len(),
        sum,
        diff,
        prod.map_or("n/a (nonpositive elements)".to_string(), |p| p.to_string()),
        energy.e,
        energy.e3,
        e15
    );
    Ok((json_line(&report)?, EXIT_OK, summary))
}

#[derive(Serialize)]
struct AuditLine<'a> {
    input: &'a str,
    seed: u64,
    precision: usize,
    #[serde(flatten)]
    report: &'a ChainReport,
}

fn audit(args: &AuditArgs, seed: u64, digits: usize, exec: Exec) -> Result<(String, i32, String)> {
    let auditor = Auditor { digits, exec };
    let mut inputs = Vec::with_capacity(args.input.len());
    for p in &args.input {
        inputs.push((p.display().to_string(), read_set(p)?));
    }
    let results: Vec<(String, Result<ChainReport>)> = match &args.c {
        None => audit_corpus(&auditor, args.theorem, args.f, &inputs),
        Some(cp) => {
            let c = read_set(cp)?;
            let mut v: Vec<_> = inputs
                .iter()
                .map(|(id, a)| (id.clone(), auditor.theorem(args.theorem, args.f, a, Some(&c))))
                .collect();
            v.sort_by(|x, y| x.0.cmp(&y.0));
            v
        }
    };
    let mut report = String::new();
    let mut summary = String::new();
    let mut code = EXIT_OK;
    let mut observed = Vec::new();
    for (id, r) in &results {
        let r = match r {
            Ok(r) => r,
            Err(e) => return Err(Error::InvalidParameter(format!("{id}: {e}"))),
        };
        report.push_str(&json_line(&AuditLine {
            input: id,
            seed,
            precision: digits,
            report: r,
        })?);
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        summary.push_str(&format!(
            "{id}: {} {verdict} final ratio {}\n",
            r.theorem, r.final_exponent_ratio
        ));
        for s in r.steps.iter().filter(|s| !s.passed()) {
            summary.push_str(&format!("  FAIL {}: {} > {}\n", s.name, s.lhs_decimal, s.rhs_decimal));
        }
        if !r.passed {
            code = EXIT_FAIL;
        }
        let label = match &args.label {
            Some(l) if inputs.len() == 1 => l.clone(),
            Some(l) => format!("{l}:{id}"),
            None => Path::new(id).file_stem().map_or(id.clone(), |s| s.to_string_lossy().into_owned()),
        };
        observed.extend(chain_entries(&label, r));
    }
    if let Some(fp) = &args.fixtures {
        match Fixtures::load(fp)? {
            None => {
                let mut f = Fixtures::default();
                f.insert(observed);
                f.save(fp)?;
                summary.push_str(&format!("fixtures written to {}\n", fp.display()));
            }
            Some(f) => {
                let breaches = f.exceeded(&observed);
                for b in &breaches {
                    summary.push_str(&format!("REGRESSION {}: stored {} observed {}\n", b.key, b.stored, b.observed));
                }
                if !breaches.is_empty() {
                    code = EXIT_FAIL;
                }
            }
        }
    }
    Ok((report, code, summary))
}

fn incidence(args: &IncidenceArgs, seed: u64, digits: usize, exec: Exec) -> Result<(String, i32, String)> {
    let (a, b, c) = (read_set(&args.input)?, read_set(&args.b)?, read_set(&args.c)?);
    let (p, l) = build_instance(args.f, &a, &b, &c)?;
    let rep = count_incidences_with(&p, &l, &args.tau, exec, digits)?;
    let mut levels = Vec::new();
    for &t in &args.tau {
        levels.push(lemma_st1_ratio(args.f, &a, &b, &c, t)?);
        levels.push(lemma_st2_ratio(args.f, &a, &b, &c, t)?);
    }
    let report = json!({
        "seed": seed,
        "precision": digits,
        "fn": args.f,
        "incidence": rep,
        "levelSets": levels,
    });
    let summary = format!(
        "incidences={} points={} curves={} bound={} holds={} maxCurvesThroughPoint={}\n",
        rep.incidences, rep.points, rep.curves, rep.st_bound_decimal, rep.st_holds, rep.max_curves_through_point
    );
    let code = if rep.st_holds { EXIT_OK } else { EXIT_FAIL };
    Ok((json_line(&report)?, code, summary))
}

fn scan(args: &ScanArgs, seed: u64, digits: usize, exec: Exec) -> Result<(String, i32, String)> {
    let t = growth_scan(&args.kind, args.f, &args.sizes, seed, digits, exec)?;
    let mut summary = String::new();
    for (name, s) in crate::family::SCAN_COLUMNS.iter().zip(&t.fitted_slopes) {
        if let Some(s) = s {
            summary.push_str(&format!("{name} slope {s}\n"));
        }
    }
    Ok((t.to_tsv(), EXIT_OK, summary))
}

fn search(args: &SearchArgs, seed: Option<u64>, digits: Option<usize>, exec: Exec) -> Result<(String, i32, String)> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg: SearchConfig = serde_json::from_str(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(d) = digits {
        cfg.precision = d.max(1);
    }
    let res = extremal_search(&cfg, exec)?;
    let mut report = res.trace_jsonl(&cfg);
    report.push_str(&json_line(&json!({
        "result": {
            "best": res.best,
            "objective": res.objective,
            "bestRestart": res.best_restart,
        }
    }))?);
    if let Some(p) = &args.best {
        std::fs::write(p, res.best.to_text())?;
    }
    let summary = format!("{} best {} at {}\n", cfg.objective, res.objective, res.best);
    Ok((report, EXIT_OK, summary))
}
