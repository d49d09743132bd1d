//! `qcgeo`: validation, geometry reports, representation tables and highest
//! weight vector checks from the command line.
//!
//! Exit codes: 0 computed, 1 validation or identity failure, 2 usage or I/O.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qcgeo::model::CoframeModel;
use qcgeo::{corpus, hwv, repdims, report};
use rayon::prelude::*;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qcgeo", version, about = "Exact computations for quaternionic contact structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model and check the Jacobi identity.
    Validate { file: String },
    /// Run the full pipeline on a model.
    Report {
        file: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Dimension of `V_λ ⊗ S^h H` for `Sp(n)`.
    Repdim {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        weights: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        h: usize,
    },
    /// Check the dimension identity catalog for `1 ≤ n ≤ max_n`.
    Repcheck {
        #[arg(long = "max-n")]
        max_n: usize,
        /// Also compare module dimensions with computed ranks (n ≤ 2).
        #[arg(long)]
        ledger: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the highest weight vector identities at rank `n`.
    Hwv {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
    },
    /// Report on every `*.json` model in a directory.
    Batch {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the bundled models as JSON.
    Corpus {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure(u8, anyhow::Error);

fn io<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure(2, e.into())
}

fn data_dir() -> PathBuf {
    std::env::var_os("QCGEO_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

/// Reads `file` as a path, then relative to the data directory, then as a
/// bundled model name.
fn load_text(file: &str) -> Result<String, Failure> {
    let direct = Path::new(file);
    if direct.exists() {
        return fs::read_to_string(direct).with_context(|| format!("reading {file}")).map_err(io);
    }
    let dir = data_dir();
    for cand in [dir.join(file), dir.join(format!("{file}.json"))] {
        if cand.exists() {
            return fs::read_to_string(&cand).with_context(|| format!("reading {}", cand.display())).map_err(io);
        }
    }
    match corpus::by_name(file) {
        Some(m) => Ok(m.to_json()),
        None => Err(Failure(2, anyhow!("no such file or bundled model: {file}"))),
    }
}

fn parse_model(file: &str) -> Result<CoframeModel, Failure> {
    let text = load_text(file)?;
    CoframeModel::parse(&text).map_err(|e| Failure(1, anyhow!("{file}: {e}")))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(io),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn validate(file: &str) -> Result<u8, Failure> {
    let text = load_text(file)?;
    let (ok, diag) = match CoframeModel::parse(&text) {
        Err(e) => (false, serde_json::json!({ "valid": false, "error": e.to_string() })),
        Ok(m) => match m.validate_jacobi() {
            Ok(()) => (true, serde_json::json!({ "valid": true, "name": m.name(), "n": m.n(), "dim": m.dim() })),
            Err(fails) => {
                let items: Vec<_> = fails
                    .iter()
                    .map(|f| serde_json::json!({ "index": f.index + 1, "residual": f.residual.to_string() }))
                    .collect();
                (false, serde_json::json!({ "valid": false, "failing_index": fails[0].index + 1, "failures": items }))
            }
        },
    };
    println!("{}", serde_json::to_string_pretty(&diag).expect("json"));
    Ok(if ok { 0 } else { 1 })
}

fn report_text(model: &CoframeModel, format: Format) -> Result<String, Failure> {
    let r = report::geometry_report(model).map_err(|e| Failure(1, anyhow!("{}: {e}", model.name())))?;
    Ok(match format {
        Format::Json => r.to_json(),
        Format::Text => r.to_text(),
    })
}

fn repdim(n: usize, weights: &[usize], h: usize) -> Result<u8, Failure> {
    let w = repdims::HighestWeight::new(n, weights).map_err(|e| Failure(2, e.into()))?.with_h(h);
    println!("{}", repdims::weyl_dim(&w));
    Ok(0)
}

fn repcheck(max_n: usize, ledger: bool, format: Format) -> Result<u8, Failure> {
    let checks = repdims::check_catalog(max_n);
    let rows = if ledger { (1..=max_n.min(2)).flat_map(repdims::module_ledger).collect() } else { Vec::new() };
    let ok = checks.iter().all(|c| c.equal) && rows.iter().all(|r| r.agrees());
    match format {
        Format::Json => {
            let v = serde_json::json!({ "identities": checks, "ledger": rows, "pass": ok });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => {
            for c in &checks {
                let l = c.l.map(|l| format!(" l={l}")).unwrap_or_default();
                let rhs: Vec<&str> = c.rhs_dims.iter().map(|(_, d)| d.as_str()).collect();
                let mark = if c.equal { "pass" } else { "FAIL" };
                println!("{mark}  {:<22} n={}{l:<5} {} = {}", c.id, c.n, c.lhs_dim, rhs.join(" + "));
            }
            for r in &rows {
                let mark = if r.agrees() { "pass" } else { "FAIL" };
                println!("{mark}  {:<16} {:<40} rep {:>5}  rank {:>5}", r.name, r.decomposition, r.rep_dim, r.rank);
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn run_hwv(n: usize) -> Result<u8, Failure> {
    if n == 1 {
        println!("note: at n = 1, alpha3 = alpha1 and beta2 = beta1");
    }
    let mut ok = true;
    for (id, pass, detail) in hwv::run_catalog(n) {
        ok &= pass;
        let mark = if pass { "pass" } else { "FAIL" };
        if detail.is_empty() {
            println!("{mark}  {id}");
        } else {
            println!("{mark}  {id}  ({detail})");
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn batch(dir: &Path, out: &Path) -> Result<u8, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display())).map_err(io)?;
    let results: Vec<(PathBuf, Result<(), String>)> = files
        .par_iter()
        .map(|p| {
            let r = fs::read_to_string(p)
                .map_err(|e| e.to_string())
                .and_then(|t| CoframeModel::parse(&t).map_err(|e| e.to_string()))
                .and_then(|m| report::geometry_report(&m).map_err(|e| e.to_string()))
                .and_then(|r| {
                    let stem = p.file_stem().expect("json file").to_string_lossy();
                    fs::write(out.join(format!("{stem}.report.json")), r.to_json()).map_err(|e| e.to_string())
                });
            (p.clone(), r)
        })
        .collect();
    let mut ok = true;
    for (p, r) in &results {
        match r {
            Ok(()) => println!("ok    {}", p.display()),
            Err(e) => {
                ok = false;
                println!("error {}: {e}", p.display());
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn write_corpus(out: Option<PathBuf>) -> Result<u8, Failure> {
    let dir = out.unwrap_or_else(data_dir);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display())).map_err(io)?;
    for m in corpus::bundled() {
        let p = dir.join(format!("{}.json", m.name()));
        fs::write(&p, m.to_json() + "\n").with_context(|| format!("writing {}", p.display())).map_err(io)?;
        println!("{}", p.display());
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Report { file, out, format } => {
            let model = parse_model(&file)?;
            let text = report_text(&model, format)?;
            write_out(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Repdim { n, weights, h } => repdim(n, &weights, h),
        Command::Repcheck { max_n, ledger, format } => repcheck(max_n, ledger, format),
        Command::Hwv { n } => run_hwv(n as usize),
        Command::Batch { dir, out } => batch(&dir, &out),
        Command::Corpus { out } => write_corpus(out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
