//! `recon`: validate documents, reconstruct groupoids from their canonical
//! function families, run the Steinberg pipeline and the corpus suite.
//!
//! Reports go to `--out` (or stdout) as JSON; a one-line summary goes to
//! stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use recon_core::pipeline::{steinberg_pipeline, PipelineOptions};
use recon_core::report::{Budget, Status};
use recon_core::schema::{load_coefficients, load_document, load_groupoid, resolve_morphism, Document, ReconstructionReport};
use recon_core::suite::{run_suite, SuiteConfig};
use recon_core::{Error, FamilyError};

#[derive(Parser)]
#[command(name = "recon", version, about = "Groupoid reconstruction from semigroups of partial functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Respect gradings (reconstruct, pipeline) or add the graded corpus (suite).
    #[arg(long, global = true)]
    graded: bool,
    /// Work budget per check; unlimited when absent.
    #[arg(long, global = true, env = "RECON_BUDGET")]
    budget: Option<u64>,
    /// Seed for relabelling the suite corpus.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate groupoid, ring, semigroupoid, family and morphism documents.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Recover a groupoid from the ultrafilters of its canonical family.
    Reconstruct {
        groupoid: PathBuf,
        /// Built-in coefficient name (trivial, F2, F3, F4, Z/4, ...) or a path.
        #[arg(default_value = "trivial")]
        coefficients: String,
    },
    /// Recover a groupoid isomorphism from a diagonal isomorphism.
    Pipeline {
        a: PathBuf,
        b: PathBuf,
        phi: PathBuf,
        /// Accept condition (5) on one side only (unproven).
        #[arg(long)]
        relax_one_side: bool,
    },
    /// Run every theorem check over the standard corpus.
    Suite {
        /// Comma-separated coefficient names; defaults to the standard list.
        #[arg(long, value_delimiter = ',')]
        coefficients: Vec<String>,
    },
}

/// 1 for unreadable or malformed input, 2 for axiom violations.
fn input_exit(e: &Error) -> u8 {
    match e {
        Error::Schema(_) | Error::Json(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct ValidationEntry {
    path: String,
    kind: Option<String>,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct ValidationReport {
    schema: &'static str,
    tool_version: &'static str,
    files: Vec<ValidationEntry>,
}

fn validate(files: &[PathBuf], common: &Common) -> anyhow::Result<u8> {
    let mut code = 0;
    let mut entries = Vec::new();
    for path in files {
        let entry = match load_document(path) {
            Ok(doc) => {
                eprintln!("{}: ok ({})", path.display(), doc.kind());
                ValidationEntry { path: path.display().to_string(), kind: Some(doc.kind().into()), ok: true, error: None }
            }
            Err(e) => {
                let c = input_exit(&e);
                // a schema error outranks an axiom violation
                code = if code == 0 { c } else { code.min(c) };
                eprintln!("{}: {e}", path.display());
                ValidationEntry { path: path.display().to_string(), kind: None, ok: false, error: Some(e.to_string()) }
            }
        };
        entries.push(entry);
    }
    let report = ValidationReport { schema: "validation-report/v1", tool_version: recon_core::TOOL_VERSION, files: entries };
    emit(common.out.as_deref(), &report)?;
    Ok(code)
}

fn reconstruct(groupoid: &Path, coefficients: &str, common: &Common) -> anyhow::Result<u8> {
    let g = match load_groupoid(groupoid) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{}: {e}", groupoid.display());
            return Ok(input_exit(&e));
        }
    };
    let g = if common.graded {
        if g.grading().is_none() {
            eprintln!("{}: --graded given but the groupoid has no grading", groupoid.display());
            return Ok(1);
        }
        g
    } else {
        g.ungraded()
    };
    let c = match load_coefficients(coefficients) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{coefficients}: {e}");
            return Ok(input_exit(&e));
        }
    };
    let budget = Budget::from_option(common.budget);
    let report = match ReconstructionReport::build(g, c, &budget) {
        Ok(r) => r,
        Err(Error::Family(e @ FamilyError::Truncated(_))) => {
            eprintln!("{e}");
            return Ok(3);
        }
        Err(e) => {
            eprintln!("{e}");
            return Ok(input_exit(&e));
        }
    };
    emit(common.out.as_deref(), &report)?;
    eprintln!("{} arrows, {} ultrafilters: {}", report.bijection.len(), report.ultrafilters, report.status);
    Ok(match report.status {
        Status::Pass => 0,
        Status::NotFullyVerified => 3,
        Status::Fail | Status::HypothesisUnmet => 5,
    })
}

fn family(path: &Path) -> Result<recon_core::FnFamily, Error> {
    match load_document(path)? {
        Document::Family(f) => Ok(f),
        d => Err(Error::Schema(format!("{}: expected a family, found {}", path.display(), d.kind()))),
    }
}

fn pipeline(a: &Path, b: &Path, phi: &Path, relax_one_side: bool, common: &Common) -> anyhow::Result<u8> {
    let loaded = (|| -> Result<_, Error> {
        let (fa, fb) = (family(a)?, family(b)?);
        let m = match load_document(phi)? {
            Document::Morphism(m) => m,
            d => return Err(Error::Schema(format!("{}: expected a morphism, found {}", phi.display(), d.kind()))),
        };
        let map = resolve_morphism(&m, &fa, &fb)?;
        Ok((fa, fb, map))
    })();
    let (fa, fb, map) = match loaded {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return Ok(input_exit(&e));
        }
    };
    let opts = PipelineOptions { graded: common.graded, relax_one_side };
    let out = steinberg_pipeline(&fa, &fb, &map, opts, &Budget::from_option(common.budget));
    emit(common.out.as_deref(), &out.report)?;
    eprintln!("{}", out.report.verdict);
    Ok(out.report.exit_code() as u8)
}

fn suite(coefficients: Vec<String>, common: &Common) -> anyhow::Result<u8> {
    let mut config = SuiteConfig { seed: common.seed, budget: common.budget, graded: common.graded, ..SuiteConfig::default() };
    if !coefficients.is_empty() {
        config.coefficients = coefficients;
    }
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return Ok(input_exit(&e));
        }
    };
    emit(common.out.as_deref(), &report)?;
    let checks: usize = report.theorems.values().map(|t| t.pass + t.fail + t.hypothesis_unmet + t.not_fully_verified).sum();
    eprintln!(
        "{} instances, {checks} checks, {} failed, {} unverified, {}/{} mutations detected",
        report.instances,
        report.failures(),
        report.unverified(),
        report.mutation.detected,
        report.mutation.attempted
    );
    Ok(report.exit_code() as u8)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { files } => validate(&files, &cli.common),
        Command::Reconstruct { groupoid, coefficients } => reconstruct(&groupoid, &coefficients, &cli.common),
        Command::Pipeline { a, b, phi, relax_one_side } => pipeline(&a, &b, &phi, relax_one_side, &cli.common),
        Command::Suite { coefficients } => suite(coefficients, &cli.common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
