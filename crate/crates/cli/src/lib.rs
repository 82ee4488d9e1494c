//! Command-line front end for the `monothetic` crate.
//!
//! Every subcommand prints JSON on stdout; rationals are `"p/q"` strings and
//! generator powers that do not fit in 64 bits are decimal strings.
//!
//! Exit codes: 0 success, 1 suite violation or unmet hypothesis, 2 usage or
//! input error, 3 table too shallow (the required depth is printed).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use monothetic::verification::verify_extension;
use monothetic::{
    build_anchor_table, counterexample_scan, density_witness, evaluate, extend_family, validate_norm_spec,
    verify_density, verify_norm_axioms, verify_truncation, AnchorTable, Error as CoreError, ExtElement,
    GroupDescriptor, NormSpec, Rational, SuiteReport, TableDocument,
};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

pub const DEFAULT_DEPTH: usize = 50;
pub const DEFAULT_EPSILON: &str = "1/1024";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON for {what}: {source}")]
    Json { what: &'static str, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::ExtendTable { .. }) => 3,
            CliError::Core(CoreError::HypothesisNotMet(_)) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mono", version, about = "Monothetic extensions of bounded group norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Extension,
    Axioms,
    Density,
    Truncation,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an anchor table.
    Build {
        /// Group descriptor, e.g. '{"free_rank":1}'.
        #[arg(long)]
        group: String,
        /// Norm spec, e.g. '{"type":"capped_l1","weights":["1/4"]}'.
        #[arg(long)]
        norm: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Write the table here; without it the table is printed.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the extended norm on one element.
    Eval {
        #[arg(long)]
        table: PathBuf,
        /// Element, e.g. '{"h":[0],"k":2}' ("t" holds torsion coordinates).
        #[arg(long)]
        element: String,
        #[arg(long, default_value = DEFAULT_EPSILON)]
        epsilon: String,
    },
    /// Certify that c^{k_n} approximates h_m within 1/j.
    Density {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        j: u64,
        #[arg(long, default_value = DEFAULT_EPSILON)]
        epsilon: String,
    },
    /// Run verification suites.
    Verify {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 500)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = DEFAULT_EPSILON)]
        epsilon: String,
        #[arg(long, default_value_t = 5)]
        max_m: u64,
        #[arg(long, default_value_t = 5)]
        max_j: u64,
    },
    /// Infeasibility certificates for the unbounded l1 norm on Z^2.
    Counterexample {
        #[arg(long, default_value_t = 50)]
        grid: u64,
        /// Write certificates as JSON lines here instead of stdout.
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Extend several norms with one shared schedule.
    Family {
        #[arg(long)]
        group: String,
        /// JSON array of norm specs.
        #[arg(long)]
        norms: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Directory for member-<i>.json tables.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &'static str, s: &str) -> CliResult<T> {
    serde_json::from_str(s).map_err(|source| CliError::Json { what, source })
}

fn parse_rational(s: &str) -> CliResult<Rational> {
    Ok(s.parse()?)
}

fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

pub fn save_table(table: &AnchorTable, path: &Path) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&table.to_document()).expect("table serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

/// Loads a table and re-derives it from the recurrence, rejecting tampered files.
pub fn load_table(path: &Path) -> CliResult<AnchorTable> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let doc: TableDocument = parse_json("table", &text)?;
    Ok(AnchorTable::from_document(&doc)?)
}

/// Output lines and whether every check passed.
struct Outcome {
    lines: Vec<String>,
    passed: bool,
}

impl Outcome {
    fn ok(line: String) -> Self {
        Outcome { lines: vec![line], passed: true }
    }
}

fn suites(
    table: &AnchorTable,
    suite: Suite,
    samples: u64,
    seed: u64,
    epsilon: &Rational,
    max_m: u64,
    max_j: u64,
) -> CliResult<Vec<SuiteReport>> {
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut reports = Vec::new();
    if wants(Suite::Extension) {
        reports.push(verify_extension(table, samples, seed)?);
    }
    if wants(Suite::Axioms) {
        reports.push(verify_norm_axioms(table, samples, seed, epsilon)?);
    }
    if wants(Suite::Density) {
        reports.push(verify_density(table, max_m, max_j, epsilon)?);
    }
    if wants(Suite::Truncation) {
        reports.push(verify_truncation(table, samples, seed)?);
    }
    Ok(reports)
}

fn execute(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Build { group, norm, depth, out } => {
            let descriptor: GroupDescriptor = parse_json("group", &group)?;
            let spec: NormSpec = parse_json("norm", &norm)?;
            let table = build_anchor_table(&descriptor, &spec, depth)?;
            match out {
                Some(path) => {
                    save_table(&table, &path)?;
                    Ok(Outcome::ok(to_line(&json!({
                        "version": 1,
                        "N": depth,
                        "k_N": table.power(depth).to_string(),
                        "out": path.display().to_string(),
                    }))))
                }
                None => Ok(Outcome::ok(to_line(&table.to_document()))),
            }
        }
        Command::Eval { table, element, epsilon } => {
            let table = load_table(&table)?;
            let x: ExtElement = parse_json("element", &element)?;
            let r = evaluate(&table, &x, &parse_rational(&epsilon)?)?;
            Ok(Outcome::ok(to_line(&r)))
        }
        Command::Density { table, m, j, epsilon } => {
            let table = load_table(&table)?;
            let w = density_witness(&table, m, j, &parse_rational(&epsilon)?)?;
            let passed = w.holds();
            Ok(Outcome { lines: vec![to_line(&w)], passed })
        }
        Command::Verify { table, suite, samples, seed, epsilon, max_m, max_j } => {
            if samples < 1 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let table = load_table(&table)?;
            let reports = suites(&table, suite, samples, seed, &parse_rational(&epsilon)?, max_m, max_j)?;
            let passed = reports.iter().all(SuiteReport::passed);
            Ok(Outcome {
                lines: vec![to_line(&json!({ "version": 1, "passed": passed, "reports": reports }))],
                passed,
            })
        }
        Command::Counterexample { grid, certificates } => {
            if grid < 1 {
                return Err(CliError::Usage("--grid must be at least 1".into()));
            }
            let scan = counterexample_scan(grid)?;
            let cert_lines: Vec<String> = scan.certificates.iter().map(to_line).collect();
            let mut lines = Vec::new();
            match certificates {
                Some(path) => {
                    let mut text = cert_lines.join("\n");
                    text.push('\n');
                    fs::write(&path, text).map_err(|source| CliError::Io { path, source })?;
                }
                None => lines = cert_lines,
            }
            let passed = scan.summary.all_contradictions && scan.summary.identities_hold;
            lines.push(to_line(&json!({ "version": 1, "summary": scan.summary })));
            Ok(Outcome { lines, passed })
        }
        Command::Family { group, norms, depth, out_dir } => {
            let descriptor: GroupDescriptor = parse_json("group", &group)?;
            let specs: Vec<NormSpec> = parse_json("norms", &norms)?;
            if specs.is_empty() {
                return Err(CliError::Usage("--norms must list at least one norm".into()));
            }
            let tables = extend_family(&descriptor, &specs, depth)?;
            let shared = tables.iter().all(|t| t.schedule_bytes() == tables[0].schedule_bytes());
            let mut members = Vec::new();
            for (i, t) in tables.iter().enumerate() {
                let report = validate_norm_spec(t.spec(), &descriptor, 200, DEFAULT_SEED)?;
                let file = match &out_dir {
                    Some(dir) => {
                        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
                        let path = dir.join(format!("member-{i}.json"));
                        save_table(t, &path)?;
                        Some(path.display().to_string())
                    }
                    None => None,
                };
                members.push(json!({
                    "spec": t.spec(),
                    "pseudonorm": t.spec().is_pseudonorm(),
                    "pseudonorm_witness": report.pseudonorm,
                    "axiom_violations": report.violations.len(),
                    "file": file,
                }));
            }
            let passed = shared && members.iter().all(|m| m["axiom_violations"] == 0);
            Ok(Outcome {
                lines: vec![to_line(&json!({
                    "version": 1,
                    "N": depth,
                    "shared_schedule": shared,
                    "schedule": tables[0].schedule(),
                    "members": members,
                }))],
                passed,
            })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            for line in &outcome.lines {
                let _ = writeln!(out, "{line}");
            }
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            if let CliError::Core(CoreError::ExtendTable { required_depth, depth }) = &e {
                let _ = writeln!(
                    out,
                    "{}",
                    to_line(&json!({ "error": "extend table", "required_depth": required_depth, "depth": depth }))
                );
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
