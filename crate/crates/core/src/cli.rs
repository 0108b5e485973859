//! Command-line front end: argument parsing, dispatch, and the record stream.
//!
//! Every input produces one [`RunRecord`]. With `--format records` each record is
//! written as one JSON line; the default table format is for people.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acceptance::{self, CriterionReport, Goldens};
use crate::corpus::{expand_paths, load_job, parse_job, Job, BUILTIN};
use crate::error::{Error, Result};
use crate::euler::{chi2, jsj_sum, polytope_bridge, seifert_chi2, ChiOptions, EulerResult, SeifertBase};
use crate::reduction::Limits;

pub const SCHEMA_VERSION: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status of a self-test run with failing criteria.
pub const SELFTEST_FAILURE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "l2euler", version, about = "Twisted L2-Euler characteristics and Thurston norm bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: Config,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Recompute for every valid deleted column (and row) and require agreement.
    #[arg(long, global = true)]
    pub all_columns: bool,
    /// Also check chi(k phi) = k chi(phi) for k = 2..=K.
    #[arg(long, global = true, value_name = "K")]
    pub scaling_sweep: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Abort a reduction once coefficient storage exceeds N bytes.
    #[arg(long, global = true, value_name = "N")]
    pub limit_bytes: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// L2-Euler characteristic and Thurston norm lower bound per presentation.
    Chi2(Inputs),
    /// The degree invariant delta = -chi.
    Delta(Inputs),
    /// Newton polytope of the determinant and the degree bridge (abelian quotients).
    Polytope(Inputs),
    /// Closed formula for a Seifert fibred piece.
    Seifert {
        #[arg(long, default_value_t = 0)]
        genus: u64,
        #[arg(long, default_value_t = 0)]
        boundary: u64,
        /// Cone point orders, comma separated.
        #[arg(long, value_delimiter = ',')]
        cone: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        fiber_index: u64,
    },
    /// Sum over the pieces of a decomposition, one presentation per piece.
    JsjSum(Inputs),
    /// Compares the bounds of M and N for an epimorphism asserted by the user.
    Compare { m: PathBuf, n: PathBuf },
    /// Runs every acceptance criterion.
    Selftest {
        /// JSON file overriding the golden values.
        #[arg(long)]
        goldens: Option<PathBuf>,
        /// Criterion ids to run, comma separated; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Inputs {
    /// Presentation files or directories of them.
    pub paths: Vec<PathBuf>,
    /// Include the built-in corpus.
    #[arg(long)]
    pub builtin: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord { kind: e.kind().into(), message: e.to_string(), exit_code: e.exit_code() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub k: u64,
    pub chi2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Output {
    Chi2 {
        result: EulerResult,
        expected_norm: Option<i64>,
        sweep: Vec<SweepEntry>,
    },
    Delta {
        delta: i64,
        result: EulerResult,
    },
    Polytope {
        result: EulerResult,
        determinant: String,
        vertices: Vec<Vec<i64>>,
        phi: Vec<i64>,
        half_degree: String,
        d_eval: String,
        agrees: bool,
    },
    Seifert {
        orbifold_euler_characteristic: String,
        chi2: String,
    },
    JsjSum {
        pieces: Vec<String>,
        result: EulerResult,
    },
    Compare {
        bound_m: i64,
        bound_n: i64,
        holds: bool,
        note: Option<String>,
    },
    Selftest {
        passed: usize,
        failed: usize,
        criteria: Vec<CriterionReport>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ok(Output),
    Error(ErrorRecord),
}

/// One line of structured output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub input: String,
    pub command: String,
    pub outcome: Outcome,
    pub wall_time_us: u64,
    pub version: String,
}

impl RunRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Exit status this record asks for: 0 unless it carries an error or a failed self-test.
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            Outcome::Error(e) => e.exit_code,
            Outcome::Ok(Output::Selftest { failed, .. }) if *failed > 0 => SELFTEST_FAILURE,
            Outcome::Ok(_) => 0,
        }
    }
}

impl Config {
    fn options(&self) -> ChiOptions {
        let mut opts = ChiOptions { all_choices: self.all_columns, ..ChiOptions::default() };
        if let Some(n) = self.limit_bytes {
            opts.limits = Limits { max_bytes: n };
        }
        opts
    }
}

fn record(input: &str, command: &str, start: Instant, res: Result<Output>) -> RunRecord {
    RunRecord {
        schema: SCHEMA_VERSION,
        input: input.to_string(),
        command: command.to_string(),
        outcome: match res {
            Ok(o) => Outcome::Ok(o),
            Err(e) => Outcome::Error((&e).into()),
        },
        wall_time_us: start.elapsed().as_micros() as u64,
        version: VERSION.to_string(),
    }
}

fn run_chi(job: &Job, config: &Config) -> Result<EulerResult> {
    chi2(&job.presentation, job.dual(), &job.quotient, &job.phi, &config.options())
}

fn sweep(job: &Job, config: &Config, base: &EulerResult) -> Result<Vec<SweepEntry>> {
    let mut out = Vec::new();
    let opts = ChiOptions { all_choices: false, ..config.options() };
    for k in 2..=config.scaling_sweep.unwrap_or(1) {
        let r = chi2(&job.presentation, job.dual(), &job.quotient, &job.phi.scaled(k as i64), &opts)?;
        if r.chi2 != k as i64 * base.chi2 {
            return Err(Error::Mismatch(format!(
                "scaling sweep: chi({k} phi) = {}, expected {k} * {} = {}",
                r.chi2,
                base.chi2,
                k as i64 * base.chi2
            )));
        }
        out.push(SweepEntry { k, chi2: r.chi2 });
    }
    Ok(out)
}

fn per_job(job: &Job, name: &str, config: &Config) -> Result<Output> {
    match name {
        "chi2" => {
            let result = run_chi(job, config)?;
            let sweep = sweep(job, config, &result)?;
            Ok(Output::Chi2 { result, expected_norm: job.expected_norm, sweep })
        }
        "delta" => {
            let result = run_chi(job, config)?;
            Ok(Output::Delta { delta: -result.chi2, result })
        }
        _ => {
            let b = polytope_bridge(&job.presentation, job.dual(), &job.quotient, &job.phi, &config.options())?;
            Ok(Output::Polytope {
                agrees: b.agrees(),
                determinant: b.det.to_string(),
                vertices: b.polytope.vertices().to_vec(),
                phi: b.phi,
                half_degree: b.half_degree.to_string(),
                d_eval: b.d_eval.to_string(),
                result: b.result,
            })
        }
    }
}

/// The input list as `(display name, job or load error)`, directories sorted by file name.
fn gather(inputs: &Inputs) -> Result<Vec<(String, Result<Job>)>> {
    let mut out = Vec::new();
    if inputs.builtin {
        for (stem, text) in BUILTIN {
            out.push((format!("builtin:{stem}"), parse_job(text, stem)));
        }
    }
    for path in expand_paths(&inputs.paths)? {
        out.push((path.display().to_string(), load_job(&path)));
    }
    if out.is_empty() {
        return Err(Error::Input("no inputs given".into()));
    }
    Ok(out)
}

fn load_goldens(path: &Option<PathBuf>) -> Result<Goldens> {
    let Some(p) = path else { return Ok(Goldens::default()) };
    let text = std::fs::read_to_string(p).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
}

fn compare(m: &Job, n: &Job, config: &Config) -> Result<Output> {
    if m.quotient.kind_name() != n.quotient.kind_name() {
        return Err(Error::Input(format!(
            "quotient kinds differ: {} for M, {} for N",
            m.quotient.kind_name(),
            n.quotient.kind_name()
        )));
    }
    let bm = run_chi(m, config)?.thurston_lower_bound;
    let bn = run_chi(n, config)?.thurston_lower_bound;
    let holds = bm >= bn;
    let note = if !holds {
        Some("VIOLATION: bound(M) < bound(N); the asserted epimorphism hypotheses or the computation are wrong".into())
    } else if bn < 0 {
        Some("bound(N) is negative, as for a solid torus where chi = +k; the comparison says nothing about the norm of N".into())
    } else {
        None
    };
    Ok(Output::Compare { bound_m: bm, bound_n: bn, holds, note })
}

/// Executes a parsed command and returns its records in input order.
pub fn execute(cli: &Cli) -> Result<Vec<RunRecord>> {
    let config = &cli.config;
    let records = match &cli.command {
        Command::Chi2(inputs) | Command::Delta(inputs) | Command::Polytope(inputs) => {
            let name = match &cli.command {
                Command::Chi2(_) => "chi2",
                Command::Delta(_) => "delta",
                _ => "polytope",
            };
            gather(inputs)?
                .into_iter()
                .map(|(input, job)| {
                    let start = Instant::now();
                    let res = job.and_then(|j| per_job(&j, name, config));
                    record(&input, name, start, res)
                })
                .collect()
        }
        Command::JsjSum(inputs) => {
            let start = Instant::now();
            let items = gather(inputs)?;
            let pieces: Vec<String> = items.iter().map(|(n, _)| n.clone()).collect();
            let res = items
                .into_iter()
                .map(|(_, job)| job.and_then(|j| run_chi(&j, config)))
                .collect::<Result<Vec<_>>>()
                .and_then(|rs| jsj_sum(&rs))
                .map(|result| Output::JsjSum { pieces: pieces.clone(), result });
            vec![record(&pieces.join("+"), "jsj-sum", start, res)]
        }
        Command::Seifert { genus, boundary, cone, fiber_index } => {
            let start = Instant::now();
            let base = SeifertBase { genus: *genus, boundary: *boundary, cone_orders: cone.clone() };
            let res = base.orbifold_euler_characteristic().and_then(|orb| {
                Ok(Output::Seifert {
                    orbifold_euler_characteristic: orb.to_string(),
                    chi2: seifert_chi2(&base, *fiber_index)?.to_string(),
                })
            });
            let cones: Vec<String> = cone.iter().map(|c| c.to_string()).collect();
            let input = format!("seifert(g={genus}, b={boundary}, cones=[{}], index={fiber_index})", cones.join(","));
            vec![record(&input, "seifert", start, res)]
        }
        Command::Compare { m, n } => {
            let start = Instant::now();
            let res = load_job(m).and_then(|jm| compare(&jm, &load_job(n)?, config));
            vec![record(&format!("{} vs {}", m.display(), n.display()), "compare", start, res)]
        }
        Command::Selftest { goldens, only } => {
            let start = Instant::now();
            let res = load_goldens(goldens).and_then(|g| {
                let criteria: Vec<CriterionReport> = if only.is_empty() {
                    acceptance::run_all(&g)
                } else {
                    only.iter()
                        .map(|&id| {
                            acceptance::run_one(id, &g)
                                .ok_or_else(|| Error::Input(format!("no acceptance criterion {id}")))
                        })
                        .collect::<Result<_>>()?
                };
                let passed = criteria.iter().filter(|r| r.passed).count();
                Ok(Output::Selftest { passed, failed: criteria.len() - passed, criteria })
            });
            vec![record("selftest", "selftest", start, res)]
        }
    };
    Ok(records)
}

fn table_row(r: &RunRecord) -> String {
    let body = match &r.outcome {
        Outcome::Error(e) => format!("ERROR ({}) {}", e.kind, e.message),
        Outcome::Ok(o) => match o {
            Output::Chi2 { result, expected_norm, sweep } => {
                let mut s = format!(
                    "chi2 = {:>4}  bound = {:>4}  coker = {:>3}  k = {}",
                    result.chi2, result.thurston_lower_bound, result.diagnostics.coker_dim, result.diagnostics.scaling_factor
                );
                if let Some(x) = expected_norm {
                    s += &format!("  norm = {x}");
                }
                if !result.diagnostics.verified_choices.is_empty() {
                    s += &format!("  choices = {}", result.diagnostics.verified_choices.len());
                }
                if !sweep.is_empty() {
                    s += &format!("  sweep ok to k = {}", sweep.len() + 1);
                }
                s
            }
            Output::Delta { delta, .. } => format!("delta = {delta}"),
            Output::Polytope { determinant, vertices, half_degree, d_eval, agrees, .. } => format!(
                "det = {determinant}  vertices = {vertices:?}  deg/2 = {half_degree}  d_eval = {d_eval}  {}",
                if *agrees { "agree" } else { "DISAGREE" }
            ),
            Output::Seifert { orbifold_euler_characteristic, chi2 } => {
                format!("chi_orb = {orbifold_euler_characteristic}  chi2 = {chi2}")
            }
            Output::JsjSum { pieces, result } => format!("{} pieces  chi2 = {}", pieces.len(), result.chi2),
            Output::Compare { bound_m, bound_n, holds, note } => {
                let mut s = format!("bound(M) = {bound_m}  bound(N) = {bound_n}  {}", if *holds { "holds" } else { "FAILS" });
                if let Some(n) = note {
                    s += &format!("  [{n}]");
                }
                s
            }
            Output::Selftest { passed, failed, criteria } => {
                let mut s = String::new();
                for c in criteria {
                    s += &format!("{c}\n");
                }
                s + &format!("{passed} passed, {failed} failed")
            }
        },
    };
    if matches!(r.outcome, Outcome::Ok(Output::Selftest { .. })) {
        body
    } else {
        format!("{:<32} {body}", r.input)
    }
}

/// Writes records in the chosen format and returns the process exit code: the code
/// of the first record that asks for a nonzero one.
pub fn emit(records: &[RunRecord], format: Format, out: &mut dyn Write) -> std::io::Result<i32> {
    for r in records {
        match format {
            Format::Records => writeln!(out, "{}", r.to_line())?,
            Format::Table => writeln!(out, "{}", table_row(r))?,
        }
    }
    Ok(records.iter().map(RunRecord::exit_code).find(|&c| c != 0).unwrap_or(0))
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(&cli) {
        Ok(records) => emit(&records, cli.config.format, out).unwrap_or(2),
        Err(e) => {
            let _ = writeln!(err, "l2euler: {e}");
            e.exit_code()
        }
    }
}
