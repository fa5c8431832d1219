//! The `tcore` command line: argument parsing, run configuration, dispatch
//! and exit codes.

mod commands;
mod emit;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::parse_rational;
use crate::error::Error;
use crate::npoint::SValue;

pub use emit::Output;
pub use verify::{run_suite, CheckResult, DEFAULT_GOLDEN_DIR, GOLDEN_CASES, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

pub const PRECISION_ENV: &str = "TCORE_PRECISION_BITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Brute,
    Closed,
    ClosedR,
    Contour,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum IntegrandArg {
    Cor42,
    Cor43,
    Bo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ZForm {
    Sum,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TargetArg {
    Correlation,
    Identity,
    Lacunary,
}

#[derive(Parser, Debug)]
#[command(name = "tcore", version, about = "n-point functions of t-core partitions")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Run a saved configuration instead of a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count t-cores by size and compare with product formulas.
    CountTcores(CountArgs),
    /// Compute F_t(Q; s) by a chosen method.
    Npoint(NpointArgs),
    /// The q-deformed partition function or n-point function.
    Zfunction(ZArgs),
    /// Correlation functions ⟨f_l1 … f_ln⟩ of t-cores.
    Correlation(CorrelationArgs),
    /// Membership of a correlation function in the weight-graded basis.
    QuasimodCheck(QuasimodArgs),
    /// Torus quadrature of a contour integrand.
    ContourExtract(ContourArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub t: u32,
    #[arg(long, default_value_t = 30)]
    pub max: u32,
}

#[derive(Args, Debug)]
pub struct NpointArgs {
    #[arg(long)]
    pub t: u32,
    /// Number of points; must match the number of s values when given.
    #[arg(long)]
    pub n: Option<usize>,
    /// s values as exact rationals, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Vec<String>,
    #[arg(long, default_value_t = 6)]
    pub order: u32,
    #[arg(long, value_enum, default_value = "brute")]
    pub method: MethodArg,
    #[arg(long = "q2", default_value = "1")]
    pub q2: String,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long)]
    pub all_tuples: bool,
    /// Numeric Q for the contour method.
    #[arg(long, default_value = "1/10")]
    pub q: String,
    #[arg(long, env = PRECISION_ENV, default_value_t = 256)]
    pub precision: u32,
    #[arg(long, default_value_t = 20)]
    pub digits: u32,
}

#[derive(Args, Debug)]
pub struct ZArgs {
    #[arg(long, default_value = "2")]
    pub q: String,
    /// Total degree in (Q, Q₁).
    #[arg(long, default_value_t = 4)]
    pub order: u32,
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<String>,
    #[arg(long, value_enum, default_value = "sum")]
    pub form: ZForm,
}

#[derive(Args, Debug)]
pub struct CorrelationArgs {
    #[arg(long)]
    pub t: u32,
    /// Indices l_1..l_n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub l: Vec<u32>,
    #[arg(long, default_value_t = 10)]
    pub order: u32,
}

#[derive(Args, Debug)]
pub struct QuasimodArgs {
    #[arg(long, default_value_t = 2)]
    pub t: u32,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub l: Vec<u32>,
    /// Maximal weight; defaults to the sum of the indices.
    #[arg(long)]
    pub weight: Option<u32>,
    #[arg(long, default_value_t = 20)]
    pub fit: u32,
    #[arg(long, default_value_t = 30)]
    pub check: u32,
    #[arg(long, value_enum, default_value = "correlation")]
    pub target: TargetArg,
    /// z-order for the identity target.
    #[arg(long, default_value_t = 8)]
    pub z_order: u32,
}

#[derive(Args, Debug)]
pub struct ContourArgs {
    #[arg(long, value_enum, default_value = "cor42")]
    pub integrand: IntegrandArg,
    #[arg(long, default_value_t = 2)]
    pub t: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub s: Vec<String>,
    #[arg(long, default_value = "1/10")]
    pub q: String,
    #[arg(long = "q2", default_value = "1")]
    pub q2: String,
    #[arg(long, env = PRECISION_ENV, default_value_t = 256)]
    pub precision: u32,
    #[arg(long, default_value_t = 20)]
    pub digits: u32,
    /// Starting points per circle.
    #[arg(long)]
    pub m: Option<usize>,
    /// Also evaluate the exact series to this Q-order and report agreement.
    #[arg(long)]
    pub compare_order: Option<u32>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rewrite golden files instead of comparing.
    #[arg(long)]
    pub bless: bool,
    #[arg(long)]
    pub golden_dir: Option<PathBuf>,
}

/// A fully resolved run, serializable so runs can be saved and replayed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub t: Option<u32>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub s: Vec<String>,
    #[serde(default)]
    pub order: u32,
    #[serde(default, rename = "Q2")]
    pub q2: Option<String>,
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub method: Option<MethodArg>,
    #[serde(default, rename = "Q")]
    pub q: Option<String>,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_digits")]
    pub digits: u32,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub all_tuples: bool,
    #[serde(default)]
    pub l: Vec<u32>,
    #[serde(default)]
    pub weight: Option<u32>,
    #[serde(default)]
    pub fit: Option<u32>,
    #[serde(default)]
    pub check: Option<u32>,
    #[serde(default)]
    pub integrand: Option<IntegrandArg>,
    #[serde(default)]
    pub form: Option<ZForm>,
    #[serde(default)]
    pub target: Option<TargetArg>,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub bless: bool,
    #[serde(default)]
    pub golden_dir: Option<PathBuf>,
    #[serde(default)]
    pub compare_order: Option<u32>,
}

fn default_precision() -> u32 {
    256
}

fn default_digits() -> u32 {
    20
}

impl RunConfig {
    fn blank(command: &str, format: Format) -> RunConfig {
        RunConfig {
            command: command.into(),
            t: None,
            n: None,
            s: Vec::new(),
            order: 0,
            q2: None,
            r: None,
            method: None,
            q: None,
            precision_bits: default_precision(),
            m: None,
            digits: default_digits(),
            format,
            seed: 0,
            all_tuples: false,
            l: Vec::new(),
            weight: None,
            fit: None,
            check: None,
            integrand: None,
            form: None,
            target: None,
            suite: None,
            bless: false,
            golden_dir: None,
            compare_order: None,
        }
    }

    pub fn from_command(cmd: &Command, format: Format) -> RunConfig {
        match cmd {
            Command::CountTcores(a) => RunConfig { t: Some(a.t), order: a.max, ..Self::blank("count-tcores", format) },
            Command::Npoint(a) => RunConfig {
                t: Some(a.t),
                n: a.n,
                s: a.s.clone(),
                order: a.order,
                q2: Some(a.q2.clone()),
                r: Some(a.r),
                method: Some(a.method),
                q: Some(a.q.clone()),
                precision_bits: a.precision,
                digits: a.digits,
                all_tuples: a.all_tuples,
                ..Self::blank("npoint", format)
            },
            Command::Zfunction(a) => RunConfig {
                q: Some(a.q.clone()),
                order: a.order,
                s: a.s.clone(),
                form: Some(a.form),
                ..Self::blank("zfunction", format)
            },
            Command::Correlation(a) => {
                RunConfig { t: Some(a.t), l: a.l.clone(), order: a.order, ..Self::blank("correlation", format) }
            }
            Command::QuasimodCheck(a) => RunConfig {
                t: Some(a.t),
                l: a.l.clone(),
                weight: a.weight,
                fit: Some(a.fit),
                check: Some(a.check),
                target: Some(a.target),
                order: a.z_order,
                ..Self::blank("quasimod-check", format)
            },
            Command::ContourExtract(a) => RunConfig {
                integrand: Some(a.integrand),
                t: Some(a.t),
                s: a.s.clone(),
                q: Some(a.q.clone()),
                q2: Some(a.q2.clone()),
                precision_bits: a.precision,
                digits: a.digits,
                m: a.m,
                compare_order: a.compare_order,
                ..Self::blank("contour-extract", format)
            },
            Command::Verify(a) => RunConfig {
                suite: Some(a.suite.clone()),
                seed: a.seed,
                bless: a.bless,
                golden_dir: a.golden_dir.clone(),
                ..Self::blank("verify", format)
            },
        }
    }

    pub fn svalues(&self) -> crate::Result<Vec<SValue>> {
        self.s.iter().map(|x| SValue::parse(x)).collect()
    }

    /// Rejects inconsistent combinations before any computation starts.
    pub fn validate(&self) -> crate::Result<()> {
        let bad = |m: &str| Err(Error::Invalid(m.to_string()));
        let needs_t = ["count-tcores", "npoint", "correlation", "quasimod-check"];
        if needs_t.contains(&self.command.as_str()) {
            match self.t {
                Some(t) if t >= 2 => {}
                _ => return bad("t must be at least 2"),
            }
        }
        match self.command.as_str() {
            "count-tcores" | "correlation" | "quasimod-check" | "zfunction" => {}
            "npoint" => {
                if let Some(n) = self.n {
                    if n != self.s.len() {
                        return bad(&format!("--n {n} but {} s values given", self.s.len()));
                    }
                }
                self.svalues()?;
                let method = self.method.unwrap_or(MethodArg::Brute);
                if method == MethodArg::Contour && self.s.len() > 3 {
                    return bad("the contour method supports n <= 3");
                }
                if method == MethodArg::ClosedR {
                    let r = self.r.unwrap_or(1);
                    if self.s.len() < 2 || r < 1 || r >= self.s.len() {
                        return bad("closed-r needs n >= 2 and 1 <= r < n");
                    }
                }
                if let Some(q2) = &self.q2 {
                    if parse_rational(q2)?.cmp0().is_eq() {
                        return bad("Q2 must be nonzero");
                    }
                }
            }
            "contour-extract" => {
                if self.s.is_empty() || self.s.len() > 3 {
                    return bad("contour extraction needs 1 <= n <= 3");
                }
                for x in &self.s {
                    if parse_rational(x)? <= 1 {
                        return bad("s values must exceed 1");
                    }
                }
            }
            "verify" => {
                let suite = self.suite.as_deref().unwrap_or("all");
                if !SUITES.contains(&suite) && suite != "all" {
                    return bad(&format!("unknown suite {suite}"));
                }
            }
            other => return bad(&format!("unknown command {other}")),
        }
        if let Some(q) = &self.q {
            parse_rational(q)?;
        }
        if self.precision_bits < 32 {
            return bad("precision must be at least 32 bits");
        }
        Ok(())
    }
}

/// Exit code for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) => EXIT_NONCONVERGENCE,
        Error::NotRational(_) => EXIT_VERIFY,
        _ => EXIT_CONFIG,
    }
}

fn report_error(err: &mut dyn Write, e: &Error) {
    let v = serde_json::json!({"error": e.code(), "message": e.to_string()});
    let _ = writeln!(err, "{v}");
}

/// Parses `args` and runs, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cfg = match (&cli.config, &cli.command) {
        (Some(path), _) => match std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
            .and_then(|text| serde_json::from_str::<RunConfig>(&text).map_err(|e| Error::Invalid(format!("bad config: {e}"))))
        {
            Ok(c) => c,
            Err(e) => {
                report_error(err, &e);
                return EXIT_CONFIG;
            }
        },
        (None, Some(cmd)) => RunConfig::from_command(cmd, cli.format),
        (None, None) => {
            let _ = writeln!(err, "no subcommand given; see --help");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = cfg.validate() {
        report_error(err, &e);
        return EXIT_CONFIG;
    }
    if cli.dump_config {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&cfg).expect("serializable"));
        return EXIT_OK;
    }
    match commands::execute(&cfg, err) {
        Ok(output) => {
            if let Err(e) = output.write(cfg.format, out) {
                report_error(err, &e);
                return EXIT_CONFIG;
            }
            if output.failed {
                EXIT_VERIFY
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            report_error(err, &e);
            exit_code(&e)
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_args(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("tcore").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_round_trip() {
        let (code, out, _) = run(&["npoint", "--t", "3", "--s", "4,9/4", "--method", "closed", "--dump-config"]);
        assert_eq!(code, 0);
        let cfg: RunConfig = serde_json::from_str(&out).unwrap();
        let again: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.s, vec!["4", "9/4"]);
    }

    #[test]
    fn invalid_combinations_rejected() {
        assert_eq!(run(&["npoint", "--t", "2", "--s", "4,4,4,4", "--method", "contour"]).0, EXIT_CONFIG);
        assert_eq!(run(&["npoint", "--t", "2", "--n", "2", "--s", "4"]).0, EXIT_CONFIG);
        assert_eq!(run(&["npoint", "--t", "1", "--s", "4"]).0, EXIT_CONFIG);
        assert_eq!(run(&["npoint", "--t", "2", "--s", "3"]).0, EXIT_CONFIG);
        assert_eq!(run(&["verify", "--suite", "nope"]).0, EXIT_CONFIG);
        let (_, _, err) = run(&["npoint", "--t", "2", "--s", "2"]);
        assert!(err.contains("invalid_input"));
    }
}
