//! Command-line front end. Every command prints one JSON document on stdout.

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::ansatz::AnsatzSpec;
use crate::combinat::{enumerate_partitions, pbar, qbar, DegreeProfile};
use crate::dimension::{self, big_json, Selection};
use crate::error::Error;
use crate::rankprobe::{self, ProbeOptions, ProfileSelection, VerdictOptions, DEFAULT_TRIALS};
use crate::polyalg::DEFAULT_PRIME;

/// Version of the JSON envelope layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "backflow", version, about = "Dimension counts and rank probes for backflow determinants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partitions of M into at most K parts (or strict ones with --strict).
    Partitions {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        strict: bool,
        /// Report the count without listing the partitions.
        #[arg(long)]
        count_only: bool,
    },
    /// Dimensions of the target and source spaces.
    #[command(subcommand)]
    Dims(DimsCommand),
    /// Smallest total degree admitting N distinct monomials.
    Mindeg {
        #[arg(long)]
        n: usize,
    },
    /// Determinant-count threshold N^(3N-3).
    Bound {
        #[arg(long)]
        n: usize,
    },
    /// Compare target and source dimensions at (N, D).
    Gap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Evaluate an ansatz description file.
    #[command(subcommand)]
    Ansatz(AnsatzCommand),
    /// Generic Jacobian rank, secant ranks and fiber dimension.
    Rank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        profiles: ProfileArgs,
        #[command(flatten)]
        probe: ProbeArgs,
        /// Largest secant order r to probe.
        #[arg(long, default_value_t = 1)]
        secant: usize,
    },
    /// Surjectivity verdict for sums of r determinants.
    Verdict {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[command(flatten)]
        profiles: ProfileArgs,
        #[command(flatten)]
        probe: ProbeArgs,
    },
}

#[derive(Debug, Subcommand)]
enum DimsCommand {
    Target {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        paper_lower: bool,
        #[arg(long)]
        asymptotic: bool,
        #[arg(long)]
        all: bool,
    },
    Source {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        paper: bool,
        #[arg(long)]
        asymptotic: bool,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Debug, Subcommand)]
enum AnsatzCommand {
    Eval {
        #[arg(long)]
        spec: std::path::PathBuf,
        /// Verify total antisymmetry of the result.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Args)]
struct ProfileArgs {
    /// Comma-separated nondecreasing column degrees.
    #[arg(long, conflicts_with = "all_profiles")]
    profile: Option<String>,
    #[arg(long)]
    all_profiles: bool,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time (breaks byte-identical output).
    #[arg(long)]
    timings: bool,
}

impl ProbeArgs {
    fn options(&self) -> ProbeOptions {
        ProbeOptions {
            trials: self.trials,
            prime: self.prime,
            seed: self.seed,
        }
    }
}

/// Wrapper around every successful payload.
#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub payload: Value,
}

#[derive(Debug, Serialize)]
struct ErrorEnvelope {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    command: Vec<String>,
    error: ErrorBody,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
}

/// Outcome of a command: process exit code and the text for stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
}

struct Failure {
    code: &'static str,
    message: String,
    exit: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.code(),
            message: e.to_string(),
            exit: EXIT_FAILURE,
        }
    }
}

struct Success {
    seed: Option<u64>,
    prime: Option<u64>,
    payload: Value,
}

impl Success {
    fn plain(payload: Value) -> Self {
        Success {
            seed: None,
            prime: None,
            payload,
        }
    }
}

/// Run one command line. `argv` excludes the program name.
pub fn run<S: AsRef<str>>(argv: &[S]) -> Output {
    let args: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let parsed = Cli::try_parse_from(std::iter::once("backflow".to_string()).chain(args.iter().cloned()));
    let result = match parsed {
        Ok(cli) => dispatch(cli.command),
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                return Output {
                    code: if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        EXIT_OK
                    },
                    stdout: e.render().to_string(),
                };
            }
            kind => Err(Failure {
                code: match kind {
                    ErrorKind::UnknownArgument => "unknown-flag",
                    ErrorKind::InvalidSubcommand => "unknown-command",
                    ErrorKind::MissingRequiredArgument => "missing-argument",
                    ErrorKind::ValueValidation | ErrorKind::InvalidValue => "invalid-value",
                    ErrorKind::ArgumentConflict => "conflicting-flags",
                    _ => "usage",
                },
                message: first_line(&e.render().to_string()),
                exit: EXIT_USAGE,
            }),
        },
    };
    match result {
        Ok(s) => Output {
            code: EXIT_OK,
            stdout: to_json_line(&ReportEnvelope {
                schema_version: SCHEMA_VERSION,
                tool: env!("CARGO_PKG_NAME"),
                tool_version: env!("CARGO_PKG_VERSION"),
                command: args,
                seed: s.seed,
                prime: s.prime,
                payload: s.payload,
            }),
        },
        Err(f) => Output {
            code: f.exit,
            stdout: to_json_line(&ErrorEnvelope {
                schema_version: SCHEMA_VERSION,
                tool: env!("CARGO_PKG_NAME"),
                tool_version: env!("CARGO_PKG_VERSION"),
                command: args,
                error: ErrorBody {
                    code: f.code,
                    message: f.message,
                },
            }),
        },
    }
}

fn first_line(s: &str) -> String {
    s.lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
        .to_string()
}

fn to_json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn parse_profile(text: &str, n: usize) -> Result<DegreeProfile, Failure> {
    let p: DegreeProfile = text.parse()?;
    if p.particles() != n {
        return Err(Error::DimensionMismatch(format!(
            "profile {p} has {} entries, expected N = {n}",
            p.particles()
        ))
        .into());
    }
    Ok(p)
}

fn selection(exact: bool, bound: bool, asymptotic: bool, all: bool) -> Selection {
    if all || !(exact || bound || asymptotic) {
        Selection::ALL
    } else {
        Selection { exact, bound, asymptotic }
    }
}

fn dispatch(command: Command) -> Result<Success, Failure> {
    match command {
        Command::Partitions { k, m, strict, count_only } => {
            let count = if strict { qbar(k, m)? } else { pbar(k, m)? };
            let mut payload = json!({ "count": big_json(&count) });
            if !count_only {
                let items: Vec<Vec<u32>> = enumerate_partitions(k, m, strict)?
                    .map(|p| p.parts().to_vec())
                    .collect();
                payload["items"] = to_value(&items);
            }
            Ok(Success::plain(payload))
        }
        Command::Dims(DimsCommand::Target {
            n,
            degree,
            exact,
            paper_lower,
            asymptotic,
            all,
        }) => {
            let report = dimension::target_report(n, degree, selection(exact, paper_lower, asymptotic, all))?;
            Ok(Success::plain(to_value(&report)))
        }
        Command::Dims(DimsCommand::Source {
            n,
            profile,
            exact,
            paper,
            asymptotic,
            all,
        }) => {
            let profile = parse_profile(&profile, n)?;
            let report = dimension::source_report(&profile, selection(exact, paper, asymptotic, all))?;
            Ok(Success::plain(to_value(&report)))
        }
        Command::Mindeg { n } => {
            if n == 0 {
                return Err(Error::InvalidArgument("N must be at least 1".into()).into());
            }
            Ok(Success::plain(json!({ "n": n, "min_degree": dimension::min_degree(n) })))
        }
        Command::Bound { n } => {
            let bound = dimension::determinant_count_bound(n)?;
            Ok(Success::plain(json!({ "n": n, "bound": big_json(&bound) })))
        }
        Command::Gap { n, degree } => Ok(Success::plain(to_value(&dimension::gap_report(n, degree)?))),
        Command::Ansatz(AnsatzCommand::Eval { spec, check }) => {
            let text = std::fs::read_to_string(&spec).map_err(|e| Failure {
                code: "io",
                message: format!("{}: {e}", spec.display()),
                exit: EXIT_FAILURE,
            })?;
            let spec = AnsatzSpec::from_json_str(&text)?;
            let poly = spec.evaluate()?;
            let mut payload = json!({
                "n": spec.n,
                "profile": spec.profile,
                "text": poly.to_string(),
                "polynomial": to_value(&poly.to_json()),
                "terms": poly.len(),
            });
            if check {
                payload["antisymmetric"] = Value::Bool(poly.is_antisymmetric());
            }
            Ok(Success::plain(payload))
        }
        Command::Rank {
            n,
            degree,
            profiles,
            probe,
            secant,
        } => {
            let selection = match (&profiles.profile, profiles.all_profiles) {
                (Some(p), _) => ProfileSelection::Given(parse_profile(p, n)?),
                (None, true) => ProfileSelection::All,
                (None, false) => ProfileSelection::Best,
            };
            probe_command(n, degree, secant, selection, &probe)
        }
        Command::Verdict {
            n,
            degree,
            r,
            profiles,
            probe,
        } => {
            let selection = match &profiles.profile {
                Some(p) => ProfileSelection::Given(parse_profile(p, n)?),
                None => ProfileSelection::All,
            };
            probe_command(n, degree, r, selection, &probe)
        }
    }
}

fn probe_command(
    n: usize,
    degree: u32,
    r: usize,
    profiles: ProfileSelection,
    probe: &ProbeArgs,
) -> Result<Success, Failure> {
    let opts = VerdictOptions {
        probe: probe.options(),
        profiles,
        row_limit: rankprobe::row_limit_from_env(),
        timings: probe.timings,
    };
    let report = rankprobe::surjectivity_verdict(n, degree, r, &opts)?;
    Ok(Success {
        seed: Some(probe.seed),
        prime: Some(probe.prime),
        payload: to_value(&report),
    })
}
