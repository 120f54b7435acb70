//! The `symbell` command line.
//!
//! [`run`] parses arguments, executes one subcommand and writes the payload
//! and its manifest. It returns the process exit code: 0 on success
//! (including "no violation"), 1 for usage errors, 2 for violated
//! preconditions and 3 for internal consistency failures.

mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use output::{render, Format, Outcome, Output, RunManifest};

use crate::inequalities::Sign;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "symbell",
    version,
    about = "Symmetric two-body Bell inequalities: polytope facets, classical bounds, quantum violations"
)]
pub struct Cli {
    /// Output format for records and reports.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true, help_heading = "Global options")]
    pub format: Format,
    /// Write the payload to PATH and the manifest to PATH.manifest.json.
    #[arg(long, global = true, help_heading = "Global options", value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, help_heading = "Global options", value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Reserved; no command uses randomness.
    #[arg(long, global = true, help_heading = "Global options")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// List the 2(n^2+1) vertices of the symmetric polytope.
    Vertices {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
    },
    /// Enumerate all facets (tight Bell inequalities).
    Facets {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// Cross-check against the brute-force oracle (n <= 6).
        #[arg(long)]
        oracle: bool,
    },
    /// Exact classical bound of an inequality.
    Bound(BoundArgs),
    /// Build a member of the three-parameter class.
    Classbuild(ClassArgs),
    /// Quantum violation by optimizing the measurement angle.
    Violate(ViolateArgs),
    /// The Dicke-class inequality: tightness, saturating tuples, violation.
    Dicke {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
    },
    /// Ground state of the isotropic LMG Hamiltonian.
    Lmg(LmgArgs),
    /// Two-qubit reduction of a Dicke state and of the Dicke Bell operator.
    Reduce(ReduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// -2 S0 + S00/2 - S01 + S11/2 + 2n >= 0.
    Elementary,
    /// The Dicke class, violated by half-filled Dicke states.
    Dicke,
}

#[derive(Debug, Args, Serialize)]
pub struct CoefficientArgs {
    /// Named inequality family instead of explicit coefficients.
    #[arg(long, value_enum, conflicts_with_all = ["alpha", "beta", "gamma", "delta", "epsilon"])]
    pub family: Option<Family>,
    /// Coefficient of S0.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<i64>,
    /// Coefficient of S1.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<i64>,
    /// Twice the coefficient of S00.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<i64>,
    /// Coefficient of S01.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<i64>,
    /// Twice the coefficient of S11.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<i64>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[command(flatten)]
    pub coefficients: CoefficientArgs,
    /// Number of parties.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
    /// Cross-check with the 4^n strategy scan (n <= 14).
    #[arg(long)]
    pub bruteforce: bool,
    /// Compare a claimed bound with the exact one.
    #[arg(long, allow_hyphen_values = true)]
    pub claimed: Option<i64>,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "1" | "+1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        _ => Err(format!("expected +1 or -1, got {s:?}")),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ClassArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub x: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub y: u32,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub sigma: Sign,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: i64,
    /// Sign in front of (x + y) in alpha.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub branch: Sign,
    /// Number of parties.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveArg {
    /// Smallest eigenvalue on the symmetric subspace.
    MinEigenvalue,
    /// Expectation in a Dicke state (see --k).
    DickeState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// Elementary inequality, minimum eigenvalue.
    Fig1,
    /// Dicke inequality in the half-filled Dicke state.
    Fig2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Panel {
    /// Optimum versus n.
    A,
    /// Angle scan at fixed n.
    B,
}

#[derive(Debug, Args, Serialize)]
pub struct ViolateArgs {
    #[command(flatten)]
    pub coefficients: CoefficientArgs,
    /// Number of parties.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..), required_unless_present = "figure")]
    pub n: Option<u32>,
    /// Classical bound for explicit coefficients (computed exactly if absent).
    #[arg(long = "beta-c", allow_hyphen_values = true)]
    pub beta_c: Option<i64>,
    /// Evaluate at this angle instead of optimizing.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Dicke excitation for --objective dicke-state (default ceil(n/2)).
    #[arg(long)]
    pub k: Option<u32>,
    /// Emit sweep data for a figure instead of a single report.
    #[arg(long, value_enum)]
    pub figure: Option<Figure>,
    /// Restrict figure output to one panel.
    #[arg(long, value_enum, requires = "figure")]
    pub panel: Option<Panel>,
    /// Party numbers for the figure sweep, comma separated.
    #[arg(long = "n-values", value_delimiter = ',', requires = "figure")]
    pub n_values: Vec<u32>,
    /// Angle points per scan in panel b.
    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u32).range(2..))]
    pub points: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct LmgArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub h: f64,
    /// Number of spins.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    /// Number of parties.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
    /// Measurement angle (default: the analytic optimum).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Dicke excitation (default ceil(n/2)).
    #[arg(long)]
    pub k: Option<u32>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Vertices { .. } => "vertices",
            Command::Facets { .. } => "facets",
            Command::Bound(_) => "bound",
            Command::Classbuild(_) => "classbuild",
            Command::Violate(_) => "violate",
            Command::Dicke { .. } => "dicke",
            Command::Lmg(_) => "lmg",
            Command::Reduce(_) => "reduce",
        }
    }
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stdout, "{text}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        1
                    } else {
                        0
                    }
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };

    if let Some(k) = cli.threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(usize::from(k)).build_global();
    }

    let mut warnings = Vec::new();
    let outcome = match commands::execute(&cli.command, &mut warnings) {
        Ok(o) => o,
        Err(e) => {
            output::write_line(stderr, &format!("error: {e}"));
            return e.exit_code();
        }
    };
    for w in &warnings {
        output::write_line(stderr, &format!("warning: {w}"));
    }

    let (payload, side) = match render(&outcome.output, cli.format) {
        Ok(r) => r,
        Err(e) => {
            output::write_line(stderr, &format!("error: cannot render output: {e}"));
            return 2;
        }
    };
    let parameters = serde_json::to_value(&cli).unwrap_or(serde_json::Value::Null);
    let manifest = RunManifest::new(cli.command.name(), parameters, &payload);
    let manifest_json = serde_json::to_string(&manifest).expect("manifest serializes");

    match &cli.out {
        Some(path) => {
            let mut manifest_path = path.clone().into_os_string();
            manifest_path.push(".manifest.json");
            let written =
                std::fs::write(path, &payload).and_then(|_| std::fs::write(&manifest_path, manifest_json + "\n"));
            if let Err(e) = written {
                output::write_line(stderr, &format!("error: cannot write {}: {e}", path.display()));
                return 2;
            }
        }
        None => {
            if let Err(e) = stdout.write_all(&payload).and_then(|_| stdout.flush()) {
                output::write_line(stderr, &format!("error: cannot write output: {e}"));
                return 2;
            }
            output::write_line(stderr, &manifest_json);
        }
    }
    if let Some(s) = side {
        output::write_line(stderr, &s);
    }
    match outcome.failure {
        Some(e) => {
            output::write_line(stderr, &format!("error: {e}"));
            e.exit_code()
        }
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn signs_parse() {
        assert_eq!(parse_sign("-1"), Ok(Sign::Minus));
        assert_eq!(parse_sign("+"), Ok(Sign::Plus));
        assert!(parse_sign("2").is_err());
    }
}
