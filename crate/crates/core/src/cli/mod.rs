//! `potts-bethe` command line.
//!
//! Exit codes: 0 pass, 1 falsified invariant, 2 usage, 3 precision exhausted.

mod commands;

pub use commands::{cmd_classify, cmd_julia_verify, cmd_orbit, cmd_sweep, Outcome};

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::padic::Padic;
use crate::potts::{parse_theta, MapError, MapParams};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

const THETA_HELP: &str = "theta in E_p. Grammar:
  theta    := rational | shifted | padic
  rational := int [ \"/\" int ]
  shifted  := \"1\" (\"+\" | \"-\") ( int | [ int \"*\" ] base [ \"^\" int ] )
  base     := \"p\" | <the prime>
  padic    := \"p^v * (d0 + d1*p + ...) O(p^M)\" | \"v:u:N\"";

#[derive(Debug, Parser)]
#[command(name = "potts-bethe", version, about = "p-adic dynamics of the Potts-Bethe map f(x) = ((θx+q−1)/(x+θ+q−2))^k")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the regime and print the partition.
    Classify(#[command(flatten)] Common),
    /// Iterate a single point.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Starting point, in the same grammar as --theta.
        #[arg(long)]
        x0: String,
    },
    /// Classify a seeded batch of points.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Also classify every point of the pole-preimage tree up to --depth (capped at level 6).
        #[arg(long)]
        include_pole_tree: bool,
    },
    /// Check the symbolic model of the Julia set up to --depth.
    JuliaVerify(#[command(flatten)] Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Prime p ≥ 3.
    #[arg(long)]
    pub p: u64,
    /// Exponent k ≥ 1 (branching of the tree).
    #[arg(long)]
    pub k: u64,
    /// Integer divisible by p.
    #[arg(long)]
    pub q: String,
    #[arg(long, long_help = THETA_HELP)]
    pub theta: String,
    /// Relative precision in base-p digits.
    #[arg(long, default_value_t = 64)]
    pub precision: u32,
    /// Steps tracked inside X when classifying; word length for julia-verify.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<String>,
}

/// Fully resolved configuration, embedded in every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub p: u64,
    pub k: u64,
    pub q: String,
    pub theta: String,
    pub precision: u32,
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub include_pole_tree: bool,
}

impl RunConfig {
    pub fn new(command: &str, c: &Common) -> Self {
        RunConfig {
            command: command.into(),
            p: c.p,
            k: c.k,
            q: c.q.clone(),
            theta: c.theta.clone(),
            precision: c.precision,
            depth: c.depth,
            samples: c.samples,
            seed: c.seed,
            format: c.format,
            out: c.out.clone(),
            x0: None,
            include_pole_tree: false,
        }
    }

    pub fn params(&self) -> Result<MapParams, MapError> {
        MapParams::parse(self.p, self.k, &self.q, &self.theta, self.precision)
    }
}

/// Parses a point with the θ grammar (no E_p requirement).
pub fn parse_point(s: &str, p: u64, prec: u32) -> Result<Padic, MapError> {
    let t = s.trim();
    if t.contains(':') || t.contains("O(") {
        return Ok(Padic::parse(t, p)?.with_prec(prec));
    }
    parse_theta(t, p, prec).map_err(|_| MapError::InvalidTheta(format!("cannot parse point {s:?}")))
}

/// Entry point used by `main`.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = match &cli.command {
        Command::Classify(c) => RunConfig::new("classify", c),
        Command::Orbit { common, x0 } => RunConfig { x0: Some(x0.clone()), ..RunConfig::new("orbit", common) },
        Command::Sweep { common, include_pole_tree } => {
            RunConfig { include_pole_tree: *include_pole_tree, ..RunConfig::new("sweep", common) }
        }
        Command::JuliaVerify(c) => RunConfig::new("julia-verify", c),
    };
    let outcome = match cfg.command.as_str() {
        "classify" => cmd_classify(&cfg),
        "orbit" => cmd_orbit(&cfg),
        "sweep" => cmd_sweep(&cfg),
        _ => cmd_julia_verify(&cfg),
    };
    if let Some(msg) = &outcome.message {
        eprintln!("potts-bethe: {msg}");
    }
    if !outcome.body.is_empty() {
        let written = match &cfg.out {
            Some(path) => std::fs::write(path, &outcome.body),
            None => std::io::stdout().write_all(outcome.body.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("potts-bethe: cannot write report: {e}");
            return EXIT_USAGE;
        }
    }
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_from(["potts-bethe", "classify", "--p", "5"]), EXIT_USAGE);
        assert_eq!(run_from(["potts-bethe", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("7", 5, 10).unwrap(), Padic::from_int(7, 5, 10));
        assert_eq!(parse_point("-7", 5, 10).unwrap(), Padic::from_int(-7, 5, 10));
        assert!(parse_point("1/5", 5, 10).unwrap().valuation() == Some(-1));
        assert_eq!(parse_point("1+5^2", 5, 10).unwrap(), Padic::from_int(26, 5, 10));
        assert!(parse_point("x", 5, 10).is_err());
        assert!(parse_point("0:3:4", 5, 10).is_ok());
    }
}
