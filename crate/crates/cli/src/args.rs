use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const SCHEMA: &str = "\
Spec files are JSON objects with the fields
  matrix             symmetric integer matrix A, signature (n-1,1)
  anchor             vector c0 with Q(c0) < 0 fixing the cone component
  polynomial         homogeneous f as a list of {\"exponents\": [..], \"coeff\": r, \"coeff_im\": r}
  c1, c2             cone vectors, either [r, ..] or {\"real\": [x, ..], \"rational\": [r, ..]}
  a, b               characteristic vectors [r, ..]
  boundary_override  optional, accept inadmissible cusps
A rational entry r is a JSON integer or a string \"p/q\" (decimals such as \"0.25\" are read exactly).

Complex arguments are written x+yi with rational or decimal parts, for example i, 0.1+0.9i, -1/2+1/2i.

Exit codes: 0 pass, 1 verification failed, 2 usage or input error, 3 convergence not achieved.
The environment variable INDEFTHETA_THREADS caps the worker count.";

#[derive(Parser, Debug)]
#[command(name = "indeftheta", version, about = "Indefinite theta series and their modular completions", after_long_help = SCHEMA)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Requested accuracy, between 1e-12 and 1e-2 (each command has its own default)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Truncation order N of q-expansions (rational)
    #[arg(long, global = true, default_value = "20")]
    pub order: String,
    /// Evaluation point in the upper half plane
    #[arg(long, global = true, default_value = "i", allow_hyphen_values = true)]
    pub tau: String,
    /// Seed recorded in the report
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact q-expansion of the holomorphic series of a spec
    Expand {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Numerical value of a theta series at tau
    Eval {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Part::Completed)]
        part: Part,
    },
    /// Residual reports for transformation laws and limits
    #[command(subcommand)]
    Verify(Verify),
    /// The three example families
    #[command(subcommand)]
    Example(Example),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    /// the modular completion
    Completed,
    /// sign weights applied to the hat polynomial
    AlmostHolomorphic,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Compare both sides of a transformation law at tau
    Modularity {
        #[arg(long)]
        spec: PathBuf,
        /// T, S, negate, shift-a:1,0 or shift-b:1/2,0
        #[arg(long = "move", default_value = "T")]
        mv: String,
        /// Also compare the q-expansions coefficientwise (not for S)
        #[arg(long)]
        exact: bool,
    },
    /// Move the cusp c2 of a spec into the cone along c2 + t c3
    Limit {
        #[arg(long)]
        spec: PathBuf,
        /// Interior direction c3 as p/q,p/q,...
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// Comma separated positive values of t, decreasing
        #[arg(long, default_value = "2/5,1/5,1/10,1/20")]
        t: String,
    },
    /// Modularity of S_x or T_x on Gamma_0(4)
    Gamma04 {
        #[arg(long, default_value = "S")]
        series: String,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "1,0;4,1", allow_hyphen_values = true)]
        gamma: String,
    },
    /// Weight two covariance of theta_2 F on Gamma_0(2)
    Gamma02 {
        #[arg(long, default_value = "1,0;2,1", allow_hyphen_values = true)]
        gamma: String,
        /// theta or beta
        #[arg(long, default_value = "theta")]
        route: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum Example {
    /// Coefficients of G_k and the limit of the theta family
    Eisenstein {
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Coefficient table of S_x or T_x and its Gamma_0(4) check
    Zagier {
        #[arg(long, default_value = "S")]
        series: String,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        x: String,
    },
    /// Hurwitz class numbers H(8n+7) against the mock theta expansion
    Hurwitz {
        /// theta or beta
        #[arg(long, default_value = "theta")]
        route: String,
    },
}
