use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "spinwit", version, about = "Entanglement witnesses for multispinor systems")]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    Euclidean,
    Chiral4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a gamma-matrix basis and optionally check its defining relations.
    Gamma {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        dim: u64,
        #[arg(long, value_enum, default_value = "euclidean")]
        rep: Rep,
        #[arg(long)]
        verify: bool,
    },
    /// Eigenvalues of a witness operator as a JSON array.
    Spectrum(WitnessArgs),
    /// Linear programs over the feasible regions.
    Lp {
        #[command(subcommand)]
        action: LpAction,
    },
    /// Optimal witnesses and witness classification.
    Witness {
        #[command(subcommand)]
        action: WitnessAction,
    },
    /// Bell-states-diagonal states.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// Region decomposition scans.
    Region {
        #[command(subcommand)]
        action: RegionAction,
    },
    /// Lorentz boosts of the rest-frame witness and states.
    Boost {
        #[command(subcommand)]
        action: BoostAction,
    },
    /// Run a bundled reproduction scenario and compare with the expected value.
    Reproduce {
        #[arg(value_enum)]
        scenario: Scenario,
    },
    /// Run every property suite and print a JSON manifest.
    VerifyAll {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Product states sampled per configuration.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Negate generator `k` (1-based) of every basis before the Clifford suite.
        #[arg(long, hide = true)]
        inject_sign_error: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub d: usize,
    /// Coefficients `a_0,a_1,...`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<f64>,
    /// Use the chiral generators (first kind, m = 2, d = 4).
    #[arg(long)]
    pub chiral: bool,
}

#[derive(Debug, Subcommand)]
pub enum LpAction {
    Solve {
        #[arg(long)]
        region: String,
        #[arg(long)]
        dim: usize,
        /// `a_0,a_1,...`; `a_0` is the constant term.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        objective: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum WitnessAction {
    /// Optimal witness for a bit pattern (kind2 takes two bits and `--j`).
    Optimal {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long)]
        bits: String,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long)]
        chiral: bool,
    },
    Classify(WitnessArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Label set: full, kind1, kind2, approx1, approx2, chiral, chiralfull.
    #[arg(long, default_value = "kind1")]
    pub labels: String,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    /// Coefficients `b_1,b_2,...` (`b_0` is fixed by the trace).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum StateAction {
    Build(StateArgs),
    Classify {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "kind1")]
        family: String,
    },
    Detect {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "kind1")]
        family: String,
        #[arg(long)]
        witness_bits: String,
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum RegionAction {
    /// Two-qubit grid over the Bell-diagonal tetrahedron.
    Scan {
        #[arg(long, default_value_t = 0.02)]
        resolution: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoostAction {
    Sweep {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        xi_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        xi_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, value_enum, default_value = "z")]
        direction: Axis,
    },
    CheckInvariance {
        #[arg(long)]
        bits: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[arg(long, value_enum, default_value = "z")]
        direction: Axis,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    EprDetection,
    BsdVertexDetection,
    HsRest,
    HsBoost,
    Kind2Decomposable,
    ApproxDetection,
}
