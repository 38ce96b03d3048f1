use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "tonks",
    version,
    about = "Bands and ground-state observables of Fermi and Tonks-Girardeau gases in a magnetized cosine lattice"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Band energies λ and E for every Bloch fraction.
    Bands(BandsArgs),
    /// First band gap as a function of B, ω or q.
    GapScan(GapScanArgs),
    /// Single-particle density ρ(z).
    Density(StateArgs),
    /// Pair distribution D(z₁, z₂).
    PairDist(StateArgs),
    /// Reduced single-particle density matrix ρ(z, z′).
    Rspdm(MatrixArgs),
    /// Momentum occupations n_j at κ_j = 2j/M.
    Momentum(MatrixArgs),
    /// Antidiagonal cut ρ(z, Mπ − z).
    Antidiag(MatrixArgs),
    /// Both statistics side by side, with a difference report.
    Compare(CompareArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bands(_) => "bands",
            Command::GapScan(_) => "gap-scan",
            Command::Density(_) => "density",
            Command::PairDist(_) => "pair-dist",
            Command::Rspdm(_) => "rspdm",
            Command::Momentum(_) => "momentum",
            Command::Antidiag(_) => "antidiag",
            Command::Compare(_) => "compare",
            Command::Replay(_) => "replay",
        }
    }

    pub fn common(&self) -> Option<&Common> {
        match self {
            Command::Bands(a) => Some(&a.common),
            Command::GapScan(a) => Some(&a.common),
            Command::Density(a) | Command::PairDist(a) => Some(&a.common),
            Command::Rspdm(a) | Command::Momentum(a) | Command::Antidiag(a) => {
                Some(&a.state.common)
            }
            Command::Compare(a) => Some(&a.state.common),
            Command::Replay(_) => None,
        }
    }

    pub fn common_mut(&mut self) -> Option<&mut Common> {
        match self {
            Command::Bands(a) => Some(&mut a.common),
            Command::GapScan(a) => Some(&mut a.common),
            Command::Density(a) | Command::PairDist(a) => Some(&mut a.common),
            Command::Rspdm(a) | Command::Momentum(a) | Command::Antidiag(a) => {
                Some(&mut a.state.common)
            }
            Command::Compare(a) => Some(&mut a.state.common),
            Command::Replay(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsArg {
    Bose,
    Fermi,
}

impl From<StatisticsArg> for tonks_core::Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Bose => tonks_core::Statistics::Bose,
            StatisticsArg::Fermi => tonks_core::Statistics::Fermi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    /// Monte Carlo (Bose).
    Mc,
    /// Orbital sum (Fermi).
    Closed,
    /// Tensor trapezoid quadrature, N ≤ 3.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum ParamArg {
    #[value(name = "B")]
    #[serde(rename = "B")]
    Field,
    #[value(name = "omega")]
    #[serde(rename = "omega")]
    Omega,
    #[value(name = "q")]
    #[serde(rename = "q")]
    Q,
}

impl From<ParamArg> for tonks_core::bands::ScanParameter {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::Field => tonks_core::bands::ScanParameter::Field,
            ParamArg::Omega => tonks_core::bands::ScanParameter::Omega,
            ParamArg::Q => tonks_core::bands::ScanParameter::Q,
        }
    }
}

/// Options shared by every computing subcommand.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Common {
    /// JSON config file (keys: M, N, q, B_T, omega_per_m, mass_kg, mu_J_per_T, seed, samples).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of lattice cycles in the box [0, Mπ]; must be odd.
    #[arg(long = "M")]
    pub cycles: Option<usize>,
    /// Dimensionless coupling q = mμB/(ħ²ω²); replaces any SI parameters.
    #[arg(long)]
    pub q: Option<f64>,
    /// Output file; a manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Eigenvalue convergence tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Worker threads (never changes results).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BandsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub n_bands: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GapScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub param: ParamArg,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct StateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of particles; must be odd.
    #[arg(long = "N")]
    pub particles: Option<usize>,
    /// Grid points over [0, Mπ].
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Admit even N (the mapped Bose state is then not the ground state of the
    /// periodic problem); meant for oracle comparisons.
    #[arg(long)]
    pub allow_even_n: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct McArgs {
    /// Monte Carlo samples.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Monte Carlo seed; TG_SEED overrides the config file.
    #[arg(long, env = "TG_SEED")]
    pub seed: Option<u64>,
    /// Quadrature panels for --method oracle (default: the smallest multiple
    /// of grid − 1 that is at least 512).
    #[arg(long)]
    pub panels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, value_enum, default_value_t = StatisticsArg::Bose)]
    pub statistics: StatisticsArg,
    /// Default: mc for bose, closed for fermi.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// How to obtain the Bose density matrix.
    #[arg(long, value_enum, default_value_t = MethodArg::Mc)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded paths.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
