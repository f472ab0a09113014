use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Environment variable holding the default output root.
pub const OUT_ENV: &str = "HAVQDS_OUT";

#[derive(Debug, Parser)]
#[command(name = "havqds", version, about = "Hybrid variational annealing benchmarks on SK spin glasses")]
pub struct Cli {
    /// Output root; each experiment writes into its own subdirectory.
    #[arg(long, global = true, env = OUT_ENV, default_value = "results")]
    pub out: PathBuf,

    /// Independent runs executed concurrently [default: 1, or the manifest's value for rerun].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub parallelism: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Sample SK instances and save them as JSON.
    Instance(InstanceArgs),
    /// Trotterized AD/CD baselines over an (n, T, seed) grid.
    Trotter(TrotterArgs),
    /// HAVQDS and AVQDS-only runs over an (n, T, seed) grid.
    Havqds(HavqdsArgs),
    /// Lowest instantaneous levels E0..E4 of H_AD(s) on a uniform s grid.
    Spectrum(SpectrumArgs),
    /// Aggregate summary CSVs into mean and standard deviation tables.
    Report(ReportArgs),
    /// Replay the command recorded in a manifest.
    #[serde(skip)]
    Rerun(RerunArgs),
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct InstanceArgs {
    /// Register sizes: `8`, `6,8`, `6..14` or `6..14:2`.
    #[arg(long)]
    pub n: String,
    /// Seed count `N` (seeds 0..N-1), or explicit seeds `3..7` / `1,4`.
    #[arg(long, default_value = "10")]
    pub seeds: String,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TrotterArgs {
    #[arg(long)]
    pub n: String,
    /// Total times: `1`, `1,5,10` or `2..10:2`.
    #[arg(long = "T")]
    pub t: String,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value = "10")]
    pub seeds: String,
    /// Protocols to run.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [ProtocolArg::Ad, ProtocolArg::Cd])]
    pub protocol: Vec<ProtocolArg>,
    /// Write only the final state of each run instead of every step.
    #[arg(long)]
    pub final_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum ProtocolArg {
    #[value(name = "AD", alias = "ad")]
    Ad,
    #[value(name = "CD", alias = "cd")]
    Cd,
}

impl From<ProtocolArg> for havqds_core::Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Ad => havqds_core::Protocol::Ad,
            ProtocolArg::Cd => havqds_core::Protocol::Cd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Havqds,
    Avqds,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Havqds => "havqds",
            Variant::Avqds => "avqds",
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct HavqdsArgs {
    #[arg(long)]
    pub n: String,
    #[arg(long = "T")]
    pub t: String,
    #[arg(long, default_value = "10")]
    pub seeds: String,
    /// Real-time step.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Imaginary-time step.
    #[arg(long, default_value_t = 0.05)]
    pub dtau: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta_cut: f64,
    /// Variance threshold that triggers filtering.
    #[arg(long, default_value_t = 0.05)]
    pub eps_var: f64,
    /// Imaginary-time steps allowed per filtering block.
    #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u64).range(1..))]
    pub k_max: u64,
    /// Tikhonov regularization of the linear solves.
    #[arg(long, default_value_t = 1e-6)]
    pub lambda: f64,
    /// Ansatz size cap.
    #[arg(long, default_value_t = 500)]
    pub max_generators: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Variant::Havqds])]
    pub variant: Vec<Variant>,
    /// Compute the approximation ratio only at t = T (much faster for large n).
    #[arg(long)]
    pub final_ratio_only: bool,
    /// Also write final amplitudes as `<run>.amp` binary dumps.
    #[arg(long)]
    pub dump_amplitudes: bool,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value = "10")]
    pub seeds: String,
    /// Number of s points, including both endpoints.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: u64,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    /// Directory holding experiment subdirectories [default: the output root].
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct RerunArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
}
