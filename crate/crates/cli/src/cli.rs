use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "graphsw", version, about = "Distributed compression of marked random graphs")]
pub struct Cli {
    /// Root seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; JSON by default, CSV by default for sweeps.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for Monte Carlo loops (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one jointly marked graph from a model.
    Sample(SampleArgs),
    /// BC entropies and limit degrees of a model; `--sweep` tabulates exact Shannon growth.
    Entropy(EntropyArgs),
    /// Test a rate tuple against the achievable region.
    RateRegion(RateRegionArgs),
    /// Monte Carlo run of the random-binning codec.
    CodecSim(CodecSimArgs),
    /// Empirical neighborhood laws against their local weak limit.
    LwcDist(LwcArgs),
    /// Run the oracle suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// Model configuration file.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// `n=START:END:log` (decades) or `n=START:END:STEP`.
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Args)]
pub struct RateRegionArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// `alpha1,R1,alpha2,R2`.
    #[arg(long)]
    pub tuple: String,
}

#[derive(Debug, Args)]
pub struct CodecSimArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// `alpha1,R1,alpha2,R2`; only the R coordinates size the bins.
    #[arg(long)]
    pub tuple: String,
    /// Seed of the binning keys; defaults to `--seed`.
    #[arg(long)]
    pub binning_seed: Option<u64>,
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Args)]
pub struct LwcArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub depth: u32,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Galton–Watson samples for the limit law when no exact form exists.
    #[arg(long, default_value_t = 100_000)]
    pub limit_samples: usize,
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
}
