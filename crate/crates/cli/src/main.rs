use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Competing growth simulations, phase scans and blocking certificates.
///
/// Exit status: 0 on success, 1 on errors (bad config, I/O, failed fit),
/// 2 when a certificate check fails. GROWTHLAB_THREADS caps the number of
/// worker threads; RUST_LOG controls log output.
#[derive(Debug, Parser)]
#[command(name = "growthlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation to fixation; write an image and a CSV summary row.
    Simulate(SimulateArgs),
    /// Sweep a (p, a) grid, write one CSV row per cell and fit the phase exponent.
    PhaseScan(PhaseScanArgs),
    /// Build a blocking scaffold and check its protection certificate with the engine.
    BlockingVerify(BlockingArgs),
    /// Print the continuum recurrence and the canonical breakthrough time.
    Continuum(ContinuumArgs),
    /// Sample red-wins configurations and verify the origin with the engine.
    RedCert(RedCertArgs),
    /// Origin fate for blue, red and green.
    ThreeColor(ThreeColorArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML config with a [model] section.
    pub config: PathBuf,
    /// Binary PPM of the final configuration.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV file to append a summary row to.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Overrides the model seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pixels per site; defaults to [render] scale, else 1.
    #[arg(long)]
    pub scale: Option<u32>,
    /// Horizon in ticks; defaults to 4 (width + height) updates of the slowest species.
    #[arg(long)]
    pub horizon: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PhaseScanArgs {
    /// TOML config with an [experiment] section.
    #[arg(required_unless_present = "self_test")]
    pub config: Option<PathBuf>,
    /// Output CSV. Cells already present are skipped, so reruns resume.
    #[arg(long, required_unless_present = "self_test")]
    pub out: Option<PathBuf>,
    /// Fit planted logistic data with exponent 3/2 instead of simulating.
    #[arg(long)]
    pub self_test: bool,
    /// Skip the exponent fit.
    #[arg(long)]
    pub no_fit: bool,
}

#[derive(Debug, Args)]
pub struct BlockingArgs {
    /// Blue density.
    #[arg(long, default_value_t = 0.01)]
    pub p: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.75)]
    pub alpha_bar: f64,
    /// Boxes per layer.
    #[arg(long, default_value_t = 5)]
    pub m: u32,
    /// Red update period, integer or "num/den".
    #[arg(long, default_value = "1")]
    pub r: String,
    /// Red L1 range.
    #[arg(long, default_value_t = 1)]
    pub rho: u32,
    /// Top layer; defaults to ceil(ln(1/p) / ln(lambda)).
    #[arg(long)]
    pub ell_max: Option<usize>,
    /// The axis segment [-C/p, C/p] x {0} must stay red-free through time C/p.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Static blue: one crossing row segment per box, no growth.
    #[arg(long = "static")]
    pub static_blue: bool,
    /// Seed for placing the blue sites.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Empty the activation region of box LAYER:INDEX.
    #[arg(long, value_name = "LAYER:INDEX")]
    pub sabotage: Option<String>,
    /// Use the brute-force reference engine.
    #[arg(long)]
    pub reference: bool,
    /// PPM of the simulated domain with box outlines (row 0 at the top).
    #[arg(long)]
    pub image: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub scale: u32,
}

#[derive(Debug, Args)]
pub struct ContinuumArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.5)]
    pub alpha_bar: f64,
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    #[arg(long, default_value_t = 10)]
    pub layers: usize,
}

#[derive(Debug, Args)]
pub struct RedCertArgs {
    #[arg(long, default_value_t = 0.01)]
    pub p: f64,
    /// Red density as q = a p^(1 + rho/(rho+1)).
    #[arg(long, default_value_t = 25.0, conflicts_with = "q")]
    pub a: f64,
    /// Red density, overriding --a.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, default_value = "1")]
    pub r: String,
    #[arg(long, default_value_t = 1)]
    pub tau: u32,
    #[arg(long, default_value_t = 1)]
    pub rho: u32,
    /// Number of sampled configurations.
    #[arg(long, default_value_t = 500)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ThreeColorArgs {
    #[arg(long, default_value_t = 0.001)]
    pub pb: f64,
    #[arg(long, default_value_t = 0.001)]
    pub pr: f64,
    #[arg(long, default_value_t = 0.002)]
    pub pg: f64,
    /// B = {e1}, R = {e2} instead of {±e1}, {±e2}.
    #[arg(long)]
    pub directed: bool,
    /// Torus side.
    #[arg(long = "side", default_value_t = 400)]
    pub l: usize,
    #[arg(long, default_value_t = 20)]
    pub replicates: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// PPM of the first replicate.
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Check that every forever-empty component is a rectangle (exit 2 if not).
    #[arg(long)]
    pub rectangles: bool,
}

/// What a successful run concluded.
pub enum Outcome {
    Pass,
    CertificateFailed,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = growthlab::harness::configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match commands::run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CertificateFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
