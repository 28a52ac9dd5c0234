use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ksrd::SolverConfig;

use crate::record::Algorithm;

#[derive(Debug, Parser)]
#[command(name = "ksrd", version, about = "k-strong Roman domination solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and print one JSON record per run
    Solve(SolveArgs),
    /// Check a labeling; exit status 0 if feasible, 1 if not
    Verify(VerifyArgs),
    /// Generate an instance file
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a manifest of instances and print a CSV summary table
    Bench(BenchArgs),
}

/// Search parameters shared by `solve` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1)]
    pub rmin: usize,
    #[arg(long, default_value_t = 10)]
    pub rmax: usize,
    #[arg(long, default_value_t = 0.5)]
    pub move_prob: f64,
    #[arg(long, default_value_t = 100)]
    pub cutoff: u64,
    #[arg(long, default_value_t = 10)]
    pub tries: u32,
    /// Use every k-subset as an attack while C(n, k) is below this bound
    #[arg(long, default_value_t = ksrd::attacks::DEFAULT_TAKE_ALL_BOUND)]
    pub attack_bound: u64,
    /// Ball radius for the intense attack set
    #[arg(long, default_value_t = ksrd::attacks::DEFAULT_BALL_RADIUS)]
    pub ball_radius: usize,
}

impl Default for SearchArgs {
    fn default() -> Self {
        let d = SolverConfig::new(2);
        SearchArgs {
            rmin: d.r_min,
            rmax: d.r_max,
            move_prob: d.move_prob,
            cutoff: d.cutoff,
            tries: d.tries,
            attack_bound: d.comb_take_all_bound,
            ball_radius: d.ball_radius,
        }
    }
}

impl SearchArgs {
    pub fn config(&self, k: usize, seed: u64, t_max: f64, iter_max: u64) -> SolverConfig {
        SolverConfig {
            k,
            r_min: self.rmin,
            r_max: self.rmax,
            move_prob: self.move_prob,
            cutoff: self.cutoff,
            tries: self.tries,
            comb_take_all_bound: self.attack_bound,
            ball_radius: self.ball_radius,
            t_max,
            iter_max,
            seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Algorithm::Vns)]
    pub algo: Algorithm,
    /// Seed of the first run; run i uses seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Seconds per run [default: 300 / 600 / 1200 by instance size]
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: u64,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Append a summary line (mean objective, sigma %, mean time to best)
    #[arg(long)]
    pub summary: bool,
    /// Log incumbent improvements to stderr
    #[arg(short, long)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exact,
    Quasi,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Labels inline ("1,0,2,1,1") or a file containing them
    #[arg(long)]
    pub labels: String,
    #[arg(long, value_enum, default_value_t = VerifyMode::Exact)]
    pub mode: VerifyMode,
    /// Seed of the roulette streams in quasi mode
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub cutoff: u64,
    #[arg(long, default_value_t = 10)]
    pub tries: u32,
    #[arg(long, default_value_t = ksrd::attacks::DEFAULT_TAKE_ALL_BOUND)]
    pub attack_bound: u64,
    #[arg(long, default_value_t = ksrd::attacks::DEFAULT_BALL_RADIUS)]
    pub ball_radius: usize,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Random unit disc graph in the unit square
    UnitDisc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file [default: stdout]
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Queen adjacency graph of the polygons in a GeoJSON FeatureCollection
    FromGeojson {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Feature property holding the region id [default: feature index]
        #[arg(long)]
        id_property: Option<String>,
        /// Output file [default: stdout]
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Node-to-region CSV [default: <output>.regions.csv when --output is set]
        #[arg(long)]
        regions: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// CSV with columns instance,k,runs,time_limit and optional algo,max_iters
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Output file [default: stdout]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}
