use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use topling::config::RunConfig;
use topling::error::{CliError, Result};
use topling::pipeline::{self, Command};

#[derive(Parser)]
#[command(name = "topling", version, about = "Persistent topology of feature matrices")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Vietoris-Rips barcodes, a barcode diagram and 1-skeleton graphs.
    Ph(Flags),
    /// Persistent-components tree, cluster list and singleton profile.
    Tree(Flags),
    /// Intrinsic-dimension profile against ball and sphere references.
    Dim(Flags),
    /// Per-point density estimate.
    Density(Flags),
    /// Locate a generator of the most significant H1 interval.
    H1(Flags),
    /// Barcodes and localisation for a seeded random binary matrix.
    Baseline(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Key = value file read before the flags are applied.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<String>,
    /// binary, ternary or real.
    #[arg(long)]
    schema: Option<String>,
    /// Minimum mapped fraction for a row to survive filtering.
    #[arg(long)]
    threshold: Option<String>,
    /// filter or fill.
    #[arg(long)]
    missing: Option<String>,
    #[arg(long)]
    transpose: bool,
    /// Retained-variance fraction, or "off" for raw coordinates.
    #[arg(long)]
    pca: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long = "max-dim")]
    max_dim: Option<String>,
    #[arg(long = "snap-grid")]
    snap_grid: bool,
    /// Largest filtration value; "auto" is the enclosing radius.
    #[arg(long)]
    cutoff: Option<String>,
    /// Comma-separated radii for skeleton graphs.
    #[arg(long)]
    radii: Option<String>,
    #[arg(long = "simplex-limit")]
    simplex_limit: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    fmax: Option<String>,
    #[arg(long = "min-persistence")]
    min_persistence: Option<String>,
    #[arg(long = "max-cycle-len")]
    max_cycle_len: Option<String>,
    #[arg(long = "cycle-cap")]
    cycle_cap: Option<String>,
    /// Extra removal groups of point names: "A,B;C,D".
    #[arg(long)]
    groups: Option<String>,
    /// Newick file to compare the components tree with.
    #[arg(long = "ref-tree")]
    ref_tree: Option<String>,
    #[arg(long = "baseline-rows")]
    baseline_rows: Option<String>,
    #[arg(long = "baseline-cols")]
    baseline_cols: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => pipeline::read_config(path)?.0,
            None => RunConfig::default(),
        };
        let pairs = [
            ("input", &self.input),
            ("schema", &self.schema),
            ("threshold", &self.threshold),
            ("missing", &self.missing),
            ("pca", &self.pca),
            ("steps", &self.steps),
            ("max_dim", &self.max_dim),
            ("cutoff", &self.cutoff),
            ("radii", &self.radii),
            ("simplex_limit", &self.simplex_limit),
            ("alpha", &self.alpha),
            ("s", &self.s),
            ("fmax", &self.fmax),
            ("min_persistence", &self.min_persistence),
            ("max_cycle_len", &self.max_cycle_len),
            ("cycle_cap", &self.cycle_cap),
            ("groups", &self.groups),
            ("ref_tree", &self.ref_tree),
            ("baseline_rows", &self.baseline_rows),
            ("baseline_cols", &self.baseline_cols),
            ("seed", &self.seed),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.transpose {
            cfg.transpose = true;
        }
        if self.snap_grid {
            cfg.snap_grid = true;
        }
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (cmd, flags) = match cli.command {
        Sub::Ph(f) => (Command::Ph, f),
        Sub::Tree(f) => (Command::Tree, f),
        Sub::Dim(f) => (Command::Dim, f),
        Sub::Density(f) => (Command::Density, f),
        Sub::H1(f) => (Command::H1, f),
        Sub::Baseline(f) => (Command::Baseline, f),
    };
    let cfg = flags.resolve()?;
    for path in pipeline::run(&cfg, cmd)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Config(e.to_string().lines().next().unwrap_or("bad arguments").to_string());
            eprintln!("{}", err.to_line());
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
