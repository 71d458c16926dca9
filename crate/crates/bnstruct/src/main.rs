use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bnstruct::commands::{cmd_average, cmd_compare, cmd_learn, cmd_select, cmd_simulate};
use bnstruct::config::{Overrides, PipelineConfig};
use bnstruct::error::{read_file, Error, Result};
use bnstruct::network::write_network;
use bnstruct::tsv::read_averaged;
use bnstruct_core::averaging::{Algorithm, STRENGTH_CUTOFF};
use bnstruct_core::benchmarks;

/// Discrete Bayesian-network structure discovery.
#[derive(Parser)]
#[command(name = "bnstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank features by mutual information with the target.
    Select {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Write the ranking TSV here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Learn one structure from the full dataset.
    Learn {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Edge-list TSV output.
        #[arg(long)]
        edges: Option<PathBuf>,
        /// DOT output; printed to stdout when neither output is given.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Bootstrap model averaging with confidence bands.
    Average {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Edge-strength TSV output; printed to stdout when neither output
        /// is given.
        #[arg(long)]
        tsv: Option<PathBuf>,
        /// Banded DOT output.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compare two edge-strength TSVs.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = STRENGTH_CUTOFF)]
        strength_cutoff: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Draw samples from a network file as CSV.
    Simulate {
        /// Network definition (TOML).
        #[arg(required_unless_present = "benchmark", conflicts_with = "benchmark")]
        network: Option<PathBuf>,
        /// Use a built-in network: chain, collider or tiered.
        #[arg(long)]
        benchmark: Option<String>,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PipelineArgs {
    /// Experiment config (TOML).
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    target: Option<String>,
    /// pc-stable or inter-iamb.
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    replicates: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    max_condition_size: Option<usize>,
    /// Learn on every column instead of the selected features.
    #[arg(long)]
    no_select: bool,
    #[arg(long)]
    selection_fraction: Option<f64>,
    #[arg(long)]
    strength_cutoff: Option<f64>,
    #[arg(long)]
    direction_cutoff: Option<f64>,
}

impl PipelineArgs {
    fn resolve(self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        cfg.apply(Overrides {
            input: self.input,
            target: self.target,
            algorithm: self.algorithm,
            alpha: self.alpha,
            replicates: self.replicates,
            master_seed: self.seed,
            workers: self.workers,
            max_condition_size: self.max_condition_size,
            select: self.no_select.then_some(false),
            selection_fraction: self.selection_fraction,
            strength_cutoff: self.strength_cutoff,
            direction_cutoff: self.direction_cutoff,
        });
        cfg.validate("command line")?;
        Ok(cfg)
    }
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_out(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Select { pipeline, out } => {
            emit(out.as_deref(), &cmd_select(&pipeline.resolve()?)?)
        }
        Command::Learn {
            pipeline,
            edges,
            dot,
        } => {
            let o = cmd_learn(&pipeline.resolve()?)?;
            if let Some(p) = &edges {
                write_out(p, &o.edges_tsv)?;
            }
            if dot.is_some() || edges.is_none() {
                emit(dot.as_deref(), &o.dot)?;
            }
            Ok(())
        }
        Command::Average { pipeline, tsv, dot } => {
            let o = cmd_average(&pipeline.resolve()?)?;
            if tsv.is_some() || dot.is_none() {
                emit(tsv.as_deref(), &o.tsv)?;
            }
            if let Some(p) = &dot {
                write_out(p, &o.dot)?;
            }
            Ok(())
        }
        Command::Compare {
            a,
            b,
            strength_cutoff,
            out,
        } => {
            if !(strength_cutoff > 0.0 && strength_cutoff < 1.0) {
                return Err(Error::config(
                    "command line",
                    "strength cutoff must lie in (0, 1)",
                ));
            }
            let ra = read_averaged(&read_file(&a)?, &a.display().to_string())?;
            let rb = read_averaged(&read_file(&b)?, &b.display().to_string())?;
            emit(
                out.as_deref(),
                &cmd_compare(&ra, &rb, strength_cutoff).to_text(),
            )
        }
        Command::Simulate {
            network,
            benchmark,
            n,
            seed,
            out,
        } => {
            let (text, source) = match (network, benchmark) {
                (Some(p), _) => (read_file(&p)?, p.display().to_string()),
                (None, Some(name)) => {
                    let bn = match name.as_str() {
                        "chain" => benchmarks::chain(),
                        "collider" => benchmarks::collider(),
                        "tiered" => benchmarks::tiered(),
                        other => {
                            return Err(Error::config(
                                "command line",
                                format!("unknown benchmark `{other}`"),
                            ));
                        }
                    };
                    (write_network(&bn), name)
                }
                (None, None) => unreachable!("clap requires one of the two"),
            };
            emit(out.as_deref(), &cmd_simulate(&text, &source, n, seed)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
