//! `abca-lab`: experiments on abelian cellular automata.

mod commands;
mod load;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "abca-lab", version)]
#[command(about = "Exact experiments on abelian cellular automata: character diffusion, measure evolution, solitons")]
struct Cli {
    /// Automaton: a builtin name (add2, F2, H2, Fp:<p>, Gp:<p>, IG:<orders>, IGn:<orders>:<n>, ...) or a JSON path.
    #[arg(long, global = true, default_value = "add2")]
    ca: String,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group, neighbourhood, structural flags and the dual automaton.
    Describe,

    /// rank(chi . F^t) for t = 0..=T, with Fourier coefficients when a measure is given.
    RankTrace {
        /// Character configuration, e.g. `0:(1,0)(0,1)` or `trivial`.
        #[arg(long = "char")]
        character: String,
        #[arg(long = "T", default_value_t = 64)]
        horizon: u64,
        #[arg(long)]
        measure: Option<String>,
    },

    /// Evolved cylinder distributions on a window and the truncated distance to uniform.
    Measure {
        /// `uniform`, `bernoulli:w0,w1,..`, `zero-biased:p0`, `markov:r0;r1;..` or a JSON path.
        #[arg(long)]
        measure: String,
        #[arg(long, default_value = "0:0")]
        window: String,
        #[arg(long = "T", default_value_t = 32)]
        horizon: u64,
        /// Truncation level of the distance to uniform.
        #[arg(long = "K", default_value_t = 0)]
        truncation: usize,
        /// Also report the evolved coefficient of this character with Cesaro statistics.
        #[arg(long = "char")]
        character: Option<String>,
        /// Coefficient magnitude counted as small in the density statistic.
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
    },

    /// Search for a soliton within a budget.
    Soliton {
        /// Maximal width, period and |shift|: `w,p,q`.
        #[arg(long, default_value = "4,4,4")]
        budget: String,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Run the same search on the dual automaton as well.
        #[arg(long)]
        dual: bool,
    },

    /// Randomization verdict for automata with commuting coefficients.
    Decide,

    /// Dependency counts d(t), bijective counts and s_k(t).
    Deps {
        #[arg(long = "T", default_value_t = 50)]
        horizon: usize,
        /// Largest isolation level k reported.
        #[arg(long, default_value_t = 2)]
        max_k: usize,
    },

    /// Finite fixed points supported on a window of the given width.
    Fixed {
        #[arg(long, default_value_t = 4)]
        width: usize,
    },

    /// Space-time diagram of a finite configuration, with repeat-up-to-shift detection.
    Orbit {
        #[arg(long)]
        init: String,
        #[arg(long = "T", default_value_t = 32)]
        horizon: u64,
    },

    /// Rank traces of random finite seeds.
    Probe {
        /// Number of random seeds.
        #[arg(long, default_value_t = 8)]
        seeds: usize,
        /// Width of each random seed.
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long = "T", default_value_t = 255)]
        horizon: u64,
        /// Largest rank threshold m for the fraction of times with rank >= m.
        #[arg(long, default_value_t = 8)]
        rank_cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use abca_core::Error;
    match err.downcast_ref::<Error>() {
        Some(
            Error::Parse(_)
            | Error::InvalidGroup(_)
            | Error::InvalidElement(_)
            | Error::InvalidEndomorphism(_)
            | Error::InvalidMeasure(_)
            | Error::SpecMismatch { .. },
        ) => 2,
        Some(Error::CapacityExceeded(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
