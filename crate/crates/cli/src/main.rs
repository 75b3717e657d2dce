//! `rauzy`: command-line front end for β-numeration with Pisot bases.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Settings;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    NotPisot(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    NoPlottableAxes(String),
    /// Carries the full report, which is still printed.
    #[error("CONFLICT between exact and geometric verdicts")]
    Conflict(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::NotPisot(_) => 2,
            CliError::Parse(_) => 3,
            CliError::NoPlottableAxes(_) => 4,
            CliError::Conflict(_) => 5,
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "rauzy", version, about = "β-expansions, Rauzy fractals and purely periodic points for Pisot bases")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Every option is also a key of the config file (dashes become
/// underscores); flags take precedence.
#[derive(Args, Debug)]
struct GlobalArgs {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Minimal polynomial coefficients, constant term first, e.g. "-1 -1 1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    field: Option<String>,
    /// File holding the minimal polynomial coefficients.
    #[arg(long, global = true)]
    field_file: Option<String>,
    #[arg(long, global = true)]
    eps: Option<String>,
    #[arg(long, global = true)]
    padic_digits: Option<String>,
    /// IFS depth for render and measure.
    #[arg(long, global = true)]
    depth: Option<String>,
    /// Starting depth of the membership search.
    #[arg(long, global = true)]
    membership_depth: Option<String>,
    /// Shrink factor of the cylinder diameter used to confirm `In`.
    #[arg(long, global = true)]
    confirm_shrink: Option<String>,
    #[arg(long, global = true)]
    node_budget: Option<String>,
    #[arg(long, global = true)]
    max_depth: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    workers: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// d_β(1), d*_β(1) and the Parry type.
    Classify,
    /// The automaton M_β as a graph file, its incidence matrix and
    /// characteristic polynomial.
    Automaton,
    /// The β-substitution listing.
    Substitution,
    /// Shaded raster and point cloud of the Rauzy fractal.
    Render {
        /// Draw the two-sided set (−R(i)) × [0, h_i).
        #[arg(long)]
        two_sided: bool,
        /// Two axes, e.g. "re[0],im[0]".
        #[arg(long)]
        axes: Option<String>,
        /// Raster side in pixels.
        #[arg(long)]
        size: Option<String>,
        /// Draw only this piece (numbered from 1).
        #[arg(long)]
        piece: Option<usize>,
    },
    /// Both pure-periodicity deciders on one element of [0, 1).
    Decide {
        /// "p/q", an integer, or "c0,c1,…/D" in powers of β.
        x: String,
    },
    /// Both deciders on every reduced p/q with q ≤ Q.
    Crosscheck {
        #[arg(long = "q")]
        q: Option<String>,
        /// Additional seeded random elements of Q(β).
        #[arg(long)]
        extra: Option<String>,
    },
    /// Commutation relations of the natural extension on seeded samples.
    Commutation {
        #[arg(long)]
        samples: Option<String>,
        #[arg(long)]
        left_len: Option<String>,
    },
    /// Box-counting measures of the pieces and the Perron eigenvector.
    Measure {
        /// Box side, a decimal or "a/b".
        #[arg(long)]
        resolution: Option<String>,
    },
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let g = &cli.global;
    let mut s = Settings::from_file(g.config.as_ref())?;
    if g.field.is_some() || g.field_file.is_some() {
        s.0.remove("field");
        s.0.remove("field_file");
    }
    for (k, v) in [
        ("field", &g.field),
        ("field_file", &g.field_file),
        ("eps", &g.eps),
        ("padic_digits", &g.padic_digits),
        ("depth", &g.depth),
        ("membership_depth", &g.membership_depth),
        ("confirm_shrink", &g.confirm_shrink),
        ("node_budget", &g.node_budget),
        ("max_depth", &g.max_depth),
        ("out", &g.out),
        ("workers", &g.workers),
        ("seed", &g.seed),
    ] {
        s.set(k, v.clone());
    }
    match &cli.command {
        Command::Render { axes, size, .. } => {
            s.set("axes", axes.clone());
            s.set("size", size.clone());
        }
        Command::Crosscheck { q, extra } => {
            s.set("q", q.clone());
            s.set("extra", extra.clone());
        }
        Command::Commutation { samples, left_len } => {
            s.set("samples", samples.clone());
            s.set("left_len", left_len.clone());
        }
        Command::Measure { resolution } => s.set("resolution", resolution.clone()),
        _ => {}
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let s = settings(cli)?;
    let cfg = s.resolve()?;
    if cfg.workers > 0 {
        // an already-initialised pool is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();
    }
    match &cli.command {
        Command::Classify => commands::classify(&cfg),
        Command::Automaton => commands::automaton(&cfg),
        Command::Substitution => commands::substitution(&cfg),
        Command::Render { two_sided, piece, .. } => commands::render(&cfg, *two_sided, s.get_str("axes"), *piece),
        Command::Decide { x } => commands::decide(&cfg, x),
        Command::Crosscheck { .. } => commands::crosscheck(&cfg),
        Command::Commutation { .. } => commands::commutation(&cfg),
        Command::Measure { .. } => commands::measure(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Conflict(text) = &e {
                print!("{text}");
            }
            eprintln!("rauzy: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
