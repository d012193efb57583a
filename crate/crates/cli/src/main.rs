mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "flatcensus", version, about = "Censuses of flat surfaces, cusps and Markov partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "jsonl")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Irreducible d×d matrices with Perron root below T.
    EnumMatrices {
        #[arg(short = 'p', long = "dim")]
        dim: usize,
        #[arg(short = 'T')]
        threshold: String,
        /// Only matrices with all entries positive.
        #[arg(long)]
        positive: bool,
        /// Compare against the brute-force scan.
        #[arg(long)]
        oracle: bool,
    },
    /// Cusp data (A, D) with λ(DA) < T, their gluing patterns and surfaces.
    EnumCusps {
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'T')]
        threshold: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Gluing patterns of a symmetric matrix, up to relabeling.
    EnumGluings {
        /// Matrix as JSON rows, e.g. [[1,1],[1,1]].
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Matrices for Markov partitions with p rectangles and λ < T.
    EnumPa {
        #[arg(short = 'p')]
        p: usize,
        #[arg(short = 'T')]
        threshold: String,
        #[arg(long)]
        positive: bool,
        /// A gluing graph (JSON file) to reconstruct surfaces from.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        oracle: bool,
    },
    /// Stratum, cylinders and cusp data of a surface file.
    SurfaceInfo { file: PathBuf },
    /// Markov partition for an affine automorphism of an origami.
    Markov {
        /// Origami JSON file with sigma_h and sigma_v.
        #[arg(long)]
        origami: PathBuf,
        /// Derivative as JSON rows, e.g. [[2,1],[1,1]].
        #[arg(long)]
        matrix: String,
        /// Skip the ξ and η refinements.
        #[arg(long)]
        no_refine: bool,
    },
    /// Fuchsian group computations.
    Hyp {
        #[command(subcommand)]
        tool: HypTool,
    },
    /// SVG drawing of a surface file.
    Render { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum HypTool {
    /// t₀ over the SL(2,ℤ) double coset representatives with |c| ≤ bound,
    /// certified when t₀ does not exceed the bound.
    CuspArea {
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Trace of [h_t R h_{-t}, h_{-t} R h_t] for the rotation (cos, sin).
    Commutator {
        #[arg(short = 't')]
        t: String,
        /// Rational parameter u of the rotation ((1−u²)/(1+u²), 2u/(1+u²)).
        #[arg(long, conflicts_with_all = ["cos", "sin"])]
        param: Option<String>,
        #[arg(long, requires = "sin")]
        cos: Option<String>,
        #[arg(long, requires = "cos")]
        sin: Option<String>,
    },
    /// Least cosh distance from a fixed point to sample points.
    Cone {
        /// JSON point {"x": .., "y": ..}.
        #[arg(long)]
        fixed: String,
        /// JSON array of points.
        #[arg(long)]
        points: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.common.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli.command, &cli.common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(record)) => {
            let mut w = match output::open(cli.common.out.as_deref()) {
                Ok(w) => w,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let _ = output::write_jsonl(&mut *w, &[record]).and_then(|_| w.flush());
            ExitCode::from(2)
        }
    }
}
