//! `tupper`: encode, decode, evaluate and plot generalized Tupper graphs.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status for an internal invariant violation: evaluator disagreement
/// or a failed round-trip.
const EXIT_INVARIANT: u8 = 2;
/// Exit status for bad input, bad flags or unreadable files.
const EXIT_INPUT: u8 = 1;

#[derive(Parser)]
#[command(name = "tupper", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Grid extents A_1,...,A_n.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<u32>>,
    /// Number of colors m.
    #[arg(long)]
    colors: Option<u32>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EvaluatorArg {
    Fast,
    Literal,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DecodeFormat {
    /// NVOX voxel container.
    Voxel,
    /// Binary pixmap (P6).
    Ppm,
    /// Binary bitmap (P4); needs a black and white palette.
    Pbm,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an image or voxel container into k.
    Encode {
        /// Anymap image (P1/P3/P4/P6) or NVOX container.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        palette: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        /// Write k here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write k in hexadecimal.
        #[arg(long)]
        hex: bool,
    },
    /// Decode k into the object it plots.
    Decode {
        /// File holding k, or "-" for standard input.
        #[arg(long)]
        k: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        palette: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        /// Output format; voxel for n > 2, ppm otherwise.
        #[arg(long, value_enum)]
        format: Option<DecodeFormat>,
        /// Also write a pixmap of a 2-dimensional result here.
        #[arg(long)]
        raster: Option<PathBuf>,
        /// Paint the smallest color of multi-color cells instead of failing.
        #[arg(long)]
        layered: bool,
    },
    /// Evaluate f_i literally at one point.
    Eval {
        #[arg(long)]
        k: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Coordinates x_1,...,x_n as terminating binary decimals, e.g. 0.5,6.5.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<String>,
        /// Color index i.
        #[arg(long)]
        color: u32,
        /// Cross-check against the bit-test decoder.
        #[arg(long)]
        fast: bool,
    },
    /// Plot k as an image (n = 2) or a planar slice (n > 2).
    Render {
        #[arg(long)]
        k: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        palette: Option<PathBuf>,
        /// Pixels per cell.
        #[arg(long, default_value_t = 1)]
        scale: usize,
        /// Fixed axes for n > 2, e.g. "x2=1" or "x3=0,x4=2".
        #[arg(long, default_value = "")]
        slice: String,
        #[arg(long, value_enum, default_value_t = EvaluatorArg::Fast)]
        evaluator: EvaluatorArg,
        #[arg(long)]
        layered: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Encode and decode many fields, comparing both decoders.
    Verify(verify::VerifyArgs),
    /// Encode a 106x17 black and white image with the classic formula.
    ClassicEncode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        hex: bool,
    },
    /// Decode k into a 106x17 bitmap by bit tests.
    ClassicDecode {
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Plot the classic formula at height k.
    ClassicRender {
        #[arg(long)]
        k: PathBuf,
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<commands::InvariantViolation>().is_some() {
                ExitCode::from(EXIT_INVARIANT)
            } else {
                ExitCode::from(EXIT_INPUT)
            }
        }
    }
}
