//! `memristive`: command-line front end for the simulation library.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 when the data or a
//! numerical procedure fails.

// `!(x > 0.0)` is deliberate throughout: it rejects NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod meta;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "memristive", version, about = "Memristor device, circuit-block and pipeline simulations")]
struct Cli {
    /// Device profile: a built-in name or a path to a key = value profile file.
    #[arg(long, global = true, env = "MEMRISTIVE_PROFILE")]
    profile: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one device under a drive waveform and write t,v,i,x,M as CSV.
    DeviceSweep(DeviceSweepArgs),
    /// Program a bridge synapse to a target weight, or read one back.
    #[command(subcommand)]
    Bridge(BridgeCommand),
    /// Run a 3x3 kernel over a PGM image.
    Kernel(KernelArgs),
    /// Train or evaluate the 9-2-2 breast cancer classifier.
    #[command(subcommand)]
    Ann(AnnCommand),
    /// Max or average pool a PGM image.
    Pool(PoolArgs),
    /// Sweep a circuit block over a DC input range and write input,output CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ideal,
    Bridge,
}

#[derive(Debug, Args)]
pub struct DeviceSweepArgs {
    /// `sine:AMP:FREQ`, `pulses:AMP:WIDTH:PERIOD` or `dc:LEVEL`.
    #[arg(long, default_value = "sine:1:1", conflicts_with = "drive")]
    pub waveform: String,
    /// Piecewise-linear drive read from a PWL file (or CSV when the name ends in .csv).
    #[arg(long)]
    pub drive: Option<PathBuf>,
    /// Simulated time for `--waveform`, in seconds.
    #[arg(long, default_value_t = 2.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Initial state as a fraction of the state range.
    #[arg(long, default_value_t = 0.1)]
    pub x0: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum BridgeCommand {
    /// Find the pulse that takes the bridge to `--target` and apply it.
    Program {
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
        /// Programming voltage magnitude.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Starting device states `x1,x2,x3,x4`; balanced when omitted.
        #[arg(long)]
        states: Option<String>,
        /// Write the weight report here instead of only printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report memristances and weight for the given device states.
    Read {
        #[arg(long)]
        states: String,
    },
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `blur`, `edge`, `identity`, `mean`, or nine inline weights like `"0,1,0;1,-4,1;0,1,0"`.
    #[arg(long, default_value = "edge", allow_hyphen_values = true)]
    pub kernel: String,
    #[arg(long, value_enum, default_value_t = Mode::Ideal)]
    pub mode: Mode,
    /// Voltage of a full-white pixel.
    #[arg(long, default_value_t = 1.5)]
    pub v_full: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum AnnCommand {
    /// Train, optionally quantize onto bridges, and write the model and split.
    Train {
        #[arg(long, default_value = "data/breast-cancer-wisconsin.data")]
        dataset: PathBuf,
        /// Seed of the 70/15/15 shuffle split.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Seed of the weight initialization.
        #[arg(long, default_value_t = 7)]
        init_seed: u64,
        #[arg(long, default_value = "relu")]
        activation: String,
        #[arg(long, default_value_t = 200)]
        epochs: usize,
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        /// `bridge` stores the network quantized onto bridge synapses.
        #[arg(long, value_enum, default_value_t = Mode::Ideal)]
        mode: Mode,
        /// Model file; the split goes to `<out>.split`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print per-split accuracy and confusion counts for a model file.
    Eval {
        #[arg(long, default_value = "data/breast-cancer-wisconsin.data")]
        dataset: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Evaluate the bridge-quantized copy of a float model.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolKindArg {
    Max,
    Avg,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = PoolKindArg::Max)]
    pub kind: PoolKindArg,
    #[arg(long, default_value_t = 2)]
    pub window: usize,
    #[arg(long, default_value_t = 2)]
    pub stride: usize,
    /// Diode threshold in volts for max pooling.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 1.5)]
    pub v_full: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Block {
    Relu,
    Tanh,
    Squarer,
    Divider,
    Multiplier,
    Maxpool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub block: Block,
    /// Sweep start in amperes (volts for maxpool); defaults depend on the block.
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Use the non-ideal block models, which drop points outside their operating range.
    #[arg(long)]
    pub nonideal: bool,
    /// ReLU saturation current.
    #[arg(long)]
    pub ceiling: Option<f64>,
    /// Second multiplier input, or the level of the other max-pool inputs.
    #[arg(long, allow_negative_numbers = true)]
    pub other: Option<f64>,
    /// Max-pool diode threshold in volts.
    #[arg(long, default_value_t = 0.7)]
    pub threshold: f64,
    /// Current that maps to tanh argument 1.
    #[arg(long, default_value_t = 1e-3)]
    pub unit: f64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Bad flag values found after parsing; these exit with status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let profile = cli.profile.as_deref();
    let result = match cli.command {
        Command::DeviceSweep(args) => commands::device_sweep(profile, &args),
        Command::Bridge(cmd) => commands::bridge(profile, &cmd),
        Command::Kernel(args) => commands::kernel(&args),
        Command::Ann(cmd) => commands::ann(profile, &cmd),
        Command::Pool(args) => commands::pool(&args),
        Command::Sweep(args) => commands::sweep(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
