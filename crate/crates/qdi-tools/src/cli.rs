//! Argument surface and the serializable run configuration embedded in
//! every artifact. The config never contains output paths, so re-running
//! it reproduces the artifact byte for byte wherever it is written.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "qdi",
    version,
    about = "Generate, simulate and verify quasi-delay-insensitive dual-rail adders"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an adder netlist and write it in the text format.
    Build(BuildArgs),
    /// Drive stimulus through a netlist's handshake fixture; write a trace CSV.
    Simulate(SimulateArgs),
    /// Measure several architectures side by side; write a comparison CSV.
    Compare(CompareArgs),
    /// Run the QDI property checkers; exit 0 only when everything is clean.
    Check(CheckArgs),
    /// Re-execute the run recorded in an artifact's embedded config.
    Rerun(RerunArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// rca, bcla, bclarc, hybrid (with --k) or hybrid:<k>
    #[arg(long)]
    pub arch: String,
    /// Ripple nibbles for hybrid
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub width: usize,
    /// rtz or rto
    #[arg(long, default_value = "rtz")]
    pub protocol: String,
    /// Output file; default <arch>-<width>-<protocol>.net in the out dir
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Netlist file in the text format
    #[arg(long)]
    pub netlist: String,
    /// rtz or rto; must match the file's protocol statement when both exist
    #[arg(long)]
    pub protocol: Option<String>,
    /// random:<n>, exhaustive, or file:<path>
    #[arg(long, default_value = "random:1000")]
    pub vectors: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// unit, or a delay table file
    #[arg(long, default_value = "unit")]
    pub delays: String,
    /// Fallback for kinds a delay file omits
    #[arg(long)]
    pub default_delay: Option<u32>,
    /// Trace CSV; default trace.csv in the out dir
    #[arg(long)]
    pub out: Option<String>,
    /// Also write a transition dump (<time> <net> <level> per line)
    #[arg(long)]
    pub dump: Option<String>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Comma-separated list, e.g. bcla,bclarc,hybrid:1
    #[arg(long)]
    pub archs: String,
    #[arg(long)]
    pub width: usize,
    #[arg(long, default_value = "rtz")]
    pub protocol: String,
    #[arg(long, default_value = "unit")]
    pub delays: String,
    #[arg(long)]
    pub default_delay: Option<u32>,
    /// Comparison CSV; default compare.csv in the out dir
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Netlist file to check (adder-shaped ports required)
    #[arg(long)]
    pub netlist: Option<String>,
    /// Generate-and-check: rca, bcla, bclarc, hybrid (with --k) or hybrid:<k>
    #[arg(long)]
    pub arch: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    /// Check a 4-bit lookahead block instead: bclg or bclgrc
    #[arg(long)]
    pub block: Option<String>,
    /// Structural defect to inject into a block: drop-icd
    #[arg(long)]
    pub mutant: Option<String>,
    #[arg(long, default_value = "rtz")]
    pub protocol: String,
    /// Randomized delay trials (robustness for adders, acknowledgement
    /// sweeps for blocks); must be positive
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub delay_min: u32,
    #[arg(long, default_value_t = 20)]
    pub delay_max: u32,
    #[arg(long, default_value_t = 20)]
    pub vectors_per_trial: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Experiment cap for indication classification
    #[arg(long, default_value_t = 20_000)]
    pub budget: u64,
    /// JSON report; default report.json in the out dir
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct RerunArgs {
    /// Artifact whose embedded config to re-execute
    pub artifact: String,
    /// Where to write the reproduced artifact; default <artifact>.rerun
    #[arg(long)]
    pub out: Option<String>,
}

/// Everything needed to reproduce a run, embedded in each artifact.
/// Output locations are deliberately excluded.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum RunConfig {
    Build {
        arch: String,
        width: usize,
        protocol: String,
    },
    Simulate {
        netlist: String,
        protocol: Option<String>,
        vectors: String,
        seed: u64,
        delays: String,
        default_delay: Option<u32>,
        dump: bool,
    },
    Compare {
        archs: Vec<String>,
        width: usize,
        protocol: String,
        delays: String,
        default_delay: Option<u32>,
    },
    Check {
        target: CheckTarget,
        protocol: String,
        mutant: Option<String>,
        trials: u64,
        delay_min: u32,
        delay_max: u32,
        vectors_per_trial: usize,
        seed: u64,
        budget: u64,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum CheckTarget {
    Netlist { path: String },
    Arch { arch: String, width: usize },
    Block { block: String },
}
