use clap::{Args, Parser, Subcommand, ValueEnum};
use monosynth::verify::{VerifyMode, DEFAULT_SEED, DEFAULT_TRIALS};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

mod sweep;
mod synth;
mod tables;

#[derive(Parser)]
#[command(name = "monosynth", version, about = "Depth-optimized AND-OR path and adder synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one circuit, optionally verify and export it.
    Synth(SynthArgs),
    /// Measure adder constructions over a range of widths.
    Sweep(SweepArgs),
    /// Recompute the reference tables and compare with the published values.
    Tables(TablesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Aop,
    Adder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Shared,
    Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolarityArg {
    /// Conjunction at the root.
    And,
    /// Disjunction at the root.
    Or,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dot,
    Blif,
    Json,
}

/// `exhaustive`, `random`, `random:<trials>` or `off`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyArg {
    Off,
    Exhaustive,
    Random(usize),
}

impl VerifyArg {
    pub fn mode(self, seed: u64) -> Option<VerifyMode> {
        match self {
            VerifyArg::Off => None,
            VerifyArg::Exhaustive => Some(VerifyMode::Exhaustive),
            VerifyArg::Random(trials) => Some(VerifyMode::Random { trials, seed }),
        }
    }
}

impl FromStr for VerifyArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(VerifyArg::Off),
            "exhaustive" => Ok(VerifyArg::Exhaustive),
            "random" => Ok(VerifyArg::Random(DEFAULT_TRIALS)),
            _ => s
                .strip_prefix("random:")
                .and_then(|t| t.parse().ok())
                .map(VerifyArg::Random)
                .ok_or_else(|| format!("expected exhaustive, random[:<trials>] or off, got {s}")),
        }
    }
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// grinchuk (paths); ripple, lf, halved, a1, a2, a3, percarry (adders).
    #[arg(long)]
    pub construction: String,
    /// Alternating inputs of a path.
    #[arg(long)]
    pub m: Option<usize>,
    /// Input pairs of an adder, or symmetric inputs of a path.
    #[arg(long)]
    pub n: Option<usize>,
    /// Depth slack of the Ladner-Fischer network.
    #[arg(long)]
    pub f: Option<u32>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub polarity: Option<PolarityArg>,
    #[arg(long, default_value = "off")]
    pub verify: VerifyArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Netlist path; defaults to `{kind}_{construction}_{n}.{ext}` when
    /// `--format` is given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// `a..b` or `a..b..step`, inclusive.
    #[arg(long)]
    pub n_range: String,
    /// Comma-separated adder constructions, e.g. `ripple,lf:f=0,a1`.
    #[arg(long, value_delimiter = ',', default_value = "ripple,lf,a1,a2,a3")]
    pub constructions: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub emit: Emit,
    #[arg(long, default_value = "off")]
    pub verify: VerifyArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Md,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    #[arg(long, value_enum)]
    pub which: Which,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Dmin,
    Addgates,
    Psi,
}

/// How a command ended.
pub enum Failure {
    /// Bad flags or combinations; exit 2.
    Usage(String),
    /// A bound or verification check failed; exit 1.
    Check(String),
}

impl From<monosynth::Error> for Failure {
    fn from(e: monosynth::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => synth::run(&args),
        Command::Sweep(args) => sweep::run(&args),
        Command::Tables(args) => tables::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_flag() {
        assert_eq!("off".parse(), Ok(VerifyArg::Off));
        assert_eq!("random:25".parse(), Ok(VerifyArg::Random(25)));
        assert_eq!("random".parse(), Ok(VerifyArg::Random(DEFAULT_TRIALS)));
        assert!("random:".parse::<VerifyArg>().is_err());
        assert_eq!(VerifyArg::Random(3).mode(9), Some(VerifyMode::Random { trials: 3, seed: 9 }));
    }
}
