use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "entangle", version, about = "Entanglement criteria and collective Bell tests for two-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial-transpose spectrum and PPT verdict.
    Ppt(StateCommand),
    /// Global and reduced purities (alpha = 2 entropic criterion).
    Entropy(StateCommand),
    /// Correlation matrix, maximal CHSH value and settings attaining it.
    Chsh(StateCommand),
    /// Postselected first pair after a collective test on n copies.
    Collective(CollectiveCommand),
    /// Best collective CHSH value over a grid of n and Werner singlet fractions.
    Scan(ScanCommand),
    /// Threshold table for the standard two-qubit families.
    Examples(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Xor,
    Chad,
    Optimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Gradient,
    Pattern,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Exactly one state source.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Werner state with singlet fraction X.
    #[arg(long, value_name = "X")]
    pub werner: Option<f64>,
    /// Singlet-fraction X mixture of a|01> + b|10> with |00>, |11> noise; (a, b) is rescaled to unit norm.
    #[arg(long, value_name = "X,A,B", value_parser = parse_triple)]
    pub gisin: Option<(f64, f64, f64)>,
    /// Singlet with weight X mixed with |00>.
    #[arg(long, value_name = "X")]
    pub polarized: Option<f64>,
    /// JSON state file with fields dims, re and im.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateCommand {
    #[command(flatten)]
    pub source: StateSource,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Random restarts of the multistart search.
    #[arg(long, value_name = "K")]
    pub restarts: Option<usize>,
    /// Base seed of the restart generators.
    #[arg(long, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Gradient)]
    pub method: MethodArg,
    /// Run the full search at n = 5 instead of evaluating XOR only.
    #[arg(long)]
    pub full_n5: bool,
}

#[derive(Debug, Args)]
pub struct CollectiveCommand {
    #[command(flatten)]
    pub source: StateSource,
    /// Number of pairs.
    #[arg(long, value_name = "N")]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Xor)]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanCommand {
    /// Comma-separated pair counts.
    #[arg(long, value_name = "LIST", value_parser = parse_n_list)]
    pub n: NList,
    /// MIN:MAX:COUNT (inclusive, evenly spaced), a single value, or a comma list.
    #[arg(long, value_name = "GRID", value_parser = parse_grid)]
    pub x: Grid,
    #[arg(long, value_enum, default_value_t = StrategyArg::Optimize)]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NList(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected X,A,B".into());
    }
    Ok((parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?))
}

fn parse_n_list(s: &str) -> Result<NList, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("'{p}' is not a pair count")))
        .collect::<Result<_, _>>()
        .map(NList)
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [min, max, count] => {
            let count: usize = count.trim().parse().map_err(|_| format!("'{count}' is not a point count"))?;
            Ok(Grid(entangle_core::optimizer::scan::linspace(parse_f64(min)?, parse_f64(max)?, count)))
        }
        [list] => list.split(',').map(parse_f64).collect::<Result<_, _>>().map(Grid),
        _ => Err("expected MIN:MAX:COUNT or a comma list".into()),
    }
}
