mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rado_lab::SearchBudget;

use output::Format;

/// Two-color Rado numbers for x1 + ... + xm + c = a*x0.
#[derive(Parser, Debug)]
#[command(name = "rado-lab", version, allow_negative_numbers = true)]
struct Cli {
    /// Output format; csv is accepted by `table` only.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct EquationArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub c: i64,
    #[arg(long, default_value_t = 2)]
    pub a: u32,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Largest n to try.
    #[arg(long)]
    pub max_n: Option<u64>,
    /// Search-node cap over the whole run.
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Wall-clock cap; RADO_LAB_BUDGET_SECONDS lowers it further.
    #[arg(long)]
    pub max_seconds: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Print search progress to stderr.
    #[arg(long)]
    pub progress: bool,
}

pub const BUDGET_ENV: &str = "RADO_LAB_BUDGET_SECONDS";

impl BudgetArgs {
    pub fn budget(&self, default_max_n: u64) -> anyhow::Result<SearchBudget> {
        let mut seconds = self.max_seconds.unwrap_or(600.0);
        if let Ok(cap) = std::env::var(BUDGET_ENV) {
            let cap: f64 = cap
                .trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("{BUDGET_ENV} must be a number of seconds, got {cap:?}"))?;
            seconds = seconds.min(cap);
        }
        if !(seconds > 0.0 && seconds.is_finite()) {
            anyhow::bail!("time budget must be positive, got {seconds}");
        }
        let budget = SearchBudget {
            max_n: self.max_n.unwrap_or(default_max_n),
            max_nodes: self.max_nodes.unwrap_or(u64::MAX),
            max_wall: Duration::from_secs_f64(seconds),
            threads: self.threads,
        };
        budget.validate()?;
        Ok(budget)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form value.
    Formula(EquationArgs),
    /// Exhaustive search for the least n with no valid coloring.
    Brute {
        #[command(flatten)]
        eq: EquationArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Where to write the lower-bound certificate.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Formula against search over a grid of (m, c).
    Table {
        /// Values of m: `4` or an inclusive range `2..6`.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Values of c: `4` or an inclusive range `1..8`.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 2)]
        a: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search with negative c at a = 2.
    Explore {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Look for a monochromatic solution in a coloring.
    CheckColoring {
        #[command(flatten)]
        eq: EquationArgs,
        /// Coloring document (JSON) or compact string file.
        #[arg(long, conflicts_with = "coloring")]
        file: Option<PathBuf>,
        /// Inline compact coloring such as `RBBR`.
        #[arg(long)]
        coloring: Option<String>,
    },
    /// Forcing chains.
    #[command(subcommand)]
    Chain(ChainCommand),
    /// Exact checks of the continuous colorings.
    #[command(subcommand)]
    Continuous(ContinuousCommand),
    /// Emit one of the known extremal or infinite-family colorings.
    Coloring {
        #[arg(value_enum)]
        kind: ColoringKind,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i64>,
        #[arg(long, default_value_t = 2)]
        a: u32,
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum ChainCommand {
    /// Replay one chain document.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// Replay every built-in table against its expected tag.
    Corpus,
}

#[derive(Subcommand, Debug)]
enum ContinuousCommand {
    Verify {
        /// Rational, e.g. `3` or `7/2`.
        #[arg(long)]
        c: String,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 64)]
        k_max: u32,
        #[arg(long, value_enum, default_value_t = ContinuousKind::All)]
        kind: ContinuousKind,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuousKind {
    Intervals,
    Translation,
    Blocks,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringKind {
    /// Two-block lower-bound coloring for (m, c, a).
    Lemma1,
    /// Evens red, odds blue on [1, n].
    Parity,
    /// Solution-free coloring of [1, n] for x1 + c = a*x0.
    Linear,
}

fn run(cli: Cli) -> anyhow::Result<output::Report> {
    use commands::*;
    let report = match cli.command {
        Command::Formula(eq) => formula(&eq)?,
        Command::Brute { eq, budget, certificate } => brute(&eq, &budget, certificate)?,
        Command::Table { m, c, a, budget } => table(&m, &c, a, &budget)?,
        Command::Explore { m, c, budget } => explore(m, c, &budget)?,
        Command::CheckColoring { eq, file, coloring } => check_coloring(&eq, file, coloring)?,
        Command::Chain(ChainCommand::Verify { file }) => chain_verify(&file)?,
        Command::Chain(ChainCommand::Corpus) => chain_corpus()?,
        Command::Continuous(ContinuousCommand::Verify { c, a, k_max, kind }) => {
            continuous_verify(&c, &a, k_max, kind)?
        }
        Command::Coloring { kind, m, c, a, n } => coloring(kind, m, c, a, n)?,
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, out) = (cli.format, cli.out.clone());
    match run(cli).and_then(|r| r.emit(format, out.as_deref())) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(output::EXIT_USAGE)
        }
    }
}
