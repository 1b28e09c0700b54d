use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankmet::linalg::Budget;
use rankmet::minimal::Method;

mod commands;
mod render;

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "rankmet", version, about = "Rank-metric codes, q-systems and minimal codes")]
struct Cli {
    /// Largest enumeration a command may perform.
    #[arg(long, global = true, env = "RANKMET_BUDGET", default_value_t = 10_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Pairwise,
    Cutting,
    LambdaSum,
    All,
}

impl MethodArg {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Pairwise => vec![Method::Pairwise],
            MethodArg::Cutting => vec![Method::Cutting],
            MethodArg::LambdaSum => vec![Method::LambdaSum],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parameters, weights, linearity and bounds of a code or system file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Cutting)]
        method: MethodArg,
    },
    /// Write a code file for one of the built-in constructions.
    Construct(ConstructArgs),
    /// Run cross-check suites; exits 1 if any check fails.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
    },
    /// Look for a minimal code with the given parameters.
    Search(SearchArgs),
    /// Describe a finite field extension.
    Field(FieldArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Correspondence,
    Identities,
    Minimality,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Simplex,
    Scattered633,
    Km1m,
    Extend,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Code file to extend.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Comma-separated column appended by `extend`, e.g. `1,g^3`.
    #[arg(long)]
    pub column: Option<String>,
    /// Emit the q-system file instead of the code file.
    #[arg(long)]
    pub system: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, conflicts_with = "random")]
    pub exhaustive: bool,
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    /// Order of the base field.
    #[arg(long, conflicts_with_all = ["p", "e"])]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Comma-separated modulus coefficients, constant term first.
    #[arg(long)]
    pub modulus: Option<String>,
    /// List every element with its discrete logarithm.
    #[arg(long)]
    pub table: bool,
}

fn emit(cli: &Cli, value: &serde_json::Value) -> std::io::Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(value).expect("json value") + "\n",
        Format::Text => render::text(value),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget(cli.budget);
    let result = match &cli.command {
        Command::Analyze { file, method } => commands::analyze(file, *method, budget),
        Command::Construct(args) => commands::construct(args, budget),
        Command::Verify { file, suite, method } => commands::verify(file, *suite, *method, budget),
        Command::Search(args) => commands::search(args, budget, cli.seed),
        Command::Field(args) => commands::field(args),
    };
    let (value, code) = match result {
        Ok(out) => (out.report, out.status),
        Err(Failure { code, error }) => {
            eprintln!("error: {error}");
            return ExitCode::from(code);
        }
    };
    if let Err(e) = emit(&cli, &value) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
