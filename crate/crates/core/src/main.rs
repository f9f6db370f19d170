use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cutkit::cli::{run, Command, Options};

#[derive(Parser)]
#[command(name = "cutkit", version, about = "Classify and compare cuts of rational Hahn sums")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Six-type classification, covariance groups, cofinality and coinitiality
    Classify(Args),
    /// Pairwise order of the items
    Compare(Args),
    /// Realization of each item in the universal model
    Realize(Args),
    /// Sampled checks of invariance and covariance against their definitions
    Oracle(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Job file, looked up in the fixture directory if not found as given
    file: String,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match cli.command {
        Cmd::Classify(a) => (Command::Classify, a),
        Cmd::Compare(a) => (Command::Compare, a),
        Cmd::Realize(a) => (Command::Realize, a),
        Cmd::Oracle(a) => (Command::Oracle, a),
    };
    let opts = Options { json: args.json, seed: args.seed, count: args.count };
    let out = run(cmd, &args.file, &opts);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
