mod commands;
mod config;
mod sequence;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use newtonva::vertex::Identity;

use config::{parse_range, Format, Overrides, RunConfig};

const GRAMMAR: &str = "\
Field expressions (ope):
  expr    := term (('+' | '-') term)*
  term    := [ratio '*'] product        e.g. 3/2*h
  product := unary ('*' int unary)*     a *n b is the n-th residue product
  unary   := 'd' [digits] unary | atom  d2 h is the second derivative
  atom    := label | 'id' | '(' expr ')' | ':' unary unary ':'
Labels: heisenberg h; affine sl2 e, f, h; virasoro omega.

Sequences (newton): a comma list such as 1,1,1,1 or a formula in n
  using integers, + - * / ^, parentheses and binom(a, k).

Ranges are inclusive: --lrange -3..3.
Exit status: 0 pass, 1 verification failure, 2 usage error.";

#[derive(Parser)]
#[command(name = "newtonva", version, about = "Exact computations with fields, residue products and vertex algebras", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// heisenberg, affine or virasoro
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Finite Lie algebra for the affine algebra
    #[arg(long, global = true)]
    lie: Option<String>,
    #[arg(long, global = true, value_name = "A..B", value_parser = parse_range, allow_hyphen_values = true)]
    lrange: Option<(i64, i64)>,
    #[arg(long, global = true, value_name = "A..B", value_parser = parse_range, allow_hyphen_values = true)]
    mrange: Option<(i64, i64)>,
    #[arg(long, global = true, value_name = "A..B", value_parser = parse_range, allow_hyphen_values = true)]
    nrange: Option<(i64, i64)>,
    /// Largest basis-state weight tested
    #[arg(long, global = true)]
    weight: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON file with any of the keys above
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Locality order and singular OPE part of two fields
    Ope { a: String, b: String },
    /// Run one identity over the grid
    Verify {
        /// bflm, commutator, associator, skew, translation, dong or locality-equivalences
        #[arg(value_parser = |s: &str| s.parse::<Identity>())]
        identity: Identity,
        /// Single residue-product index for dong
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
    },
    /// Difference table, Newton coefficients and extrapolation of a sequence
    Newton {
        sequence: String,
        #[arg(value_name = "A..B", allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// [a_m, b_n] from the commutator formula, checked against the defining relations
    Commutator {
        a: String,
        #[arg(allow_hyphen_values = true)]
        m: i64,
        b: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.common;
    let overrides = Overrides {
        algebra: c.algebra,
        lie: c.lie,
        lrange: c.lrange,
        mrange: c.mrange,
        nrange: c.nrange,
        weight: c.weight,
        format: c.format,
        seed: c.seed,
    };
    let outcome = RunConfig::resolve(c.config.as_deref(), overrides).and_then(|config| match &cli.command {
        Command::Ope { a, b } => commands::ope(&config, a, b),
        Command::Verify { identity, n } => commands::verify(&config, *identity, *n),
        Command::Newton { sequence, window } => commands::newton(&config, sequence, window.as_deref()),
        Command::Commutator { a, m, b, n } => commands::commutator(&config, a, *m, b, *n),
    });
    match outcome {
        Ok(out) => {
            println!("{}", out.text);
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
