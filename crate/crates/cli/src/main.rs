//! `slo`: JSON front end for the slo-core operations.
//!
//! Exit codes: 0 when every asserted identity held, 1 when a check failed, 2 on a usage or
//! input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{CommandError, Report};

#[derive(Parser, Debug)]
#[command(name = "slo", version, about = "Exact computations in SL_n over truncated local rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Residue characteristic (prime)
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Precision N: elements are known modulo pi^N
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Characteristic of the ring: zero for Z_p, positive for F_p[[t]]
    #[arg(long = "char", value_enum, global = true, default_value_t = CharArg::Zero)]
    pub characteristic: CharArg,
    /// Matrix dimension
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Exponent m of the congruence quotient Z/p^m
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Level k
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Target dimension of a representation
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// JSON input file
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Cap on the number of elements a group closure may enumerate
    #[arg(long = "element-cap", global = true, default_value_t = slo_core::congruence::DEFAULT_ELEMENT_CAP)]
    pub element_cap: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharArg {
    Zero,
    Positive,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a ring, or evaluate {"op", "a", "b"} / {"op": "level", "gens"} from --input
    Ring,
    /// Lift the approximate root {"poly", "a"} from --input
    Hensel,
    /// Unit q with q^4 = -r in Z/p^N
    FourthRoot,
    /// Factor an SL_n matrix from --input into elementary unipotents
    Decompose,
    /// Word in letters of valuation >= k for diag(1 + pi^{2k} x, (1 + pi^{2k} x)^-1)
    ElDiagonal,
    /// Random instances of the commutator identities over the given ring
    VerifyIdentities,
    /// Finite quotients SL_n(Z/p^m)
    #[command(subcommand)]
    Congruence(CongruenceCommand),
    /// Flags of unipotent matrix sets
    #[command(subcommand)]
    Flags(FlagsCommand),
    /// Nontrivial homomorphism SL_2(Z_p) -> GL_D(R) for p = 2, 3
    NontrivialRep,
    /// Run every lemma check end to end
    VerifyPaper(VerifyPaperArgs),
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongruenceCommand {
    /// Order of SL_n(Z/p^m) by closure
    Order,
    /// Index of the congruence kernel mod p^k in SL_n(Z/p^m)
    Index,
    /// Invariant factors of the abelianization of SL_n(Z/p^m)
    Abelianization,
    /// Index of the image of EL_n(p^k Z_p) in SL_n(Z/p^m)
    ElIndex,
    /// Same as the top-level nontrivial-rep
    NontrivialRep,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagsCommand {
    /// JH-series of the matrices in --input
    Jh,
    /// Whether the matrices in --input preserve the flag in --input
    CheckInvariance,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyPaperArgs {
    /// Recompute the pinned fixtures from the brute-force oracles and write them to --out
    /// (a directory) or to the source tree
    #[arg(long)]
    pub regen_golden: bool,
    /// Run only these criteria (1-10)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let started = std::time::Instant::now();
    let query = report::query_echo(&cli);
    let outcome = commands::dispatch(&cli);
    match outcome {
        Ok(body) => {
            let ok = body.ok;
            let doc = Report::new(query, body, started.elapsed());
            // with --regen-golden, --out names the fixture directory
            let out = match &cli.command {
                Command::VerifyPaper(v) if v.regen_golden => None,
                _ => cli.opts.out.as_deref(),
            };
            if let Err(e) = doc.write(out) {
                eprintln!("slo: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("slo: check failed");
                ExitCode::from(1)
            }
        }
        Err(CommandError::Usage(msg)) => {
            eprintln!("slo: {msg}");
            ExitCode::from(2)
        }
    }
}
