//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "binvar",
    version,
    about = "Invariants of the binary decimic: series, catalog, search and checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Print the JSON report on standard output instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Directory for cached catalog expansions.
    #[arg(
        long,
        global = true,
        env = "BINVAR_CACHE",
        default_value = ".binvar-cache",
        value_name = "DIR"
    )]
    pub cache_dir: PathBuf,
    /// Expand catalog entries in memory without reading or writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Log more to standard error (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    Default,
    Deep,
    Exhaustive,
}

impl Tier {
    /// Largest search degree allowed in this tier.
    pub fn ceiling(self) -> u32 {
        match self {
            Tier::Default => 16,
            Tier::Deep => 21,
            Tier::Exhaustive => 48,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "7")]
    Seven,
    #[value(name = "8")]
    Eight,
    Jerzy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of the Poincare series of the invariants of V_n.
    Poincare {
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value_t = 48)]
        max: u32,
    },
    /// Numerator of the Poincare series over a system of parameters.
    Numerator {
        #[arg(long, default_value_t = 10)]
        n: u32,
        /// Degrees of the system of parameters.
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,6,8,9,10,14")]
        degrees: Vec<u32>,
    },
    /// List the named covariants or dump one expansion.
    Catalog {
        #[arg(long, conflicts_with = "dump")]
        list: bool,
        #[arg(long, value_name = "SYMBOL")]
        dump: Option<String>,
        /// Print the dump in the line-per-monomial layout.
        #[arg(long, requires = "dump")]
        pretty: bool,
    },
    /// Evaluate a covariant or invariant at a concrete decimic.
    Eval {
        /// Catalog symbol or recipe, e.g. `j2` or `(k,k)_4`.
        #[arg(long)]
        invariant: String,
        /// Values a0..a10 of f = sum C(10,i) a_i x^(10-i) y^i (integers or p/q).
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "form_file",
            required_unless_present = "form_file"
        )]
        coeffs: Vec<String>,
        /// A decimic with numeric coefficients in the JSON form format.
        #[arg(long, value_name = "FILE")]
        form_file: Option<PathBuf>,
    },
    /// Count new basic invariants degree by degree.
    Search {
        #[arg(long, default_value_t = 14)]
        max_degree: u32,
        #[arg(long, default_value_t = 109)]
        prime: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Allow degrees up to 21.
        #[arg(long, conflicts_with = "exhaustive")]
        deep: bool,
        /// Allow degrees up to 48 (long running; use with --resume).
        #[arg(long)]
        exhaustive: bool,
        /// Checkpoint directory: saved degrees are replayed, new ones written.
        #[arg(long, value_name = "DIR")]
        resume: Option<PathBuf>,
        /// Random candidates per degree as a multiple of the target dimension.
        #[arg(long, default_value_t = 10)]
        budget_factor: usize,
    },
    /// Dimension of a graded piece of the ideal generated by some invariants.
    IdealDim {
        /// Named selection: all, j14a14, j10, j9, j8, a6c6.
        #[arg(long, conflicts_with_all = ["select", "degree"], required_unless_present = "select")]
        preset: Option<String>,
        /// Comma list: integers select a whole degree, other items are recipes.
        #[arg(long, requires = "degree")]
        select: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        /// Expected dimension for --select.
        #[arg(long, requires = "select")]
        expect: Option<usize>,
        #[arg(long, default_value_t = 197)]
        prime: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Checkpoint directory for the underlying search.
        #[arg(long, value_name = "DIR")]
        resume: Option<PathBuf>,
    },
    /// Check that the system of parameters vanishes exactly on nullforms.
    NullconeVerify {
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10")]
        n: Vec<u32>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Test one form with numeric coefficients instead of sampling.
        #[arg(long, value_name = "FILE")]
        form_file: Option<PathBuf>,
    },
    /// Case identities for the nullcone argument, or the jerzy predicate.
    LemmaCheck {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Which nullcone invariants survive on the two exceptional families.
    ExceptionalForms,
    /// Ideal membership claims, decided by Groebner bases.
    GroebnerCheck {
        /// Claim name or `all`.
        #[arg(long, default_value = "all")]
        claim: String,
        /// Comma list of primes for the modular sanity runs, or `none`.
        #[arg(long, default_value = "32003,65521")]
        primes: String,
        /// S-polynomial reductions allowed per ideal.
        #[arg(long, default_value_t = 200_000)]
        max_steps: usize,
    },
    /// Every check of a tier.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = Tier::Default)]
        tier: Tier,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}
