mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Serialize, Serializer};

use output::{Format, Status};

#[derive(Parser, Debug)]
#[command(name = "mstd", version, about = "Sum-dominant (MSTD) set analysis")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for searches; 0 uses every core.
    #[arg(long, global = true, env = "MSTD_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute |A+A|, |A-A| and the verdict for one or more sets.
    Classify(ClassifyArgs),
    /// Print a set in gap notation `(b|g1,g2,...)`.
    Spohn(SetArg),
    /// Canonical affine representative of a set.
    Normalize(SetArg),
    /// Parametric five-gap families.
    #[command(subcommand)]
    Families(FamiliesCmd),
    /// Exhaustive searches over sets of fixed size and bounded diameter.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Sum-dominant sets of primes and prime tuples.
    #[command(subcommand)]
    Primes(PrimesCmd),
    /// Run the reproduction checks and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    /// Sets as `{a,b,...}` or `(b|g1,g2,...)`.
    #[arg(required = true, value_name = "SET")]
    sets: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
struct SetArg {
    #[arg(value_name = "SET")]
    set: String,
}

#[derive(Subcommand, Debug)]
enum FamiliesCmd {
    /// Check that no instance on the parameter grid is sum-dominant.
    Verify(FamilyVerifyArgs),
    /// Build and classify one instance.
    Build(FamilyBuildArgs),
}

#[derive(Clone, Copy, Debug)]
enum FamilyId {
    All,
    One(u8),
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FamilyId::All => s.serialize_str("all"),
            FamilyId::One(id) => s.serialize_u8(*id),
        }
    }
}

fn parse_family_id(text: &str) -> Result<FamilyId, String> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(FamilyId::All);
    }
    let digits = text.trim_start_matches(['S', 's']);
    match digits.parse::<u8>() {
        Ok(id @ 1..=15) => Ok(FamilyId::One(id)),
        _ => Err(format!("expected 1..15 or `all`, got `{text}`")),
    }
}

#[derive(Args, Debug, Serialize)]
struct FamilyVerifyArgs {
    /// Family number 1..15, or `all`.
    #[arg(long, value_parser = parse_family_id)]
    id: FamilyId,
    /// Largest parameter value on the grid.
    #[arg(long, default_value_t = 30)]
    pmax: u64,
}

#[derive(Args, Debug, Serialize)]
struct FamilyBuildArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=15))]
    id: u8,
    #[arg(short, long, default_value_t = 0)]
    d: u64,
    #[arg(short, long, default_value_t = 0)]
    a: u64,
    #[arg(short, long, default_value_t = 0)]
    b: u64,
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    /// Fail (exit 2) if any sum-dominant set exists.
    Verify(EnumArgs),
    /// List every sum-dominant set.
    Find(EnumArgs),
    /// Check the sumset bounds in terms of the collision excess.
    Lemmas(EnumArgs),
    /// Six-sets containing a 4-term progression are never sum-dominant.
    Prop4(Prop4Args),
    /// Add integers to an arithmetic progression and classify the results.
    ApPlus(ApPlusArgs),
}

#[derive(Args, Debug, Serialize)]
struct EnumArgs {
    /// Set size.
    #[arg(long)]
    n: usize,
    /// Largest diameter (max - min) enumerated.
    #[arg(long)]
    diameter: u64,
    /// Enumerate every set with minimum 0, not one per affine class.
    #[arg(long)]
    all_sets: bool,
}

#[derive(Args, Debug, Serialize)]
struct Prop4Args {
    #[arg(long)]
    diameter: u64,
    #[arg(long)]
    all_sets: bool,
}

#[derive(Args, Debug, Serialize)]
struct ApPlusArgs {
    /// Length of the progression {0, ..., ap_len-1}.
    #[arg(long)]
    ap_len: u64,
    /// Number of integers added.
    #[arg(long)]
    added: usize,
    /// Added integers lie within this distance of the progression.
    #[arg(long)]
    range: u64,
}

#[derive(Subcommand, Debug)]
enum PrimesCmd {
    /// Find every sum-dominant subset of the odd primes up to --max.
    Search(PrimeSearchArgs),
    /// Is the tuple admissible (misses a residue class mod every k <= m)?
    Admissible(TupleArgs),
    /// Smallest n with every b_i + n prime.
    Match(MatchArgs),
    /// Re-run the checks on sets from a saved `primes search` report.
    VerifyExclusion(ExclusionArgs),
}

#[derive(Args, Debug, Serialize)]
struct PrimeSearchArgs {
    /// Largest prime in the pool.
    #[arg(long)]
    max: u64,
    /// Print the sets one per line instead of a report.
    #[arg(long)]
    list: bool,
    /// Resume from and save progress to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Classify subsets of every size, not just 8 and up.
    #[arg(long, conflicts_with = "min_card")]
    no_min_card: bool,
    /// Smallest subset size classified.
    #[arg(long)]
    min_card: Option<usize>,
    /// Put 2 in the pool.
    #[arg(long)]
    include_two: bool,
    /// Allow pools above 40 primes.
    #[arg(long)]
    allow_large_pool: bool,
}

#[derive(Args, Debug, Serialize)]
struct TupleArgs {
    /// Comma-separated offsets, e.g. 0,24,48.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    tuple: Vec<u64>,
}

#[derive(Args, Debug, Serialize)]
struct MatchArgs {
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    tuple: Vec<u64>,
    #[arg(long, default_value_t = 500)]
    nmax: u64,
}

#[derive(Args, Debug, Serialize)]
struct ExclusionArgs {
    /// JSON from `primes search --format json`, or a bare report.
    #[arg(long)]
    from: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct ReproduceArgs {
    /// Only the fast checks.
    #[arg(long)]
    quick: bool,
    /// Seed for randomized checks.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let (name, params, result) = commands::dispatch(&cli);
    let output = match result {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("\nFor more information, try '--help'.");
            return ExitCode::from(1);
        }
    };
    if let Some(lines) = &output.lines {
        let mut stdout = io::stdout().lock();
        for line in lines {
            if writeln!(stdout, "{line}").is_err() {
                return ExitCode::from(1);
            }
        }
    } else {
        let elapsed = start.elapsed().as_millis();
        let mut stdout = io::stdout().lock();
        if let Err(e) = output::emit(&mut stdout, cli.format, &name, &params, &output, elapsed) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match output.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Falsified => ExitCode::from(2),
    }
}
