use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use etaq_cli::verify::VerifyOptions;
use etaq_cli::{
    cmd_check, cmd_expand, cmd_invariants, cmd_search, cmd_verify_table, parse_weight, CliError,
    CliResult, ExitStatus, Format,
};
use etaq_core::{SearchConfig, DEFAULT_PRIME_CAP};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

/// Dedekind eta quotients of half-integral weight: expansions, invariants
/// and Hecke eigenform checks.
#[derive(Debug, Parser)]
#[command(name = "etaq", version)]
struct Cli {
    /// Output format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct CapArg {
    /// Largest prime p for which T_{p^2} is applied.
    #[arg(long, env = etaq_cli::PRIME_CAP_ENV, default_value_t = DEFAULT_PRIME_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    prime_cap: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the q-expansion a_0, ..., a_{P-1} (default format: text).
    Expand {
        /// Quotient, e.g. "eta(8z)^3" or "8:3".
        eta: String,
        #[arg(long, default_value_t = 20)]
        prec: usize,
    },
    /// Weight, level, character, valuation, Sturm and Purkait bounds.
    Invariants { eta: String },
    /// Decide whether the quotient is a Hecke eigenform.
    Check {
        eta: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Enumerate and classify all quotients of one weight.
    Search {
        /// Weight as k/2 with k odd.
        #[arg(long, value_parser = parse_weight)]
        weight: u32,
        /// Bound on the sum of m * r_m (a multiple of 24).
        #[arg(long)]
        max_sum: u64,
        #[arg(long)]
        max_level: Option<u64>,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Re-derive every row of the embedded reference table.
    VerifyTable {
        /// Use the quotients exactly as printed, without corrections.
        #[arg(long)]
        strict_printed: bool,
        /// Only this row.
        #[arg(long)]
        row: Option<u32>,
        /// Check every row up to its Purkait bound, however large.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        cap: CapArg,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    let jobs = cli.jobs.map_or_else(
        || std::thread::available_parallelism().map_or(1, |n| n.get()),
        |j| j as usize,
    );
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    let format = cli.format.map(Format::from);
    match cli.command {
        Command::Expand { eta, prec } => {
            cmd_expand(&eta, prec, format.unwrap_or(Format::Text), out)
        }
        Command::Invariants { eta } => cmd_invariants(&eta, format.unwrap_or(Format::Json), out),
        Command::Check { eta, cap } => {
            cmd_check(&eta, cap.prime_cap, format.unwrap_or(Format::Json), out)
        }
        Command::Search {
            weight,
            max_sum,
            max_level,
            cap,
        } => {
            let mut config = SearchConfig::new(weight, max_sum);
            config.max_level = max_level;
            config.prime_cap = cap.prime_cap;
            config.parallelism = jobs;
            cmd_search(&config, format.unwrap_or(Format::Json), out)
        }
        Command::VerifyTable {
            strict_printed,
            row,
            full,
            cap,
        } => {
            let mut opts = VerifyOptions::new(cap.prime_cap);
            opts.strict_printed = strict_printed;
            opts.full = full;
            if let Some(r) = row {
                if etaq_core::ReferenceTable::get().row(r).is_none() {
                    return Err(CliError::Usage(format!("the table has no row {r}")));
                }
                opts.rows = Some(vec![r]);
            }
            cmd_verify_table(&opts, format.unwrap_or(Format::Text), out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let status = match run(cli, &mut out).and_then(|s| Ok(out.flush().map(|()| s)?)) {
        Ok(status) => status,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitStatus::Success,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    };
    ExitCode::from(status.code())
}
