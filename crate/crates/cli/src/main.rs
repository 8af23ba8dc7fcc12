//! `magma`: command-line front end for magma-core.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magma_core::census::{self, CensusOptions, CensusScope};
use magma_core::io::{parse_family, parse_partition, parse_table, ParsedTable};
use magma_core::partitions::{
    cover_orbit_analysis, cover_orbit_search, enumerate_stable_partitions, generated_partition,
    is_periodic_partition,
};
use magma_core::product::{check_product, ProductOperation};
use magma_core::report::{classify, ClassifyOptions};
use magma_core::residue::residue_report;
use magma_core::{BinaryOperation, Error, ErrorKind, Limits};
use output::Format;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "magma", version, about = "Ergodic theory of finite binary operations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Largest alphabet for residue computations.
    #[arg(long, global = true)]
    max_q: Option<usize>,
    /// Largest alphabet for exhaustive set-partition enumeration.
    #[arg(long, global = true)]
    enumeration_cap: Option<usize>,
    /// Largest alphabet for the brute-force strong ergodicity oracle.
    #[arg(long, global = true)]
    oracle_cap: Option<usize>,
    /// Maximum number of matrices in a transfer-matrix monoid.
    #[arg(long, global = true)]
    monoid_budget: Option<usize>,
    /// Maximum number of iterates in a cover orbit.
    #[arg(long, global = true)]
    orbit_budget: Option<usize>,
    /// Largest alphabet a product may have.
    #[arg(long, global = true)]
    product_cap: Option<usize>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl Global {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut l.max_q, self.max_q);
        set(&mut l.enumeration_cap, self.enumeration_cap);
        set(&mut l.oracle_cap, self.oracle_cap);
        set(&mut l.monoid_budget, self.monoid_budget);
        set(&mut l.orbit_budget, self.orbit_budget);
        set(&mut l.product_cap, self.product_cap);
        l
    }

    /// Product analyses run on the tensor alphabet, so residue work is
    /// allowed up to the product cap.
    fn product_limits(&self) -> Limits {
        let l = self.limits();
        Limits {
            max_q: l.max_q.max(l.product_cap),
            ..l
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide every property of one operation and report its structures.
    Classify {
        file: PathBuf,
        /// Include wall-clock timings (makes the output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Classify every table of one order and check the global theorems.
    Census {
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = Scope::Up)]
        scope: Scope,
        /// Keep one table per relabeling class.
        #[arg(long)]
        canonical: bool,
        /// Append one JSON record per table to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First residue and residue chain of a stable partition.
    Residue {
        file: PathBuf,
        /// Partition as JSON, or @path to read it from a file.
        #[arg(long)]
        partition: String,
    },
    /// List the stable partitions with their periods and block sizes.
    StablePartitions { file: PathBuf },
    /// The finest periodic partition coarser than a family of subsets.
    GeneratedPartition {
        file: PathBuf,
        /// Family as JSON, or @path.
        #[arg(long)]
        family: String,
    },
    /// Iterate a cover and look for the generated partition in its orbit.
    CoverOrbit {
        file: PathBuf,
        /// Cover as JSON, or @path.
        #[arg(long)]
        family: String,
        /// Skip the strong ergodicity requirement.
        #[arg(long)]
        any_operation: bool,
    },
    /// Tensor products of operations.
    #[command(subcommand)]
    Product(ProductCommand),
}

#[derive(Subcommand)]
enum ProductCommand {
    /// Compare factor and product classifications against the product laws.
    Check {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Split a stable partition of the product along a coordinate set.
    Decompose {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        #[arg(long)]
        partition: String,
        /// Comma-separated 0-based factor indices forming the first part.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        split: Vec<usize>,
    },
    /// Canonical factorization of a stable partition of the product.
    Factorize {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        #[arg(long)]
        partition: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    /// Tables whose columns are permutations.
    Up,
    /// Latin squares.
    Latin,
    /// Every table.
    All,
}

/// Failures with their exit status.
#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Cap => 3,
                ErrorKind::Internal => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => f.write_str(msg),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> CliResult<ParsedTable> {
    let text = read_file(path)?;
    parse_table(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())).into(),
        e => e.into(),
    })
}

fn load_op(path: &Path) -> CliResult<BinaryOperation> {
    Ok(load_table(path)?.op)
}

/// Inline JSON, or the contents of a file when prefixed with `@`.
fn inline_or_file(arg: &str) -> CliResult<String> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path)),
        None => Ok(arg.to_string()),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn run(cli: &Cli) -> CliResult<Value> {
    let limits = cli.global.limits();
    match &cli.command {
        Command::Classify { file, timings } => {
            let op = load_op(file)?;
            let report = classify(
                &op,
                &ClassifyOptions {
                    limits,
                    timings: *timings,
                },
            )?;
            Ok(to_value(&report))
        }
        Command::Census {
            q,
            scope,
            canonical,
            out,
        } => {
            let options = CensusOptions {
                scope: match scope {
                    Scope::Up => CensusScope::UniformityPreserving,
                    Scope::Latin => CensusScope::LatinSquares,
                    Scope::All => CensusScope::All,
                },
                canonical_only: *canonical,
            };
            let records = census::run_census(*q, &options, &limits)?;
            if let Some(path) = out {
                append_records(path, &records)?;
            }
            let summary = census::summarize(*q, &records)?;
            if let Some(t) = summary.theorems.iter().find(|t| !t.violations.is_empty()) {
                return Err(Error::VerificationFailed(format!(
                    "{} fails on {:?}",
                    t.name, t.violations
                ))
                .into());
            }
            Ok(to_value(&summary))
        }
        Command::Residue { file, partition } => {
            let op = load_op(file)?;
            let h = parse_partition(&inline_or_file(partition)?, op.q())?;
            Ok(to_value(&residue_report(&op, &h, &limits)?))
        }
        Command::StablePartitions { file } => {
            let op = load_op(file)?;
            let list: Vec<Value> = enumerate_stable_partitions(&op, &limits)?
                .iter()
                .map(|h| {
                    json!({
                        "partition": h.to_vecs(),
                        "period": is_periodic_partition(&op, h).1,
                        "block_size": h.block_size(),
                    })
                })
                .collect();
            Ok(Value::Array(list))
        }
        Command::GeneratedPartition { file, family } => {
            let op = load_op(file)?;
            let a = parse_family(&inline_or_file(family)?, op.q())?;
            let g = generated_partition(&op, &a, &limits)?;
            Ok(json!({
                "family": a.to_vecs(),
                "generated": g.to_vecs(),
                "period": is_periodic_partition(&op, &g).1,
                "balanced": g.is_balanced(),
            }))
        }
        Command::CoverOrbit {
            file,
            family,
            any_operation,
        } => {
            let op = load_op(file)?;
            let a = parse_family(&inline_or_file(family)?, op.q())?;
            let report = if *any_operation {
                cover_orbit_search(&op, &a, &limits)?
            } else {
                cover_orbit_analysis(&op, &a, &limits)?
            };
            Ok(to_value(&report))
        }
        Command::Product(cmd) => run_product(cmd, &cli.global.product_limits()),
    }
}

fn load_product(files: &[PathBuf], limits: &Limits) -> CliResult<ProductOperation> {
    let ops = files.iter().map(|f| load_op(f)).collect::<CliResult<Vec<_>>>()?;
    Ok(ProductOperation::new(ops, limits)?)
}

fn run_product(cmd: &ProductCommand, limits: &Limits) -> CliResult<Value> {
    match cmd {
        ProductCommand::Check { files } => {
            let ops = files.iter().map(|f| load_op(f)).collect::<CliResult<Vec<_>>>()?;
            let check = check_product(&ops, limits)?;
            if !check.all_hold() {
                return Err(Error::VerificationFailed(format!(
                    "product laws fail: {:?}",
                    check.laws
                ))
                .into());
            }
            Ok(to_value(&check))
        }
        ProductCommand::Decompose {
            files,
            partition,
            split,
        } => {
            let prod = load_product(files, limits)?;
            let h = parse_partition(&inline_or_file(partition)?, prod.space().size())?;
            let mut coords = split.clone();
            coords.sort_unstable();
            Ok(to_value(&prod.decompose(&h, &coords)?))
        }
        ProductCommand::Factorize { files, partition } => {
            let prod = load_product(files, limits)?;
            let h = parse_partition(&inline_or_file(partition)?, prod.space().size())?;
            let parts = prod.canonical_factorization(&h)?;
            Ok(json!({
                "partition": h.to_vecs(),
                "factors": parts.iter().map(|p| p.to_vecs()).collect::<Vec<_>>(),
                "block_counts": parts.iter().map(|p| p.len()).collect::<Vec<_>>(),
            }))
        }
    }
}

fn append_records(path: &Path, records: &[census::CensusRecord]) -> CliResult<()> {
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err)?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r).expect("records serialize to JSON"));
        buf.push('\n');
    }
    file.write_all(buf.as_bytes()).map_err(io_err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(value) => {
            let text = output::render(&value, cli.global.format);
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
