//! Subcommand implementations and the argument surface.

use crate::io::{load_relation, FileError, InputFormat};
use crate::report::{DistanceReport, DowkerReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use relmetric::sample::derive_seed;
use relmetric::{
    distance_bound, distance_bound_sampled, distance_exact_with_budget, DowkerComplex, Error,
    Relation,
};
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Compare labeled binary relations: exact pseudometric distances at small
/// scale, pattern-tally bounds at large scale, and the per-relation
/// simplicial complex.
#[derive(Debug, Parser)]
#[command(name = "relmetric", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise distance matrix over two or more relation files.
    Distance(DistanceArgs),
    /// Maximal simplices (and optionally weights) of one relation.
    Dowker(DowkerArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exhaustive search for the exact distance (small inputs).
    Exact,
    /// Upper bound from pattern tallies (any size).
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormatArg {
    /// 0/1 matrix with a label header row and label first column.
    DenseCsv,
    /// Directory of text files matched against a pattern list.
    PatternLog,
}

impl From<InputFormatArg> for InputFormat {
    fn from(value: InputFormatArg) -> Self {
        match value {
            InputFormatArg::DenseCsv => InputFormat::DenseCsv,
            InputFormatArg::PatternLog => InputFormat::PatternLog,
        }
    }
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    /// Relation files (dense-csv) or directories (pattern-log).
    #[arg(required = true, num_args = 2..)]
    pub relations: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Columns to draw from each relation per pair (bound mode only).
    #[arg(long)]
    pub sample: Option<usize>,
    /// Seed for sampled draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output format on standard output.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Cap on mappings per exact directional search.
    #[arg(long, default_value_t = relmetric::DEFAULT_EXACT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = InputFormatArg::DenseCsv)]
    pub input_format: InputFormatArg,
    /// Pattern file for pattern-log inputs (one regex per line).
    #[arg(long)]
    pub patterns: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DowkerArgs {
    /// Relation file (dense-csv) or directory (pattern-log).
    pub relation: PathBuf,
    /// Include total and differential weights per face.
    #[arg(long)]
    pub weights: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    #[arg(long, value_enum, default_value_t = InputFormatArg::DenseCsv)]
    pub input_format: InputFormatArg,
    #[arg(long)]
    pub patterns: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    File(FileError),
    Pair {
        left: String,
        right: String,
        source: Error,
    },
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::File(e) => e.fmt(f),
            CliError::Pair { left, right, source } => {
                write!(f, "{left} vs {right}: {source}")
            }
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::File(e)
    }
}

impl CliError {
    /// 2 when the exact search budget was exceeded, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Pair {
                source: Error::BudgetExceeded { .. },
                ..
            } => 2,
            _ => 1,
        }
    }
}

/// Worker count: `RELMETRIC_THREADS` when set, otherwise the machine's
/// available parallelism.
fn thread_count(jobs: usize) -> usize {
    let configured = std::env::var("RELMETRIC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let default = std::thread::available_parallelism().map_or(1, usize::from);
    configured.unwrap_or(default).min(jobs.max(1))
}

/// Run `job` for every index on a small worker pool; results come back in
/// index order regardless of scheduling.
fn parallel_map<T: Send>(count: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = thread_count(count);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let result = job(i);
                slots.lock().expect("no panics while holding the lock")[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|slot| slot.expect("every job ran"))
        .collect()
}

fn load_all(
    paths: &[PathBuf],
    format: InputFormat,
    patterns: Option<&PathBuf>,
) -> Result<Vec<(String, Relation)>, CliError> {
    paths
        .iter()
        .map(|p| {
            let relation = load_relation(p, format, patterns.map(PathBuf::as_path))?;
            Ok((p.display().to_string(), relation))
        })
        .collect()
}

pub fn distance_command(args: &DistanceArgs) -> Result<String, CliError> {
    if args.sample.is_some() && args.mode != ModeArg::Bound {
        return Err(CliError::Usage(
            "--sample only applies to --mode bound".into(),
        ));
    }
    if args.sample == Some(0) {
        return Err(CliError::Usage("--sample must be at least 1".into()));
    }
    let relations = load_all(
        &args.relations,
        args.input_format.into(),
        args.patterns.as_ref(),
    )?;
    let n = relations.len();
    let mut matrix = vec![vec![0u64; n]; n];

    let pair_error = |i: usize, j: usize, source: Error| CliError::Pair {
        left: relations[i].0.clone(),
        right: relations[j].0.clone(),
        source,
    };

    match args.mode {
        ModeArg::Exact => {
            // symmetric with zero diagonal; each unordered pair computed once
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect();
            let results = parallel_map(pairs.len(), |k| {
                let (i, j) = pairs[k];
                distance_exact_with_budget(&relations[i].1, &relations[j].1, args.budget)
            });
            for (&(i, j), result) in pairs.iter().zip(results) {
                let d = result.map_err(|e| pair_error(i, j, e))?;
                matrix[i][j] = d as u64;
                matrix[j][i] = d as u64;
            }
        }
        ModeArg::Bound => {
            // every ordered cell computed independently, diagonal included
            let cells: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .collect();
            let results = parallel_map(cells.len(), |k| {
                let (i, j) = cells[k];
                match args.sample {
                    Some(size) => distance_bound_sampled(
                        &relations[i].1,
                        &relations[j].1,
                        size,
                        derive_seed(args.seed, (i * n + j) as u64),
                    ),
                    None => distance_bound(&relations[i].1, &relations[j].1),
                }
            });
            for (&(i, j), result) in cells.iter().zip(results) {
                matrix[i][j] = result.map_err(|e| pair_error(i, j, e))? as u64;
            }
        }
    }

    let report = DistanceReport {
        version: 1,
        mode: match (args.mode, args.sample) {
            (ModeArg::Exact, _) => "exact".into(),
            (ModeArg::Bound, None) => "bound".into(),
            (ModeArg::Bound, Some(_)) => "bound-sampled".into(),
        },
        labels: relations.into_iter().map(|(name, _)| name).collect(),
        matrix,
        sample_size: args.sample,
        seed: args.sample.is_some().then_some(args.seed),
    };
    Ok(match args.format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report.to_csv(),
    })
}

pub fn dowker_command(args: &DowkerArgs) -> Result<String, CliError> {
    let relation = load_relation(
        &args.relation,
        args.input_format.into(),
        args.patterns.as_deref(),
    )?;
    let complex = DowkerComplex::new(&relation);
    let report = DowkerReport::new(&args.relation.display().to_string(), &complex, args.weights);
    Ok(match args.format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report.to_csv(),
    })
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return 1;
        }
        Err(e) => {
            // --help and --version land here
            print!("{e}");
            return 0;
        }
    };
    let result = match &cli.command {
        Command::Distance(args) => distance_command(args),
        Command::Dowker(args) => dowker_command(args),
    };
    match result {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
