//! Command-line front end. Stores go to `--out` with a `<out>.summary`
//! sidecar; counts and tables go to stdout as TSV, progress to stderr.
//!
//! Exit status: 0 on success, 1 on domain errors, 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::orderly::{CanonStore, GenerateOptions};
use crate::pipelines::{self, ChainParams, ReportOptions};

#[derive(Parser, Debug)]
#[command(name = "cis-classify", version, about = "Classify CIS codes and GL(n, F2) classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunFlags {
    /// Split the final generation step into this many shards.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// Shard to compute, in 0..shards.
    #[arg(long, default_value_t = 0)]
    pub shard_index: usize,
    /// Acknowledge a multi-hour run.
    #[arg(long)]
    pub extended: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// GL(n, F2) classes from the GL(n-1) store.
    ClassifyGl {
        #[arg(long)]
        n: usize,
        /// GL(n-1) store; not needed for n = 1.
        #[arg(long)]
        prev: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Length 2n CIS codes [I | A] from the GL(n) store.
    ClassifyCis {
        #[arg(long)]
        n: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// All [n, k, >= dmin] codes along subcode chains.
    Chain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dmin: usize,
        #[arg(long)]
        even_only: bool,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Codes C + <x> of one dimension more, at the same length.
    ExtendDim {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        dmin: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Minimum weight 2 CIS codes of length 2n from the length 2n-2 store.
    Weight2Cis {
        #[arg(long)]
        prev: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Tests one generator matrix (text format) for CIS.
    IsCis { file: PathBuf },
    /// CIS / non-CIS counts over a store.
    SurveyOptimal {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Counts by minimum weight: total, SD, only FSD, neither.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Add a column counting d_dual != 1.
        #[arg(long)]
        dual_column: bool,
        /// Add even / odd FSD columns.
        #[arg(long)]
        parity: bool,
    },
    /// Union of shard stores.
    Merge {
        #[arg(long)]
        out: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Re-keys and re-tags every record.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Parses `argv` (program name first) and runs one subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn prepare(run: &RunFlags, heavy: Option<&str>) -> Result<GenerateOptions, Failure> {
    if run.shards == 0 || run.shard_index >= run.shards {
        return Err(Failure::Usage(format!(
            "--shard-index {} is out of range for --shards {}",
            run.shard_index, run.shards
        )));
    }
    if let Some(what) = heavy {
        if !run.extended {
            return Err(Failure::Usage(format!("{what} is a multi-hour run; pass --extended to confirm")));
        }
    }
    if let Some(t) = run.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(GenerateOptions {
        progress: true,
        ..GenerateOptions::sharded(run.shards, run.shard_index)
    })
}

fn finish(store: &CanonStore, out: &Path) -> Result<()> {
    store.save(out)?;
    store.save_summary(out)?;
    print!("{}", store.summary().to_tsv());
    Ok(())
}

fn single_length(store: &CanonStore) -> Result<Option<usize>, Failure> {
    let mut lengths = store.tags().map(|t| t.n);
    let first = lengths.next();
    if lengths.any(|n| Some(n) != first) {
        return Err(Failure::Domain(Error::DimensionMismatch("store mixes code lengths".into())));
    }
    Ok(first)
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::ClassifyGl { n, prev, out, run } => {
            let opts = prepare(&run, (n >= 7).then_some("GL(n) for n >= 7"))?;
            let prev = match (n, prev) {
                (1, _) => CanonStore::new(),
                (_, Some(p)) => CanonStore::load(&p)?,
                (_, None) => return Err(Failure::Usage("--prev is required for n > 1".into())),
            };
            finish(&pipelines::classify_gl(n, &prev, &opts)?, &out)?;
        }
        Command::ClassifyCis { n, input, out, run } => {
            let opts = prepare(&run, (n >= 7).then_some("CIS classification at length >= 14"))?;
            let gl = CanonStore::load(&input)?;
            finish(&pipelines::classify_cis_from_gl(n, &gl, &opts)?, &out)?;
        }
        Command::Chain { n, k, dmin, even_only, out, run } => {
            let opts = prepare(&run, None)?;
            let p = ChainParams { target_n: n, target_k: k, d_min: dmin, even_only };
            finish(&pipelines::chain_classify(&p, &opts)?, &out)?;
        }
        Command::ExtendDim { input, dmin, out, run } => {
            let base = CanonStore::load(&input)?;
            let len = single_length(&base)?;
            let opts = prepare(&run, len.filter(|&n| n >= 16).map(|_| "dimension extension at length >= 16"))?;
            finish(&pipelines::extend_dimension(&base, dmin, &opts)?, &out)?;
        }
        Command::Weight2Cis { prev, out, run } => {
            let base = CanonStore::load(&prev)?;
            let len = single_length(&base)?;
            let opts = prepare(&run, len.filter(|&n| n + 2 >= 16).map(|_| "weight-2 CIS at length >= 16"))?;
            finish(&pipelines::build_weight2_cis(&base, &opts)?, &out)?;
        }
        Command::IsCis { file } => {
            let text = fs::read_to_string(&file).map_err(Error::from)?;
            let code = LinearCode::new(&Gf2Matrix::from_text(&text)?)?;
            match code.cis_certificate()? {
                Some(cert) => println!("YES\t{cert}"),
                None => println!("NO"),
            }
        }
        Command::SurveyOptimal { input } => {
            let store = CanonStore::load(&input)?;
            print!("{}", pipelines::optimal_cis_survey(&store)?.to_tsv());
        }
        Command::Report { input, dual_column, parity } => {
            let store = CanonStore::load(&input)?;
            let rep = pipelines::classification_report(&store, ReportOptions { dual_column, parity });
            print!("{}", rep.to_tsv());
        }
        Command::Merge { out, inputs } => {
            let parts = inputs
                .iter()
                .map(|p| CanonStore::load(p))
                .collect::<Result<Vec<_>>>()?;
            finish(&CanonStore::merge(&parts)?, &out)?;
        }
        Command::Validate { input } => {
            let store = CanonStore::load(&input)?;
            store.validate()?;
            println!("OK\t{}", store.len());
        }
    }
    Ok(())
}
