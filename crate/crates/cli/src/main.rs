use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use collusion::assign::{assign_dataset, similarity, DEFAULT_PAPER_LOAD, DEFAULT_REVIEWER_CAP};
use collusion::census::{peel_bi, peel_uni};
use collusion::dataset::{
    generate_synthetic_dataset, generate_text_similarities, load_dataset_with, sample_text_similarities, save_csv,
    save_json, subsample_authorships, triple_agreement, triple_agreement_in, BidLevel, ConferenceDataset,
    DatasetFormat, LoadOptions, SyntheticConfig, TextSimModel,
};
use collusion::detect::{run_detection, Algorithm, DetectConfig, InitPlan, Representation};
use collusion::error::{Error, Result};
use collusion::graph::{build_bi, build_uni, BiEdgeChoice};
use collusion::harness::{
    census_grid, sweep_detection, sweep_success, write_census_csv, write_heatmaps, write_records_jsonl,
    write_summary_csv, CensusConfig, SweepConfig, SweepOutput, DEFAULT_TRIALS,
};

#[derive(Parser)]
#[command(name = "collusion", version, about = "Collusion-ring simulation, detection and assignment experiments")]
struct Cli {
    /// Master random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps and census grids.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Census search budget per group size, in seconds.
    #[arg(long, global = true)]
    time_budget: Option<f64>,
    /// Format of dataset inputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Preflib,
    Json,
}

impl From<Format> for DatasetFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => DatasetFormat::CsvTriplets,
            Format::Preflib => DatasetFormat::PreflibCategorical,
            Format::Json => DatasetFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Repr {
    Uni,
    Bi,
}

impl From<Repr> for Representation {
    fn from(r: Repr) -> Self {
        match r {
            Repr::Uni => Representation::Uni,
            Repr::Bi => Representation::Bi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EdgeChoice {
    Bids,
    BidsAndAuthorships,
}

#[derive(Clone, Copy, ValueEnum)]
enum Starts {
    /// Per-algorithm default.
    Default,
    /// Heuristic start only.
    Heuristic,
    /// Heuristic start plus ten random starts.
    Standard,
}

#[derive(Args)]
struct Input {
    /// Dataset file.
    #[arg(short, long)]
    input: PathBuf,
    /// Discard bids placed on conflicted pairs instead of rejecting the file.
    #[arg(long)]
    drop_conflicted_bids: bool,
    /// Keep this many sampled authors per paper (drawn from its conflicts).
    #[arg(long)]
    authors_per_paper: Option<usize>,
}

#[derive(Args)]
struct DetectArgs {
    /// Quasi-clique penalty.
    #[arg(long, default_value_t = collusion::detect::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Starts::Default)]
    starts: Starts,
    /// Bipartite edges seen by the generic detectors.
    #[arg(long, value_enum, default_value_t = EdgeChoice::Bids)]
    edge_choice: EdgeChoice,
}

impl DetectArgs {
    fn config(&self, seed: u64) -> DetectConfig {
        DetectConfig {
            alpha: self.alpha,
            init: match self.starts {
                Starts::Default => None,
                Starts::Heuristic => Some(InitPlan::HEURISTIC_ONLY),
                Starts::Standard => Some(InitPlan::STANDARD),
            },
            seed,
            edge_choice: match self.edge_choice {
                EdgeChoice::Bids => BiEdgeChoice::BidsOnly,
                EdgeChoice::BidsAndAuthorships => BiEdgeChoice::BidsAndAuthorships,
            },
            ..DetectConfig::default()
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    repr: Repr,
    /// Ring sizes.
    #[arg(long, value_delimiter = ',')]
    ks: Vec<usize>,
    /// Target densities.
    #[arg(long, value_delimiter = ',')]
    densities: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Use the full (k, density) grid; explicit --ks/--densities override it.
    #[arg(long)]
    paper_grid: bool,
    /// Output directory for summary.csv and trials.jsonl.
    #[arg(short, long)]
    out: PathBuf,
    /// Also write one k-by-density matrix per metric.
    #[arg(long)]
    heatmaps: bool,
}

impl SweepArgs {
    fn config(&self, cli: &Cli) -> SweepConfig {
        let repr = self.repr.into();
        let mut cfg = if self.paper_grid {
            SweepConfig::paper_grid(repr)
        } else {
            SweepConfig::new(repr)
        };
        if !self.ks.is_empty() {
            cfg.ks = self.ks.clone();
        }
        if !self.densities.is_empty() {
            cfg.densities = self.densities.clone();
        }
        cfg.trials = self.trials;
        cfg.seed = cli.seed;
        cfg.workers = cli.workers;
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic conference.
    Gen {
        #[arg(long, default_value_t = 200)]
        reviewers: usize,
        #[arg(long, default_value_t = 150)]
        papers: usize,
        #[arg(long, default_value_t = 0.02)]
        bid_prob: f64,
        #[arg(long, default_value_t = 3)]
        authors_per_paper: usize,
        /// Output file; `.json` selects JSON, anything else CSV.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Attach synthetic text similarities and report triple agreement.
    Textsim {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = TextSimModel::default().sigma)]
        sigma: f64,
        #[arg(long, default_value_t = TextSimModel::default().base_mean)]
        base_mean: f64,
        #[arg(long, default_value_t = TextSimModel::default().p_easy)]
        p_easy: f64,
        #[arg(long, default_value_t = TextSimModel::default().p_hard)]
        p_hard: f64,
        /// Output dataset; `.json` selects JSON, anything else CSV.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Load a dataset, check its invariants and print its shape.
    LoadCheck {
        #[command(flatten)]
        input: Input,
    },
    /// Count honest groups per (k, threshold).
    Census {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        repr: Repr,
        #[arg(long, value_delimiter = ',')]
        ks: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        thresholds: Vec<f64>,
        /// Use the full census grid; explicit lists override it.
        #[arg(long)]
        paper_grid: bool,
        /// CSV output (stdout if omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Greedy-peeling density frontier.
    Peel {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        repr: Repr,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one detector on a dataset.
    Detect {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        repr: Repr,
        #[arg(short, long)]
        algorithm: Algorithm,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Detection accuracy over a (k, density) grid.
    SweepDetect {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Detectors to run (default: all supported).
        #[arg(long, value_delimiter = ',')]
        algorithms: Vec<Algorithm>,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Manipulation success over a (k, density) grid.
    SweepSuccess {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = DEFAULT_PAPER_LOAD)]
        paper_load: usize,
        #[arg(long, default_value_t = DEFAULT_REVIEWER_CAP)]
        reviewer_cap: usize,
    },
    /// Solve the maximum-similarity assignment.
    Assign {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_PAPER_LOAD)]
        paper_load: usize,
        #[arg(long, default_value_t = DEFAULT_REVIEWER_CAP)]
        reviewer_cap: usize,
        /// `paper,reviewer` CSV (stdout if omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn load(cli: &Cli, input: &Input) -> Result<(ConferenceDataset, usize)> {
    let opts = LoadOptions {
        drop_conflicted_bids: input.drop_conflicted_bids,
    };
    let loaded = load_dataset_with(&input.input, cli.format.into(), &opts)?;
    let ds = match input.authors_per_paper {
        Some(n) => subsample_authorships(&loaded.dataset, n, cli.seed)?,
        None => loaded.dataset,
    };
    Ok((ds, loaded.discarded_bids))
}

fn save(ds: &ConferenceDataset, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e == "json") {
        save_json(ds, path)
    } else {
        save_csv(ds, path)
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn write_sweep(args: &SweepArgs, out: &SweepOutput) -> Result<()> {
    std::fs::create_dir_all(&args.out)?;
    write_summary_csv(&out.summary, BufWriter::new(File::create(args.out.join("summary.csv"))?))?;
    write_records_jsonl(&out.records, BufWriter::new(File::create(args.out.join("trials.jsonl"))?))?;
    if args.heatmaps {
        write_heatmaps(&out.summary, &args.out)?;
    }
    let failed = out.records.iter().filter(|r| r.error.is_some()).count();
    print_json(&json!({
        "trials": out.records.len(),
        "failed_trials": failed,
        "summary": args.out.join("summary.csv"),
    }))
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen {
            reviewers,
            papers,
            bid_prob,
            authors_per_paper,
            out,
        } => {
            let ds = generate_synthetic_dataset(&SyntheticConfig {
                n_reviewers: *reviewers,
                n_papers: *papers,
                bid_prob: *bid_prob,
                authors_per_paper: *authors_per_paper,
                seed: cli.seed,
            })?;
            save(&ds, out)
        }
        Command::Textsim {
            input,
            sigma,
            base_mean,
            p_easy,
            p_hard,
            out,
        } => {
            let (ds, _) = load(cli, input)?;
            let model = TextSimModel {
                base_mean: *base_mean,
                sigma: *sigma,
                p_easy: *p_easy,
                p_hard: *p_hard,
            };
            let raw = sample_text_similarities(&ds, &model, cli.seed)?;
            let ds = generate_text_similarities(&ds, &model, cli.seed)?;
            save(&ds, out)?;
            let easy = (&[BidLevel::YES, BidLevel::MAYBE][..], &[BidLevel::NONE][..]);
            let hard = (&[BidLevel::YES][..], &[BidLevel::MAYBE][..]);
            let frac = |t: collusion::dataset::TripleAgreement| json!({"fraction": t.fraction(), "triples": t.total});
            print_json(&json!({
                "easy": {
                    "unclamped": frac(triple_agreement_in(&ds, &raw, easy.0, easy.1)?),
                    "clamped": frac(triple_agreement(&ds, easy.0, easy.1)?),
                },
                "hard": {
                    "unclamped": frac(triple_agreement_in(&ds, &raw, hard.0, hard.1)?),
                    "clamped": frac(triple_agreement(&ds, hard.0, hard.1)?),
                },
            }))
        }
        Command::LoadCheck { input } => {
            let (ds, discarded) = load(cli, input)?;
            print_json(&json!({
                "reviewers": ds.n_reviewers(),
                "papers": ds.n_papers(),
                "authors": ds.author_reviewers().len(),
                "bids": ds.bids().len(),
                "authorships": ds.authorships().len(),
                "conflicts": ds.conflicts().len(),
                "text_similarities": ds.text_sim().is_some(),
                "discarded_bids": discarded,
            }))
        }
        Command::Census {
            input,
            repr,
            ks,
            thresholds,
            paper_grid,
            out,
        } => {
            let (ds, _) = load(cli, input)?;
            let repr = (*repr).into();
            let mut cfg = if *paper_grid {
                CensusConfig::paper_grid(repr)
            } else {
                CensusConfig {
                    representation: repr,
                    ks: (2..=5).collect(),
                    thresholds: vec![0.5, 0.75, 1.0],
                    budget: None,
                    workers: 1,
                }
            };
            if !ks.is_empty() {
                cfg.ks = ks.clone();
            }
            if !thresholds.is_empty() {
                cfg.thresholds = thresholds.clone();
            }
            cfg.workers = cli.workers;
            cfg.budget = budget(cli.time_budget)?;
            let cells = census_grid(&cfg, &ds)?;
            write_census_csv(&cells, sink(out.as_deref())?)
        }
        Command::Peel { input, repr, out } => {
            let (ds, _) = load(cli, input)?;
            let authors = ds.author_reviewers();
            let frontier = match repr {
                Repr::Uni => peel_uni(&build_uni(&ds), &authors)?,
                Repr::Bi => peel_bi(&build_bi(&ds), &authors)?,
            };
            let mut w = sink(out.as_deref())?;
            writeln!(w, "size,density,degenerate")?;
            for p in &frontier.points {
                writeln!(w, "{},{},{}", p.size, p.density, p.degenerate)?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Detect {
            input,
            repr,
            algorithm,
            detect,
        } => {
            let (ds, _) = load(cli, input)?;
            let result = run_detection(&ds, *algorithm, (*repr).into(), &detect.config(cli.seed))?;
            let names: Vec<&str> = result.subset.iter().map(|&r| ds.reviewer_name(r)).collect();
            let mut v = serde_json::to_value(&result)?;
            v["reviewers"] = json!(names);
            print_json(&v)
        }
        Command::SweepDetect {
            sweep,
            algorithms,
            detect,
        } => {
            let (ds, _) = load(cli, &sweep.input)?;
            let mut cfg = sweep.config(cli);
            if !algorithms.is_empty() {
                cfg.algorithms = algorithms.clone();
            }
            cfg.detect = detect.config(cli.seed);
            write_sweep(sweep, &sweep_detection(&cfg, &ds)?)
        }
        Command::SweepSuccess {
            sweep,
            paper_load,
            reviewer_cap,
        } => {
            let (ds, _) = load(cli, &sweep.input)?;
            let mut cfg = sweep.config(cli);
            cfg.paper_load = *paper_load;
            cfg.reviewer_cap = *reviewer_cap;
            write_sweep(sweep, &sweep_success(&cfg, &ds)?)
        }
        Command::Assign {
            input,
            paper_load,
            reviewer_cap,
            out,
        } => {
            let (ds, _) = load(cli, input)?;
            let a = assign_dataset(&ds, *paper_load, *reviewer_cap)?;
            let objective = a.objective(&similarity(&ds)?);
            a.write_csv(&ds, sink(out.as_deref())?)?;
            if out.is_some() {
                print_json(&json!({ "objective": objective, "pairs": a.pairs().count() }))?;
            } else {
                eprintln!("objective {objective}");
            }
            Ok(())
        }
    }
}

fn budget(secs: Option<f64>) -> Result<Option<Duration>> {
    secs.map(|s| Duration::try_from_secs_f64(s).map_err(|_| Error::config(format!("bad time budget {s}"))))
        .transpose()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .parse_default_env()
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
