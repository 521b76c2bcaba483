use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use garland_core::analysis::{analyze, default_level, Options};
use garland_core::cohomology::cohomology_report;
use garland_core::exactness::{self, Identity};
use garland_core::experiment::{run_experiment, summarize, to_csv, ExperimentConfig};
use garland_core::generators::{
    cross_polytope, cube_skeleton, cycle, moment_angle, random_complex, torus_cubical,
    torus_simplicial, Model, RandomModelParams, DEFAULT_REJECTION_CAP,
};
use garland_core::linalg::rational::prime_from_seed;
use garland_core::linalg::RankMode;
use garland_core::{
    build_garland, face_poset, parse_complex, validate, CellComplex, GarlandError, Stage,
};

/// Exit code when an experiment finds a record whose cross-checks disagree.
const EXIT_INCONSISTENT: u8 = 6;

#[derive(Parser)]
#[command(
    name = "garland",
    version,
    about = "Garland posets, link-graph spectra and exact cohomology of cell complexes"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Gaps closer than this to the threshold count as equal to it.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Gaps within this distance of the threshold (but beyond --tol) are inconclusive.
    #[arg(long, global = true, default_value_t = 1e-7)]
    band: f64,
    #[arg(long, global = true, value_enum, default_value_t = RankArg::Exact)]
    rank_mode: RankArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include every eigenvalue in spectral reports.
    #[arg(long, global = true)]
    full_spectra: bool,
    /// Worker threads.
    #[arg(long, global = true, env = "GARLAND_THREADS")]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankArg {
    Exact,
    Modular,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a complex and print it as JSON.
    Build(BuildArgs),
    /// Check the structural rules of a complex.
    Validate { input: String },
    /// Garland poset, spectra and the criterion verdict.
    Analyze(LevelArgs),
    /// Link-graph spectra only.
    Spectra(LevelArgs),
    /// Betti numbers, geometric/transversal class spans and h0(B).
    Cohomology(LevelArgs),
    /// Run the identity suite on the explicit structure.
    Verify {
        #[command(flatten)]
        level: LevelArgs,
        /// Random vectors for the Rayleigh identity.
        #[arg(long, default_value_t = 100)]
        rayleigh: usize,
    },
    /// Seeded trials of a random model, as CSV.
    Experiment(ExperimentArgs),
    /// Moment-angle complex of a simplicial complex.
    MomentAngle { input: String },
}

#[derive(Args)]
struct LevelArgs {
    /// Complex JSON file, or - for stdin.
    input: String,
    /// Defaults to one below the top dimension.
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    TorusCubical,
    TorusSimplicial,
    MomentAngle,
    Ydelta,
    Ybox,
    Zbox,
    Cycle,
    CubeSkeleton,
    CrossPolytope,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long = "gen", value_enum)]
    generator: Generator,
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 4)]
    h: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Simplicial complex for --gen moment-angle.
    #[arg(long)]
    from: Option<String>,
    #[arg(long, default_value_t = DEFAULT_REJECTION_CAP)]
    rejection_cap: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_REJECTION_CAP)]
    rejection_cap: u64,
    /// Summary JSON file; stderr when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

enum Failure {
    Core(GarlandError),
    Io(String),
    Invalid(String),
    Inconsistent(String),
}

impl From<GarlandError> for Failure {
    fn from(e: GarlandError) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn exit_code(stage: Stage) -> u8 {
    match stage {
        Stage::Parse => 2,
        Stage::Validate => 3,
        Stage::Structure => 4,
        Stage::Numeric => 5,
        Stage::Usage => 1,
    }
}

fn stage_name(stage: Stage) -> &'static str {
    match stage {
        Stage::Parse => "parse",
        Stage::Validate => "validate",
        Stage::Structure => "structure",
        Stage::Numeric => "numeric",
        Stage::Usage => "usage",
    }
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
    if let Some(n) = cli.global.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error [{}]: {e}", stage_name(e.stage()));
            ExitCode::from(exit_code(e.stage()))
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error [io]: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(report)) => {
            eprintln!("error [validate]: complex is invalid");
            let _ = writeln!(io::stdout(), "{report}");
            ExitCode::from(3)
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("error [theorem]: {msg}");
            ExitCode::from(EXIT_INCONSISTENT)
        }
    }
}

fn options(g: &Global) -> Options {
    Options {
        tol: g.tol,
        band: g.band,
        rank_mode: rank_mode(g),
        seed: g.seed,
        ..Options::default()
    }
}

fn rank_mode(g: &Global) -> RankMode {
    match g.rank_mode {
        RankArg::Exact => RankMode::Exact,
        RankArg::Modular => RankMode::Modular(prime_from_seed(g.seed)),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load(path: &str) -> Result<CellComplex, Failure> {
    Ok(parse_complex(&read_input(path)?)?)
}

fn emit(g: &Global, text: &str) -> Result<(), Failure> {
    match &g.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => writeln!(io::stdout(), "{text}")?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(g: &Global, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    emit(g, &text)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Build(args) => emit(g, &build(g, args)?.to_json_pretty()),
        Command::Validate { input } => {
            let report = validate(&load(input)?);
            let text =
                serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
            if report.ok {
                emit(g, &text)
            } else {
                Err(Failure::Invalid(text))
            }
        }
        Command::Analyze(args) => {
            let fp = face_poset(&load(&args.input)?)?;
            let level = args.level.unwrap_or_else(|| default_level(&fp));
            let (_, mut report) = analyze(&fp, level, &options(g))?;
            if !g.full_spectra {
                for c in &mut report.spectra.components {
                    c.eigenvalues.clear();
                }
            }
            emit_json(g, &report)
        }
        Command::Spectra(args) => {
            let fp = face_poset(&load(&args.input)?)?;
            let level = args.level.unwrap_or_else(|| default_level(&fp));
            let (_, report) = analyze(&fp, level, &options(g))?;
            let mut spectra = report.spectra;
            if !g.full_spectra {
                for c in &mut spectra.components {
                    c.eigenvalues.clear();
                }
            }
            emit_json(g, &spectra)
        }
        Command::Cohomology(args) => {
            let fp = face_poset(&load(&args.input)?)?;
            let level = args.level.unwrap_or_else(|| default_level(&fp));
            let garland = build_garland(&fp, level)?;
            let e = exactness::assemble(&garland)?;
            let mode = rank_mode(g);
            let report = cohomology_report(&garland, &fp, exactness::h0_dim(&e, mode), mode)?;
            emit_json(g, &report)
        }
        Command::Verify { level, rayleigh } => verify(g, level, *rayleigh),
        Command::Experiment(args) => experiment(g, args),
        Command::MomentAngle { input } => emit(g, &moment_angle(&load(input)?)?.to_json_pretty()),
    }
}

fn build(g: &Global, a: &BuildArgs) -> Result<CellComplex, Failure> {
    let random = |model: Model| -> Result<CellComplex, Failure> {
        let params = RandomModelParams {
            model,
            h: a.h,
            d: a.d,
            k: a.k,
            seed: g.seed,
        };
        Ok(random_complex(&params, a.rejection_cap)?.complex)
    };
    Ok(match a.generator {
        Generator::TorusCubical => torus_cubical(a.m, a.n)?,
        Generator::TorusSimplicial => torus_simplicial(a.m, a.n)?,
        Generator::Cycle => cycle(a.n)?,
        Generator::CubeSkeleton => cube_skeleton(a.r)?,
        Generator::CrossPolytope => cross_polytope(a.n)?,
        Generator::MomentAngle => {
            let Some(from) = &a.from else {
                return Err(
                    GarlandError::Parameter("--gen moment-angle needs --from".into()).into(),
                );
            };
            moment_angle(&load(from)?)?
        }
        Generator::Ydelta => random(Model::Ydelta)?,
        Generator::Ybox => random(Model::Ybox)?,
        Generator::Zbox => random(Model::Zbox)?,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyReport {
    level: usize,
    #[serde(serialize_with = "garland_core::spectral::serialize_extended")]
    alpha: f64,
    #[serde(serialize_with = "garland_core::spectral::serialize_extended")]
    beta: f64,
    beta_bound: f64,
    #[serde(rename = "h0B")]
    h0b: usize,
    blocks_exact: bool,
    identities: Vec<Identity>,
}

fn verify(g: &Global, args: &LevelArgs, rayleigh: usize) -> Result<(), Failure> {
    let fp = face_poset(&load(&args.input)?)?;
    let level = args.level.unwrap_or_else(|| default_level(&fp));
    let garland = build_garland(&fp, level)?;
    let e = exactness::assemble(&garland)?;
    let r = exactness::analyze_structure(&e, rank_mode(g), g.seed, rayleigh)?;
    let width = r
        .identities
        .iter()
        .map(|i| i.name.chars().count())
        .max()
        .unwrap_or(0);
    let mut err = io::stderr().lock();
    for i in &r.identities {
        let pad = width - i.name.chars().count();
        writeln!(
            err,
            "{}{}  {}  {:.3e}",
            i.name,
            " ".repeat(pad),
            if i.pass { "pass" } else { "FAIL" },
            i.residual
        )?;
    }
    drop(err);
    emit_json(
        g,
        &VerifyReport {
            level,
            alpha: r.alpha,
            beta: r.beta,
            beta_bound: r.beta_bound,
            h0b: r.h0b,
            blocks_exact: r.blocks_exact,
            identities: r.identities,
        },
    )
}

fn experiment(g: &Global, a: &ExperimentArgs) -> Result<(), Failure> {
    let model: Model = a.model.parse()?;
    let mut cfg = ExperimentConfig::new(model, a.h, a.d, a.k, a.trials, g.seed);
    cfg.options = options(g);
    cfg.rejection_cap = a.rejection_cap;
    cfg.threads = g.threads;
    let records = run_experiment(&cfg)?;
    let csv = to_csv(&records);
    match &g.out {
        Some(path) => std::fs::write(path, &csv)?,
        None => io::stdout().write_all(csv.as_bytes())?,
    }
    let summary = summarize(&cfg, &records);
    let text = serde_json::to_string_pretty(&summary).expect("summary serialization cannot fail");
    match &a.summary {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => eprintln!("{text}"),
    }
    if summary.all_consistent {
        Ok(())
    } else {
        Err(Failure::Inconsistent(format!(
            "cross-checks disagree in trials {:?}",
            summary.inconsistent_trials
        )))
    }
}
