use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hamming_penalty::analysis::{
    interaction_graph, sparse_zero_witness, symmetrize, AnalysisError,
};
use hamming_penalty::builders::{BuildError, CoefficientBounds};
use hamming_penalty::certify::{certify_grid, standard_grid, uniform_grid, CertifyError, GridCase};
use hamming_penalty::enumerate::{default_workers, min_penalty_with, EnumerationError};
use hamming_penalty::io::{parse_bounds, parse_group, parse_model, render_model, SpinConvention};
use hamming_penalty::{
    build_ising_hamming, build_qubo_hamming, optimal_ising_scale, optimal_qubo_scale, Model,
    ModelKind, Rational,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "hwpen",
    version,
    about = "Penalty models for fixed Hamming weight"
)]
struct Cli {
    /// Spin convention of Ising files read or written.
    #[arg(long, value_enum, global = true, default_value = "plus")]
    spin_convention: Convention,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Qubo,
    Ising,
}

impl From<Kind> for ModelKind {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::Qubo => ModelKind::Qubo,
            Kind::Ising => ModelKind::Ising,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the penalty model for weight r.
    Build(BuildArgs),
    /// Report how well a model isolates weight r.
    Verify {
        model: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compare LP optima against the closed-form gap.
    Certify(CertifyArgs),
    /// Rewrite a QUBO as an Ising model or back.
    Convert {
        model: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Average a model over a permutation group.
    Symmetrize {
        model: PathBuf,
        #[arg(long)]
        group: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Summarize the interaction graph.
    Analyze {
        model: PathBuf,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    /// Energy scale E as p/q.
    #[arg(long, conflicts_with = "bounds", required_unless_present = "bounds")]
    scale: Option<Rational>,
    /// Coefficient bounds file; selects the optimal scale.
    #[arg(long)]
    bounds: Option<PathBuf>,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
    r: Option<usize>,
    /// Coefficient bounds file. With --grid it defaults to the standard profiles.
    #[arg(long, required_unless_present = "grid")]
    bounds: Option<PathBuf>,
    /// Certify every 1 <= r < n for n in --n-min..=--n-max.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 3, requires = "grid")]
    n_min: usize,
    #[arg(long, default_value_t = 7, requires = "grid")]
    n_max: usize,
    #[arg(long)]
    jobs: Option<usize>,
}

enum Failure {
    /// Malformed input files or arguments.
    Input(String),
    /// Verification or certification did not pass.
    Rejected,
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Capacity { .. }
            | CertifyError::UnsupportedWeight { .. }
            | CertifyError::Build(_) => Failure::Input(e.to_string()),
            CertifyError::Solver(_) | CertifyError::NotOptimal(_) => {
                Failure::Internal(e.to_string())
            }
        }
    }
}

struct Context {
    convention: SpinConvention,
}

impl Context {
    fn read(path: &Path) -> Result<String, Failure> {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn read_model(&self, path: &Path) -> Result<Model, Failure> {
        parse_model(&Self::read(path)?, self.convention)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn read_bounds(&self, path: &Path, kind: ModelKind) -> Result<CoefficientBounds, Failure> {
        let bounds = parse_bounds(&Self::read(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        if bounds.kind() != kind {
            return Err(Failure::Input(format!(
                "{}: {} bounds given for a {kind} model",
                path.display(),
                bounds.kind()
            )));
        }
        Ok(bounds)
    }

    fn write_model(&self, path: &Path, model: &Model) -> Result<(), Failure> {
        fs::write(path, render_model(model, self.convention))
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output serializes")
    );
}

fn workers(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(default_workers).max(1)
}

fn build(ctx: &Context, args: &BuildArgs) -> Result<(), Failure> {
    let kind = ModelKind::from(args.kind);
    let scale = match (&args.scale, &args.bounds) {
        (Some(scale), _) => scale.clone(),
        (None, Some(path)) => {
            let result = match ctx.read_bounds(path, kind)? {
                CoefficientBounds::Qubo(b) => optimal_qubo_scale(args.n, args.r, &b)?,
                CoefficientBounds::Ising(b) => optimal_ising_scale(args.n, args.r, &b)?,
            };
            print_json(&result);
            result.energy_scale
        }
        (None, None) => unreachable!("clap requires --scale or --bounds"),
    };
    let model: Model = match kind {
        ModelKind::Qubo => build_qubo_hamming(args.n, args.r, &scale)?.into(),
        ModelKind::Ising => build_ising_hamming(args.n, args.r, &scale)?.into(),
    };
    ctx.write_model(&args.output, &model)
}

fn verify(ctx: &Context, path: &Path, r: usize, jobs: Option<usize>) -> Result<(), Failure> {
    let model = ctx.read_model(path)?;
    let report = min_penalty_with(&model.to_qubo(), r, workers(jobs))?;
    print_json(&report);
    if report.exact_penalty {
        Ok(())
    } else {
        Err(Failure::Rejected)
    }
}

fn certify(ctx: &Context, args: &CertifyArgs) -> Result<(), Failure> {
    let kind = ModelKind::from(args.kind);
    let bounds = match &args.bounds {
        Some(path) => Some(ctx.read_bounds(path, kind)?),
        None => None,
    };
    let cases = if args.grid {
        if args.n_min > args.n_max {
            return Err(Failure::Input(format!(
                "--n-min {} exceeds --n-max {}",
                args.n_min, args.n_max
            )));
        }
        let sizes = args.n_min..=args.n_max;
        match &bounds {
            Some(b) => uniform_grid(b, sizes),
            None => standard_grid(kind, sizes),
        }
    } else {
        vec![GridCase {
            n: args.n.expect("clap requires --n"),
            r: args.r.expect("clap requires --r"),
            bounds: bounds.expect("clap requires --bounds"),
        }]
    };
    let mut all_passed = true;
    for result in certify_grid(&cases, workers(args.jobs)) {
        let certificate = result?;
        all_passed &= certificate.passed();
        print_json(&certificate);
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Rejected)
    }
}

fn analyze(ctx: &Context, path: &Path, r: usize) -> Result<(), Failure> {
    let model = ctx.read_model(path)?;
    let n = model.n();
    if r == 0 || r >= n {
        return Err(AnalysisError::Weight { r, n }.into());
    }
    let qubo = model.to_qubo();
    let graph = interaction_graph(&qubo);
    let witness = if graph.is_complete() {
        None
    } else {
        match sparse_zero_witness(&qubo, r) {
            Ok(w) => Some(w),
            Err(AnalysisError::NotVanishing { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    };
    print_json(&json!({
        "kind": model.kind(),
        "n": n,
        "r": r,
        "edges": graph.edge_count(),
        "complete": graph.is_complete(),
        "missing_edges": graph.missing_edges(),
        "zero_witness": witness.map(|w| json!({
            "bitstring": w.bitstring.to_string(),
            "weight": w.bitstring.weight(),
            "value": w.value,
            "nonnegative": w.nonnegative,
        })),
    }));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Context {
        convention: match cli.spin_convention {
            Convention::Plus => SpinConvention::Plus,
            Convention::Minus => SpinConvention::Minus,
        },
    };
    match &cli.command {
        Command::Build(args) => build(&ctx, args),
        Command::Verify { model, r, jobs } => verify(&ctx, model, *r, *jobs),
        Command::Certify(args) => certify(&ctx, args),
        Command::Convert { model, output } => {
            let converted = ctx.read_model(model)?.converted();
            ctx.write_model(output, &converted)
        }
        Command::Symmetrize {
            model,
            group,
            output,
        } => {
            let model = ctx.read_model(model)?;
            let group = parse_group(&Context::read(group)?, model.n())
                .map_err(|e| Failure::Input(format!("{}: {e}", group.display())))?;
            let averaged: Model = match &model {
                Model::Qubo(q) => symmetrize(q, &group)?.into(),
                Model::Ising(m) => symmetrize(m, &group)?.into(),
            };
            ctx.write_model(output, &averaged)
        }
        Command::Analyze { model, r } => analyze(&ctx, model, *r),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Internal(msg) => eprintln!("internal error: {msg}"),
                Failure::Rejected => {}
            }
            ExitCode::from(failure.code())
        }
    }
}
