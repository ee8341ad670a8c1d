use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvwalk_cli::config::MetricKind;
use cvwalk_cli::{emit, run, CliError, Command, ErrorCode, ExperimentConfig, Format};

const GRAMMAR: &str = "\
Group specs: z:<d>, zmod:<p>, f2, heisenberg, bs:<q> (BS(1,q)), wreath (Z wr Z).
Generator literals are separated by top-level commas:
  z:d         [1,0,-2]
  zmod:p      3
  f2          words over a, b; uppercase is the inverse, e.g. abAB or a^2 B
  heisenberg  (x,y,z) or a word over x, y, z
  bs:q        word over a, b, e.g. aB
  wreath      (shift,{pos:value,...}), e.g. (2,{1:1})
Repeated generators are kept: [1],[1],[-2] has three elements.";

#[derive(Parser)]
#[command(name = "cvwalk", version, about = "Centered random walks: cycle covers, forms, group walks", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    cmd: Top,
    /// Numerical tolerance (default 1e-12).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (written atomically); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Top {
    #[command(subcommand)]
    Centering(CenteringCmd),
    #[command(subcommand)]
    Group(GroupCmd),
    #[command(subcommand)]
    Walk(WalkCmd),
    #[command(subcommand)]
    Dirichlet(DirichletCmd),
    #[command(subcommand)]
    Green(GreenCmd),
    #[command(subcommand)]
    F2(F2Cmd),
    /// Run an experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum CenteringCmd {
    /// Check a cycle decomposition against a graph.
    Verify(Params),
    /// Decompose a reversible chain into 2-cycles.
    Reversible(Params),
    /// Peel the chain's edge flow into cycles.
    FromFlow(Params),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Search for an ordering of the generators with trivial product.
    C1Search(Params),
    /// Check that the abelianized generator sum has finite order.
    C2Check(Params),
    /// Word distance of an element.
    Dist(Params),
}

#[derive(Subcommand)]
enum WalkCmd {
    /// Exact distributions of the walk up to tmax.
    Evolve(Params),
    /// Fit the smallest constant in the heat kernel bound.
    CvFit(Params),
    /// Probability of being at distance at least alpha*t.
    Escape(Params),
    /// Monte Carlo rate of escape.
    Speed(Params),
    /// Monte Carlo entropy rate.
    Entropy(Params),
    /// Ball sizes of the Cayley graph.
    Volume(Params),
}

#[derive(Subcommand)]
enum DirichletCmd {
    /// Estimate the sector constant.
    Sector(Params),
    /// Poincare constant of the rotation walk on a k-cycle.
    Poincare(Params),
}

#[derive(Subcommand)]
enum GreenCmd {
    /// Compare Green functions of a killed chain and its symmetrization.
    Compare(Params),
}

#[derive(Subcommand)]
enum F2Cmd {
    /// Cancellation graph for an arrangement of the fixed F2 sequence.
    Reduce(Params),
}

/// Parameters shared by every command; each command rejects the ones it does not use.
#[derive(Args, Default)]
struct Params {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    gens: Option<String>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    dec: Option<PathBuf>,
    #[arg(long)]
    element: Option<String>,
    /// Permutation of 1..6, e.g. 1,6,3,5,2,4.
    #[arg(long)]
    arrangement: Option<String>,
    #[arg(long)]
    tmax: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    d_exp: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    margin: Option<usize>,
    #[arg(long)]
    m_hat: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    prune: Option<f64>,
    #[arg(long)]
    max_support: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, value_enum)]
    metric: Option<MetricKind>,
}

impl Params {
    fn into_config(self, command: Command) -> ExperimentConfig {
        ExperimentConfig {
            group: self.group,
            gens: self.gens,
            graph: self.graph,
            dec: self.dec,
            element: self.element,
            arrangement: self.arrangement,
            tmax: self.tmax,
            t: self.t,
            radius: self.radius,
            alpha: self.alpha,
            n_max: self.n_max,
            budget: self.budget,
            paths: self.paths,
            d_exp: self.d_exp,
            trials: self.trials,
            margin: self.margin,
            m_hat: self.m_hat,
            k: self.k,
            prune: self.prune,
            max_support: self.max_support,
            max_len: self.max_len,
            metric: self.metric,
            ..ExperimentConfig::new(command)
        }
    }
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, CliError> {
    use Command as C;
    let (command, params) = match cli.cmd {
        Top::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::new(ErrorCode::Io, format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            cfg.tol = cli.tol.or(cfg.tol);
            cfg.seed = cli.seed.or(cfg.seed);
            cfg.out = cli.out.or(cfg.out);
            cfg.format = cli.format.or(cfg.format);
            return Ok(cfg);
        }
        Top::Centering(c) => match c {
            CenteringCmd::Verify(p) => (C::CenteringVerify, p),
            CenteringCmd::Reversible(p) => (C::CenteringReversible, p),
            CenteringCmd::FromFlow(p) => (C::CenteringFromFlow, p),
        },
        Top::Group(c) => match c {
            GroupCmd::C1Search(p) => (C::GroupC1Search, p),
            GroupCmd::C2Check(p) => (C::GroupC2Check, p),
            GroupCmd::Dist(p) => (C::GroupDist, p),
        },
        Top::Walk(c) => match c {
            WalkCmd::Evolve(p) => (C::WalkEvolve, p),
            WalkCmd::CvFit(p) => (C::WalkCvFit, p),
            WalkCmd::Escape(p) => (C::WalkEscape, p),
            WalkCmd::Speed(p) => (C::WalkSpeed, p),
            WalkCmd::Entropy(p) => (C::WalkEntropy, p),
            WalkCmd::Volume(p) => (C::WalkVolume, p),
        },
        Top::Dirichlet(c) => match c {
            DirichletCmd::Sector(p) => (C::DirichletSector, p),
            DirichletCmd::Poincare(p) => (C::DirichletPoincare, p),
        },
        Top::Green(GreenCmd::Compare(p)) => (C::GreenCompare, p),
        Top::F2(F2Cmd::Reduce(p)) => (C::F2Reduce, p),
    };
    let mut cfg = params.into_config(command);
    cfg.tol = cli.tol;
    cfg.seed = cli.seed;
    cfg.out = cli.out;
    cfg.format = cli.format;
    Ok(cfg)
}

/// Writes to a sibling temp file and renames it over `path`.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::new(ErrorCode::Io, format!("cannot write {}: {e}", path.display()));
    let name = path.file_name().ok_or_else(|| CliError::config("output path has no file name"))?;
    let tmp = path.with_file_name(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = build_config(cli)?;
    let report = run(&cfg)?;
    let bytes = emit(&report, cfg.format.unwrap_or_default())?;
    match &cfg.out {
        Some(path) => write_atomic(path, &bytes),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::new(ErrorCode::Io, e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code.exit_code() as u8)
        }
    }
}
