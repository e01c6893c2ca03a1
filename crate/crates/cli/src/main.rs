use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use irgcp::contact::{
    batch_with, censor_fraction, exact_mean_extinction, read_records, survival_curve, write_records, write_survival,
    ContactError, InitialSet,
};
use irgcp::exec::{init_threads, Execution};
use irgcp::graph::{
    components_and_diameter, read_graph, write_graph_with_header, Graph, GraphError, GraphModelSpec,
};
use irgcp::harness::{metastability_test, provenance, run_sweep, SweepConfig, Verdict, KS_THRESHOLD};
use irgcp::stats::{mean_and_std_error, median};
use irgcp::structure::{
    certify_er, certify_irg, read_certificate, validate_certificate, write_certificate, StructureError, TaskConfig,
    DEFAULT_PATH_BUDGET,
};
use irgcp::weights::{PhiSpec, WeightModel};

#[derive(Parser)]
#[command(name = "irgcp", version, about = "Contact process experiments on random graphs")]
struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (directory for `sweep`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph and write it in graph-file format.
    Generate(GenerateArgs),
    /// Search for a star certificate and validate it.
    FindStructure(FindArgs),
    /// Check a certificate file against a graph.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Run contact-process replicas and write extinction records.
    Simulate(SimulateArgs),
    /// Run a sweep described by a config file.
    Sweep {
        /// Sweep description (`key = value` lines, `[cell NAME]` sections)
        #[arg(long)]
        config: PathBuf,
    },
    /// Exact mean extinction time from full occupancy (n <= 20).
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
    /// Exponential-law test on a records file.
    Metastability {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = KS_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Er,
    Irg,
    Glued,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: Option<usize>,
    /// Mean degree parameter of `ER(n, p/n)`.
    #[arg(long)]
    p: Option<f64>,
    /// Weight law, e.g. `powerlaw(alpha=2.5,xmin=1)`.
    #[arg(long)]
    weights: Option<String>,
    /// Spine length of the glued star path.
    #[arg(long)]
    ell: Option<usize>,
    /// Star size of the glued star path.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureMode {
    Irg,
    Er,
}

#[derive(Args)]
struct FindArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "irg")]
    mode: StructureMode,
    /// Seed-set size.
    #[arg(long, default_value_t = 2)]
    k: u64,
    #[arg(long, default_value = "sqrt")]
    phi: String,
    /// Trial levels (default: max(1, floor(ln ln ln n))).
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long, default_value_t = 10)]
    max_trials: u32,
    #[arg(long, default_value_t = 0.01)]
    eps1: f64,
    /// Emit stars of exactly 2K vertices.
    #[arg(long)]
    strict: bool,
    /// Leaves per star in ER mode.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
    path_budget: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 1000)]
    replicas: u64,
    #[arg(long, default_value_t = 1e6)]
    tmax: f64,
    /// Also write the Kaplan–Meier curve here.
    #[arg(long)]
    survival: Option<PathBuf>,
}

enum Failure {
    /// Exit 1: the task ran but failed.
    Domain(String),
    /// Exit 2: bad input or I/O.
    Usage(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let f = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    read_graph(BufReader::new(f)).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Writes through `write` to `--out` or standard output.
fn emit(out: &Option<PathBuf>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Outcome {
    match out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            write(&mut f)?;
        }
        None => write(&mut io::stdout().lock())?,
    }
    Ok(())
}

/// Summary lines go to stdout unless stdout carries the data.
fn report(cli: &Cli, line: String) {
    if cli.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn generate(cli: &Cli, a: &GenerateArgs, header: &[String]) -> Outcome {
    let need_n = || a.n.ok_or_else(|| usage("--n is required"));
    let spec = match a.model {
        Model::Er => GraphModelSpec::Er { n: need_n()?, p: a.p.ok_or_else(|| usage("--p is required for er"))? },
        Model::Irg => {
            let w = a.weights.as_deref().ok_or_else(|| usage("--weights is required for irg"))?;
            let weights: WeightModel = w.parse().map_err(|e| usage(format!("--weights: {e}")))?;
            GraphModelSpec::Irg { n: need_n()?, weights }
        }
        Model::Glued => GraphModelSpec::GluedStarPath {
            ell: a.ell.ok_or_else(|| usage("--ell is required for glued"))?,
            m: a.m.ok_or_else(|| usage("--m is required for glued"))?,
        },
    };
    let g = spec.generate(cli.seed)?;
    emit(&cli.out, |w| write_graph_with_header(&g, header, w))?;
    let comps = components_and_diameter(&g);
    let shown: Vec<String> = comps.sizes.iter().take(5).map(|s| s.to_string()).collect();
    report(cli, format!("n = {}", g.n()));
    report(cli, format!("edges = {}", g.edge_count()));
    report(cli, format!("mean degree = {:.6}", g.mean_degree()));
    report(cli, format!("components = {} (largest: {})", comps.sizes.len(), shown.join(", ")));
    Ok(())
}

fn find_structure(cli: &Cli, a: &FindArgs, header: &[String]) -> Outcome {
    let g = load_graph(&a.graph)?;
    let n = g.n().max(1) as f64;
    let result = match a.mode {
        StructureMode::Irg => {
            let phi: PhiSpec = a.phi.parse().map_err(|e| usage(format!("--phi: {e}")))?;
            let cfg = TaskConfig {
                k: a.k,
                phi,
                levels: a.levels.unwrap_or_else(|| TaskConfig::default_levels(g.n())),
                max_trials: a.max_trials,
                eps1: a.eps1,
            };
            cfg.validate().map_err(|e| usage(e.to_string()))?;
            certify_irg(&g, &cfg, a.strict).map(|c| {
                let t2 = c.run.task2.as_ref().unwrap();
                println!("experiments = {}", t2.experiments);
                println!("vertices consumed = {}", g.n() - c.run.source_sizes.last().unwrap());
                println!("budget violations = {}", c.run.audit.violations());
                c.certificate
            })
        }
        StructureMode::Er => certify_er(&g, a.m, a.path_budget).map(|c| {
            println!("greedy centres = {}", c.greedy.gamma.len());
            println!("greedy density = {:.6}", c.greedy.gamma.len() as f64 / n);
            c.certificate
        }),
    };
    let cert = match result {
        Ok(c) => c,
        Err(StructureError::InvalidConfig(m)) => return Err(usage(m)),
        Err(e) => return Err(Failure::Domain(e.to_string())),
    };
    let verdict = validate_certificate(&g, &cert);
    if !verdict.is_valid() {
        let v: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::Domain(format!("certificate failed validation: {}", v.join("; "))));
    }
    if let Some(path) = &cli.out {
        let f = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        write_certificate(&cert, header, f)?;
    }
    println!("stars = {}", cert.stars.len());
    println!("M = {}", cert.m);
    println!("mode = {}", cert.mode);
    println!("spacing bound = {}", cert.spacing_bound);
    println!("density = {:.6}", cert.stars.len() as f64 / n);
    println!("validated = yes");
    Ok(())
}

fn validate(graph: &Path, certificate: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let f = File::open(certificate).map_err(|e| usage(format!("{}: {e}", certificate.display())))?;
    let cert = read_certificate(BufReader::new(f)).map_err(|e| usage(e.to_string()))?;
    let verdict = validate_certificate(&g, &cert);
    if verdict.is_valid() {
        println!("valid: {} stars, M = {}, {} mode, spacing {}", cert.stars.len(), cert.m, cert.mode, cert.spacing_bound);
        Ok(())
    } else {
        for v in &verdict.violations {
            println!("violation: {v}");
        }
        Err(Failure::Domain(format!("{} violations", verdict.violations.len())))
    }
}

fn simulate(cli: &Cli, a: &SimulateArgs, header: &[String]) -> Outcome {
    let g = load_graph(&a.graph)?;
    let recs = batch_with(&g, a.lambda, &InitialSet::Full, a.replicas, a.tmax, cli.seed, Execution::default())
        .map_err(|e| usage(e.to_string()))?;
    emit(&cli.out, |w| write_records(&recs, header, w))?;
    if let Some(path) = &a.survival {
        let f = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        write_survival(&survival_curve(&recs), header, f)?;
    }
    let taus: Vec<f64> = recs.iter().map(|r| r.tau).collect();
    let (mean, se) = mean_and_std_error(&taus);
    let censored = recs.iter().filter(|r| r.censored).count();
    report(cli, format!("replicas = {}", recs.len()));
    report(cli, format!("censored = {censored} ({:.4})", censor_fraction(&recs)));
    report(cli, format!("mean tau = {mean} (se {se})"));
    report(cli, format!("median tau = {}", median(&taus).unwrap_or(f64::NAN)));
    Ok(())
}

fn sweep(cli: &Cli, config: &Path, header: &[String]) -> Outcome {
    let text = std::fs::read_to_string(config).map_err(|e| usage(format!("{}: {e}", config.display())))?;
    let base = config.parent().unwrap_or(Path::new("."));
    let mut cfg = SweepConfig::parse(&text, base).map_err(|e| usage(e.to_string()))?;
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    let s = run_sweep(&cfg, header, Execution::default()).map_err(|e| Failure::Domain(e.to_string()))?;
    for c in &s.cells {
        match &c.error {
            None => println!(
                "{} size={} lambda={} median_tau={} censored={:.4}",
                c.group, c.size, c.lambda, c.median_tau, c.censor_fraction
            ),
            Some(e) => println!("{} size={} lambda={} FAILED: {e}", c.group, c.size, c.lambda),
        }
    }
    for f in &s.fits {
        match f.fit {
            Some(fit) => println!(
                "fit {} lambda={}: slope={} intercept={} r2={}",
                f.group, f.lambda, fit.slope, fit.intercept, fit.r_squared
            ),
            None => println!("fit {} lambda={}: not enough points", f.group, f.lambda),
        }
    }
    println!("output: {}", cfg.out_dir.display());
    match s.failed_cells() {
        0 => Ok(()),
        k => Err(Failure::Domain(format!("{k} of {} cells failed", s.cells.len()))),
    }
}

fn oracle(graph: &Path, lambda: f64) -> Outcome {
    let g = load_graph(graph)?;
    match exact_mean_extinction(&g, lambda, &InitialSet::Full) {
        Ok(m) => {
            println!("{m}");
            Ok(())
        }
        Err(e @ ContactError::TooLarge { .. }) => Err(Failure::Domain(format!("refused: {e}"))),
        Err(e @ ContactError::NotConverged { .. }) => Err(Failure::Domain(e.to_string())),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn metastability(records: &Path, threshold: f64) -> Outcome {
    let f = File::open(records).map_err(|e| usage(format!("{}: {e}", records.display())))?;
    let recs = read_records(BufReader::new(f)).map_err(|e| usage(e.to_string()))?;
    let r = metastability_test(&recs, threshold);
    println!("samples = {}", r.samples);
    println!("uncensored = {}", r.uncensored);
    println!("censor fraction = {}", r.censor_fraction);
    println!("mean tau = {}", r.mean);
    if let (Some(ks), Some(p)) = (r.ks, r.p_value) {
        println!("ks = {ks}");
        println!("p-value = {p:.3e}");
    }
    println!("threshold = {}", r.threshold);
    match r.verdict {
        Verdict::Pass => {
            println!("verdict = pass");
            Ok(())
        }
        Verdict::Fail => {
            println!("verdict = fail");
            Err(Failure::Domain("KS distance above threshold".into()))
        }
        Verdict::NotEvaluable(why) => {
            println!("verdict = not evaluable");
            Err(Failure::Domain(why))
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(usage("--threads must be >= 1"));
        }
        init_threads(t);
    }
    let command_line = std::env::args().collect::<Vec<_>>().join(" ");
    let header = provenance(&command_line, cli.seed);
    match &cli.command {
        Command::Generate(a) => generate(cli, a, &header),
        Command::FindStructure(a) => find_structure(cli, a, &header),
        Command::Validate { graph, certificate } => validate(graph, certificate),
        Command::Simulate(a) => simulate(cli, a, &header),
        Command::Sweep { config } => sweep(cli, config, &header),
        Command::Oracle { graph, lambda } => oracle(graph, *lambda),
        Command::Metastability { records, threshold } => metastability(records, *threshold),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
