use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qite_pubo::baselines::{goemans_williamson, greedy_maxcut, gw_energy, GwParams};
use qite_pubo::experiments::{
    resolve_out_dir, run_ar, run_labs, run_quad, run_restarts, ExperimentConfig, ExperimentKind,
    ExperimentOutput,
};
use qite_pubo::graphs::{nws_generate, NwsParams, WeightedGraph};
use qite_pubo::hamiltonian::{brute_force_ground, IsingHamiltonian, DEFAULT_BRUTE_FORCE_CAP};
use qite_pubo::problems::{
    format_sequence, labs_exact, labs_hamiltonian_expansion, maxcut_hamiltonian, LabsSolutionBank,
};
use qite_pubo::quad::CoefficientMode;
use qite_pubo::restarts::RestartOptions;
use qite_pubo::solve::{solve_labs, solve_maxcut, LabsRequest, MaxCutRequest};
use qite_pubo::trace::{RunTrace, TauPolicy};
use qite_pubo::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qite",
    version,
    about = "QITE for weighted MaxCut and LABS, with classical baselines"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory; QITE_OUT_DIR takes precedence.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Also write a per-step CSV trace where the command has one.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Clone)]
struct GraphSource {
    /// Edge-list file; otherwise a weighted NWS graph is generated.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    unweighted: bool,
}

#[derive(Args, Clone)]
struct Tau {
    #[arg(long, default_value_t = 0.05)]
    delta_beta: f64,
    #[arg(long, default_value_t = 1.0)]
    beta_max: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnsatzArg {
    Linear,
    Quad,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Identity,
    Solve,
}

#[derive(Args, Clone)]
struct ExpArgs {
    /// TOML config; defaults to the standard sweep for the experiment.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Write the effective config and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a Newman-Watts-Strogatz graph and write it as an edge list.
    GenGraph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Linear-Ansatz QITE on a MaxCut instance.
    SolveMaxcut {
        #[command(flatten)]
        src: GraphSource,
        #[arg(long, default_value_t = 25)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        itd_edges: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Restart until P(GS) >= 0.995 (at most this many attempts).
        #[arg(long)]
        converge: Option<usize>,
        #[command(flatten)]
        tau: Tau,
        #[command(flatten)]
        common: Common,
    },
    /// QITE on LABS from random {|0>, |+>} starts.
    SolveLabs {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        steps: usize,
        #[arg(long, default_value_t = 50)]
        inits: usize,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        r_max: Option<usize>,
        #[arg(long, value_enum, default_value = "linear")]
        ansatz: AnsatzArg,
        #[arg(long, value_enum, default_value = "identity")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-8)]
        lambda: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        tau: Tau,
        #[command(flatten)]
        common: Common,
    },
    /// Exact ground energy and ground set by enumeration.
    BruteForce {
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        labs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Goemans-Williamson: low-rank relaxation plus hyperplane rounding.
    Gw {
        #[command(flatten)]
        src: GraphSource,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 100)]
        hyperplanes: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Single-flip greedy local search.
    Greedy {
        #[command(flatten)]
        src: GraphSource,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact LABS optima for N up to n-max, stored in a solution bank.
    LabsBank {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long)]
        bank: PathBuf,
        #[arg(long, default_value_t = 24)]
        cap: usize,
    },
    /// Restarts needed for P(GS) >= threshold on small graphs.
    ExpRestarts(ExpArgs),
    /// Approximation ratio against GW on larger graphs.
    ExpAr(ExpArgs),
    /// LABS approximation ratio and P(GS) sweep.
    ExpLabs(ExpArgs),
    /// Linear versus quadratic Ansatz on LABS.
    ExpQuad(ExpArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn out_dir(common: &Common) -> Result<PathBuf> {
    let dir = resolve_out_dir(common.out_dir.as_deref());
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn emit<T: Serialize>(
    common: &Common,
    name: &str,
    summary: &T,
    trace: Option<&RunTrace>,
) -> Result<()> {
    let dir = out_dir(common)?;
    let json = serde_json::to_string_pretty(summary)? + "\n";
    fs::write(dir.join(format!("{name}.json")), &json)?;
    if let (true, Some(t)) = (common.trace, trace) {
        t.write_csv(
            fs::File::create(dir.join(format!("{name}_trace.csv")))?,
            None,
        )?;
    }
    print!("{json}");
    Ok(())
}

fn load_graph(src: &GraphSource, seed: u64) -> Result<WeightedGraph> {
    match (&src.graph, src.n) {
        (Some(path), _) => WeightedGraph::read_edgelist(path),
        (None, Some(n)) => nws_generate(
            NwsParams {
                n,
                k: src.k,
                p: src.p,
                weighted: !src.unweighted,
            },
            seed,
        ),
        (None, None) => Err(Error::Input("pass --graph <file> or --n <vertices>".into())),
    }
}

fn tau(t: &Tau) -> TauPolicy {
    TauPolicy {
        delta_beta: t.delta_beta,
        beta_max: t.beta_max,
    }
}

#[derive(Serialize)]
struct GraphSummary<'a> {
    seed: u64,
    n: usize,
    k: usize,
    p: f64,
    weighted: bool,
    edges: usize,
    total_weight: f64,
    path: &'a Path,
}

#[derive(Serialize)]
struct GroundSummary {
    seed: u64,
    n: usize,
    energy: f64,
    ground_set: Vec<String>,
}

#[derive(Serialize)]
struct CutSummary<'a> {
    seed: u64,
    algorithm: &'a str,
    n: usize,
    cut: f64,
    energy: f64,
    sigma: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    relaxation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<GwParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
}

#[derive(Serialize)]
struct ExpSummary<'a, S: Serialize> {
    experiment: &'a str,
    seed: u64,
    workers: usize,
    files: ExperimentOutput,
    summary: Vec<S>,
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::GenGraph {
            n,
            k,
            p,
            weighted,
            output,
            common,
        } => {
            let g = nws_generate(NwsParams { n, k, p, weighted }, common.seed)?;
            let path = match output {
                Some(p) => p,
                None => out_dir(&common)?.join(format!("nws_n{n}_k{k}_seed{}.edges", common.seed)),
            };
            g.write_edgelist(&path)?;
            let s = GraphSummary {
                seed: common.seed,
                n,
                k,
                p,
                weighted,
                edges: g.edges().len(),
                total_weight: g.total_weight(),
                path: &path,
            };
            emit(&common, "gen-graph", &s, None)
        }
        Cmd::SolveMaxcut {
            src,
            steps,
            itd_edges,
            samples,
            converge,
            tau: t,
            common,
        } => {
            let g = load_graph(&src, common.seed)?;
            let mut req = MaxCutRequest::new(steps);
            req.n_itd_edges = itd_edges;
            req.samples = samples;
            req.tau = tau(&t);
            req.converge = converge.map(|m| RestartOptions {
                max_restarts: m,
                ..RestartOptions::new(steps)
            });
            let (s, trace) = solve_maxcut(&g, &req, common.seed)?;
            emit(&common, "solve-maxcut", &s, Some(&trace))
        }
        Cmd::SolveLabs {
            n,
            steps,
            inits,
            a,
            b,
            r_max,
            ansatz,
            mode,
            lambda,
            samples,
            tau: t,
            common,
        } => {
            let mut req = LabsRequest::new(steps, inits);
            req.a = a.unwrap_or(req.a);
            req.b = b.unwrap_or(req.b);
            req.r_max = r_max.unwrap_or(req.r_max);
            req.samples = samples;
            req.tau = tau(&t);
            req.quadratic = matches!(ansatz, AnsatzArg::Quad);
            req.mode = match mode {
                ModeArg::Identity => CoefficientMode::Identity,
                ModeArg::Solve => CoefficientMode::Solve { lambda },
            };
            let (s, trace) = solve_labs(n, &req, common.seed)?;
            emit(&common, "solve-labs", &s, Some(&trace))
        }
        Cmd::BruteForce {
            hamiltonian,
            graph,
            labs,
            cap,
            common,
        } => {
            let h: IsingHamiltonian = match (hamiltonian, graph, labs) {
                (Some(p), None, None) => IsingHamiltonian::read(&p)?,
                (None, Some(p), None) => maxcut_hamiltonian(&WeightedGraph::read_edgelist(&p)?)?,
                (None, None, Some(n)) => labs_hamiltonian_expansion(n)?,
                _ => {
                    return Err(Error::Input(
                        "pass exactly one of --hamiltonian, --graph, --labs".into(),
                    ))
                }
            };
            let gt = brute_force_ground(&h, cap)?;
            let s = GroundSummary {
                seed: common.seed,
                n: h.n_qubits(),
                energy: gt.energy,
                ground_set: gt.ground_set.iter().map(|s| format_sequence(s)).collect(),
            };
            emit(&common, "brute-force", &s, None)
        }
        Cmd::Gw {
            src,
            rank,
            hyperplanes,
            restarts,
            tol,
            max_iters,
            common,
        } => {
            let g = load_graph(&src, common.seed)?;
            let params = GwParams {
                rank,
                tol,
                max_iters,
                n_hyperplanes: hyperplanes,
                restarts,
            };
            let r = goemans_williamson(&g, &params, common.seed)?;
            let s = CutSummary {
                seed: common.seed,
                algorithm: "gw",
                n: g.n(),
                cut: r.cut,
                energy: r.energy,
                sigma: format_sequence(&r.sigma),
                relaxation: Some(r.relaxation),
                params: Some(params),
                rank: Some(r.rank),
            };
            emit(&common, "gw", &s, None)
        }
        Cmd::Greedy {
            src,
            restarts,
            common,
        } => {
            let g = load_graph(&src, common.seed)?;
            let (sigma, cut) = greedy_maxcut(&g, common.seed, restarts)?;
            let s = CutSummary {
                seed: common.seed,
                algorithm: "greedy",
                n: g.n(),
                cut,
                energy: gw_energy(&g, &sigma)?,
                sigma: format_sequence(&sigma),
                relaxation: None,
                params: None,
                rank: None,
            };
            emit(&common, "greedy", &s, None)
        }
        Cmd::LabsBank {
            n_max,
            n_min,
            bank,
            cap,
        } => {
            let mut b = if bank.exists() {
                LabsSolutionBank::load(&bank)?
            } else {
                LabsSolutionBank::new()
            };
            for n in n_min..=n_max {
                if b.get(n).is_none() {
                    b.insert_optimum(&labs_exact(n, cap)?)?;
                }
            }
            b.store(&bank)?;
            print!("{}", b.to_text());
            Ok(())
        }
        Cmd::ExpRestarts(a) => experiment(ExperimentKind::Restarts, a),
        Cmd::ExpAr(a) => experiment(ExperimentKind::Ar, a),
        Cmd::ExpLabs(a) => experiment(ExperimentKind::Labs, a),
        Cmd::ExpQuad(a) => experiment(ExperimentKind::Quad, a),
    }
}

fn experiment(kind: ExperimentKind, a: ExpArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::preset(kind),
    };
    if cfg.experiment != kind {
        return Err(Error::Input(format!(
            "config is for the {} experiment",
            cfg.experiment.name()
        )));
    }
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.workers = a.workers.unwrap_or(cfg.workers);
    cfg.n_min = a.n_min.unwrap_or(cfg.n_min);
    cfg.n_max = a.n_max.unwrap_or(cfg.n_max);
    cfg.n_trials = a.trials.unwrap_or(cfg.n_trials);
    if a.out_dir.is_some() {
        cfg.out_dir = a.out_dir;
    }
    cfg.validate()?;
    if a.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let name = kind.name();
    let json = match kind {
        ExperimentKind::Restarts => {
            let (_, summary, files) = run_restarts(&cfg)?;
            to_json(name, &cfg, files, summary)?
        }
        ExperimentKind::Ar => {
            let (_, summary, files) = run_ar(&cfg)?;
            to_json(name, &cfg, files, summary)?
        }
        ExperimentKind::Labs => {
            let (_, summary, files) = run_labs(&cfg)?;
            to_json(name, &cfg, files, summary)?
        }
        ExperimentKind::Quad => {
            let (_, summary, files) = run_quad(&cfg)?;
            to_json(name, &cfg, files, summary)?
        }
    };
    print!("{json}");
    Ok(())
}

fn to_json<S: Serialize>(
    name: &str,
    cfg: &ExperimentConfig,
    files: ExperimentOutput,
    summary: Vec<S>,
) -> Result<String> {
    let s = ExpSummary {
        experiment: name,
        seed: cfg.seed,
        workers: cfg.workers,
        files,
        summary,
    };
    Ok(serde_json::to_string_pretty(&s)? + "\n")
}
