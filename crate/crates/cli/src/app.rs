//! Command-line interface: argument types and dispatch.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hots_core::coefficients::{
    delta_bruteforce, delta_closed_form, gamma, kappa, sigma_vectors, tau, tau1_report, tau_h,
    tau_left, tau_right, theta, CoefficientReport, SUBSET_LIMIT,
};
use hots_core::graph::{load_edge_list, Graph, IndexBase, TriangleWalk};
use hots_core::rng::{random_simplex, rng_from_seed, task_seed};
use hots_core::solvers::{
    alternate_pm, convergence_certificate, hopm, mlpr_fixed_point, optimal_shift,
    pair_chain_stationary, shifted_pm, simulate_spacey_mc, vrrw, ScheduleC, SolveOptions,
    SolveReport,
};
use hots_core::tensor::io::{read_auto, LoadedTensor};
use hots_core::tensor::{builtin, Operand, DENSE_GUARD};
use hots_core::{DenseTensor3, Error, SquareMatrix, StochasticVector, TransitionOperator};
use serde::Serialize;
use serde_json::json;

use crate::experiments::{
    fig1_scatter, fig2_mlpr_sweep, fig3_triangle_grid, fig4_solution_scatter, fig5_shift_sweep,
    Fig1Config,
};
use crate::grid::{parse_pair, unit_grid};
use crate::output::{emit, float, write_csv, write_json, Format, Row};

#[derive(Debug, Parser)]
#[command(
    name = "hots",
    version,
    about = "Ergodicity coefficients and solvers for order-3 stochastic tensors"
)]
pub struct Cli {
    /// Master seed for random starts, samples and generated graphs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (JSON for reports, CSV for tables by default).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ergodicity coefficients of a tensor or matrix.
    Coeff(CoeffArgs),
    /// All convergence certificates of a tensor.
    Certify(TensorSource),
    /// Fixed-point solvers and process simulators.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Triangle-based random walks on graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Sweep experiments producing plot-ready tables.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct TensorSource {
    /// Built-in tensor: p1, p2 or example61.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Tensor text file (`tensor3 n=<n>` header, then `i j k value`).
    #[arg(long)]
    pub tensor: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    All,
    Tau1,
    #[value(name = "TL")]
    TauL,
    #[value(name = "TR")]
    TauR,
    #[value(name = "T")]
    Tau,
    #[value(name = "TH")]
    TauH,
    Kappa,
    Delta,
    DeltaBf,
    Gamma,
    Theta,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long, conflicts_with_all = ["tensor", "matrix"])]
    pub builtin: Option<String>,
    #[arg(long, conflicts_with = "matrix")]
    pub tensor: Option<PathBuf>,
    /// Whitespace-separated square matrix, one row per line (for `tau1`).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub which: Vec<Which>,
    /// Reference vector for theta: s1 (row max), s2 (row min), s3 (mid) or a
    /// file of n numbers. All three when absent.
    #[arg(long)]
    pub sigma: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Start {
    Uniform,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct SolveCommon {
    #[command(flatten)]
    pub source: TensorSource,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub maxit: usize,
    /// Starting vector; `random` draws from the simplex with `--seed`.
    #[arg(long, value_enum, default_value = "uniform")]
    pub start: Start,
    /// Include every iterate in the report.
    #[arg(long)]
    pub keep_iterates: bool,
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    /// Higher-order power method x <- Pxx.
    Hopm(SolveCommon),
    /// Alternate power method x_{t+1} = P x_t x_{t-1}.
    Alt(SolveCommon),
    /// Vertex-reinforced walk.
    Vrrw {
        #[command(flatten)]
        common: SolveCommon,
        /// `harmonic` or `constant:<c>`.
        #[arg(long, default_value = "harmonic")]
        schedule: String,
    },
    /// Multilinear PageRank with uniform teleportation.
    Mlpr {
        #[command(flatten)]
        common: SolveCommon,
        #[arg(long)]
        alpha: f64,
    },
    /// Shifted power method on sP + (1-s)E.
    Shifted {
        #[command(flatten)]
        common: SolveCommon,
        /// Shift in (0, 1], or `opt` for the minimizer of T(P_s).
        #[arg(long, default_value = "opt")]
        sigma: String,
        /// Weight w of E = w E^L + (1 - w) E^R.
        #[arg(long, default_value_t = 0.5)]
        left_weight: f64,
    },
    /// Stationary law of the pair chain.
    Pairchain {
        #[command(flatten)]
        source: TensorSource,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        maxit: usize,
    },
    /// Monte Carlo spacey walk.
    Spacey {
        #[command(flatten)]
        source: TensorSource,
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        /// Initial state, 1-based.
        #[arg(long, default_value_t = 1)]
        state: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Base {
    Auto,
    Zero,
    One,
}

impl From<Base> for IndexBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Auto => IndexBase::Auto,
            Base::Zero => IndexBase::Zero,
            Base::One => IndexBase::One,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphSource {
    /// Edge list, one whitespace-separated pair per line.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub base: Base,
    /// Nodes of the random graph used without `--edges`.
    #[arg(long, default_value_t = 100)]
    pub nodes: usize,
    /// Edge probability of the random graph used without `--edges`.
    #[arg(long, default_value_t = 0.1)]
    pub edge_prob: f64,
    /// Restrict to the largest connected component.
    #[arg(long)]
    pub lcc: bool,
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Triangle PageRank against classical PageRank.
    Mlpr {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        maxit: usize,
    },
    /// Size and triangle statistics.
    Stats {
        #[command(flatten)]
        graph: GraphSource,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// T, T_H and 2 - 2 delta over random tensors.
    Fig1 {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Multilinear PageRank uniqueness bounds along alpha.
    Fig2 {
        #[command(flatten)]
        source: TensorSource,
        #[arg(long, default_value = "0:0.01:1")]
        alphas: String,
    },
    /// Triangle PageRank over an (alpha, beta) grid.
    Fig3 {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, default_value = "0:0.1:0.9")]
        alphas: String,
        #[arg(long, default_value = "0:0.1:1")]
        betas: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        maxit: usize,
    },
    /// Triangle PageRank vectors against a reference solution.
    Fig4 {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, default_value = "0.6,0.6")]
        reference: String,
        /// `alpha,beta` pairs; repeat the flag for several.
        #[arg(long, default_values = ["0.6,0.6", "0.7,0.7", "0.85,0"])]
        compare: Vec<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        maxit: usize,
    },
    /// T(P_s) along the shift s.
    Fig5 {
        #[command(flatten)]
        source: TensorSource,
        #[arg(long, default_value = "0:0.001:1")]
        sigmas: String,
        #[arg(long, default_value_t = 0.5)]
        left_weight: f64,
    },
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.out.clone(),
        format: cli.format,
    };
    match cli.command {
        Command::Coeff(a) => coeff(&ctx, a),
        Command::Certify(src) => {
            let p = dense_tensor(&src)?;
            let summary = convergence_certificate(&p)?;
            ctx.write(Format::Json, |f, w| match f {
                Format::Json => write_json(&summary, w),
                Format::Csv => {
                    let rows: Vec<NameValue> = summary
                        .entries
                        .iter()
                        .map(|e| NameValue(e.name.clone(), e.value, e.certifies.to_string()))
                        .collect();
                    write_csv(&rows, w)
                }
            })
        }
        Command::Solve(s) => solve(&ctx, s),
        Command::Graph(g) => graph(&ctx, g),
        Command::Experiment(e) => experiment(&ctx, e),
    }
}

struct Ctx {
    seed: u64,
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn write(
        &self,
        default: Format,
        f: impl FnOnce(Format, &mut dyn Write) -> anyhow::Result<()>,
    ) -> anyhow::Result<()> {
        let format = self.format.unwrap_or(default);
        match &self.out {
            Some(path) => {
                let file =
                    File::create(path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(file);
                f(format, &mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                f(format, &mut w)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

struct NameValue(String, f64, String);

impl Row for NameValue {
    fn header() -> &'static [&'static str] {
        &["name", "value", "detail"]
    }

    fn record(&self) -> Vec<String> {
        vec![self.0.clone(), float(self.1), self.2.clone()]
    }
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn load_tensor(src: &TensorSource) -> anyhow::Result<LoadedTensor> {
    if let Some(name) = &src.builtin {
        return match builtin::by_name(name) {
            Some(p) => Ok(LoadedTensor::Dense(p)),
            None => bail!("unknown built-in tensor `{name}` (expected p1, p2 or example61)"),
        };
    }
    let path = src.tensor.as_ref().context("no tensor given")?;
    read_auto(open(path)?, DENSE_GUARD).with_context(|| format!("reading {}", path.display()))
}

fn dense_tensor(src: &TensorSource) -> anyhow::Result<DenseTensor3> {
    match load_tensor(src)? {
        LoadedTensor::Dense(p) => Ok(p),
        LoadedTensor::Sparse(p) => Err(Error::TooLarge {
            what: "dense coefficient scans",
            limit: DENSE_GUARD,
            n: p.n(),
        }
        .into()),
    }
}

fn operator(t: LoadedTensor) -> anyhow::Result<TransitionOperator> {
    Ok(match t {
        LoadedTensor::Dense(p) => TransitionOperator::from_dense(p)?,
        LoadedTensor::Sparse(p) => {
            let n = p.n();
            TransitionOperator::new(n, vec![(1.0, Operand::Sparse(p.into()))])?
        }
    })
}

fn read_matrix(path: &Path) -> anyhow::Result<SquareMatrix> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .with_context(|| format!("line {}: bad number `{t}`", i + 1))
                })
                .collect::<anyhow::Result<Vec<f64>>>()
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(SquareMatrix::from_rows(&rows)?)
}

#[derive(Serialize)]
struct CoeffOut {
    name: String,
    value: f64,
    /// 1-based indices.
    witness: Vec<usize>,
    cost: String,
}

impl From<CoefficientReport> for CoeffOut {
    fn from(r: CoefficientReport) -> Self {
        CoeffOut {
            name: serde_json::to_value(r.name)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            value: r.value,
            witness: r.witness.iter().map(|i| i + 1).collect(),
            cost: r.cost,
        }
    }
}

impl Row for CoeffOut {
    fn header() -> &'static [&'static str] {
        &["name", "value", "witness"]
    }

    fn record(&self) -> Vec<String> {
        let w: Vec<String> = self.witness.iter().map(|i| i.to_string()).collect();
        vec![self.name.clone(), float(self.value), w.join(" ")]
    }
}

fn coeff(ctx: &Ctx, a: CoeffArgs) -> anyhow::Result<()> {
    let mut out: Vec<CoeffOut> = Vec::new();
    if let Some(path) = &a.matrix {
        let m = read_matrix(path)?;
        if a.which
            .iter()
            .any(|w| !matches!(w, Which::All | Which::Tau1))
        {
            bail!("only tau1 applies to a matrix");
        }
        out.push(tau1_report(&m).into());
    } else {
        let src = TensorSource {
            builtin: a.builtin.clone(),
            tensor: a.tensor.clone(),
        };
        if src.builtin.is_none() && src.tensor.is_none() {
            bail!("one of --builtin, --tensor or --matrix is required");
        }
        let p = dense_tensor(&src)?;
        let all = a.which.contains(&Which::All);
        let want = |w: Which| all || a.which.contains(&w);
        if a.which.contains(&Which::Tau1) {
            bail!("tau1 needs --matrix");
        }
        if want(Which::TauL) {
            out.push(tau_left(&p).into());
        }
        if want(Which::TauR) {
            out.push(tau_right(&p).into());
        }
        if want(Which::Tau) {
            out.push(tau(&p).into());
        }
        if want(Which::TauH) {
            out.push(tau_h(&p)?.into());
        }
        if want(Which::Kappa) {
            out.push(kappa(&p)?.into());
        }
        if want(Which::Delta) {
            out.push(delta_closed_form(&p)?.into());
        }
        let subsets_ok = p.n() <= SUBSET_LIMIT;
        if a.which.contains(&Which::DeltaBf) || (all && subsets_ok) {
            let mut r: CoeffOut = delta_bruteforce(&p)?.into();
            r.name = "delta-bf".into();
            out.push(r);
        }
        if a.which.contains(&Which::Gamma) || (all && subsets_ok && p.n() >= 2) {
            out.push(gamma(&p)?.into());
        }
        if want(Which::Theta) {
            let sig = sigma_vectors(&p);
            let choices: Vec<(String, Vec<f64>)> = match a.sigma.as_deref() {
                None => vec![
                    ("s1".into(), sig.max.clone()),
                    ("s2".into(), sig.min.clone()),
                    ("s3".into(), sig.mid.clone()),
                ],
                Some("s1") => vec![("s1".into(), sig.max.clone())],
                Some("s2") => vec![("s2".into(), sig.min.clone())],
                Some("s3") => vec![("s3".into(), sig.mid.clone())],
                Some(file) => {
                    let text =
                        std::fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
                    let v = text
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<f64>()
                                .with_context(|| format!("bad number `{t}`"))
                        })
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    vec![("file".into(), v)]
                }
            };
            for (label, s) in choices {
                let mut r: CoeffOut = theta(&p, &s)?.into();
                r.name = format!("theta_{label}");
                out.push(r);
            }
        }
    }
    ctx.write(Format::Json, |f, w| {
        if out.len() == 1 {
            emit(f, &out, &out[0], w)
        } else {
            emit(f, &out, &out, w)
        }
    })
}

fn start_vector(seed: u64, n: usize, start: Start, stream: u64) -> StochasticVector {
    match start {
        Start::Uniform => StochasticVector::uniform(n),
        Start::Random => random_simplex(n, &mut rng_from_seed(task_seed(seed, stream))),
    }
}

fn options(c: &SolveCommon) -> SolveOptions {
    let mut o = SolveOptions::default().with_tol(c.tol).with_maxit(c.maxit);
    if c.keep_iterates {
        o = o.keeping_iterates();
    }
    o
}

struct VectorRow(usize, f64);

impl Row for VectorRow {
    fn header() -> &'static [&'static str] {
        &["node", "x"]
    }

    fn record(&self) -> Vec<String> {
        vec![self.0.to_string(), float(self.1)]
    }
}

fn vector_rows(x: &[f64]) -> Vec<VectorRow> {
    x.iter()
        .enumerate()
        .map(|(i, v)| VectorRow(i + 1, *v))
        .collect()
}

fn emit_report(
    ctx: &Ctx,
    method: &str,
    extra: serde_json::Value,
    r: &SolveReport,
) -> anyhow::Result<()> {
    let json = json!({ "method": method, "n": r.solution.len(), "parameters": extra, "report": r });
    ctx.write(Format::Json, |f, w| {
        emit(f, &vector_rows(r.solution.as_slice()), &json, w)
    })?;
    if !r.converged {
        eprintln!(
            "warning: {method} did not converge in {} iterations (last residual {:e})",
            r.iterations,
            r.last_residual().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

fn solve(ctx: &Ctx, cmd: SolveCommand) -> anyhow::Result<()> {
    match cmd {
        SolveCommand::Hopm(c) => {
            let op = operator(load_tensor(&c.source)?)?;
            let x0 = start_vector(ctx.seed, op.n(), c.start, 0);
            let r = hopm(&op, &x0, &options(&c))?;
            emit_report(ctx, "hopm", json!({}), &r)
        }
        SolveCommand::Alt(c) => {
            let op = operator(load_tensor(&c.source)?)?;
            let x0 = start_vector(ctx.seed, op.n(), c.start, 0);
            let xm1 = start_vector(ctx.seed, op.n(), c.start, 1);
            let r = alternate_pm(&op, &x0, &xm1, &options(&c))?;
            emit_report(ctx, "alt", json!({}), &r)
        }
        SolveCommand::Vrrw {
            common: c,
            schedule,
        } => {
            let op = operator(load_tensor(&c.source)?)?;
            let sched = ScheduleC::parse(&schedule)?;
            let x0 = start_vector(ctx.seed, op.n(), c.start, 0);
            let r = vrrw(&op, &x0, &x0, &sched, &options(&c))?;
            emit_report(ctx, "vrrw", json!({ "schedule": sched }), &r)
        }
        SolveCommand::Mlpr { common: c, alpha } => {
            let op = operator(load_tensor(&c.source)?)?;
            let v = StochasticVector::uniform(op.n());
            let x0 = start_vector(ctx.seed, op.n(), c.start, 0);
            let r = mlpr_fixed_point(&op, alpha, &v, &x0, &options(&c))?;
            emit_report(ctx, "mlpr", json!({ "alpha": alpha }), &r)
        }
        SolveCommand::Shifted {
            common: c,
            sigma,
            left_weight,
        } => {
            let t = load_tensor(&c.source)?;
            let (sigma, predicted) = if sigma.eq_ignore_ascii_case("opt") {
                let LoadedTensor::Dense(p) = &t else {
                    bail!("--sigma opt needs n <= {DENSE_GUARD}; give a numeric shift");
                };
                let o = optimal_shift(p, left_weight, 1001, 1e-6)?;
                (o.sigma, Some(o.value))
            } else {
                (
                    sigma
                        .parse::<f64>()
                        .with_context(|| format!("bad shift `{sigma}`"))?,
                    None,
                )
            };
            let op = operator(t)?;
            let x0 = start_vector(ctx.seed, op.n(), c.start, 0);
            let r = shifted_pm(&op, sigma, left_weight, &x0, &options(&c))?;
            let params =
                json!({ "sigma": sigma, "left_weight": left_weight, "T_sigma": predicted });
            emit_report(ctx, "shifted", params, &r)
        }
        SolveCommand::Pairchain { source, tol, maxit } => {
            let p = dense_tensor(&source)?;
            let r = pair_chain_stationary(&p, tol, maxit)?;
            struct Entry(usize, usize, f64);
            impl Row for Entry {
                fn header() -> &'static [&'static str] {
                    &["i", "j", "y"]
                }
                fn record(&self) -> Vec<String> {
                    vec![self.0.to_string(), self.1.to_string(), float(self.2)]
                }
            }
            let n = p.n();
            let rows: Vec<Entry> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| Entry(i + 1, j + 1, r.y.get(i, j)))
                .collect();
            ctx.write(Format::Json, |f, w| emit(f, &rows, &r, w))
        }
        SolveCommand::Spacey {
            source,
            steps,
            state,
        } => {
            if state == 0 {
                bail!("--state is 1-based");
            }
            let t = load_tensor(&source)?;
            let r = match &t {
                LoadedTensor::Dense(p) => simulate_spacey_mc(p, state - 1, steps, ctx.seed)?,
                LoadedTensor::Sparse(p) => simulate_spacey_mc(p, state - 1, steps, ctx.seed)?,
            };
            ctx.write(Format::Json, |f, w| {
                emit(f, &vector_rows(r.occupation.as_slice()), &r, w)
            })
        }
    }
}

/// Graph with the label of each node as it appears in the input.
fn load_graph(seed: u64, g: &GraphSource) -> anyhow::Result<(Graph, Vec<usize>)> {
    let (graph, labels) = match &g.edges {
        Some(path) => {
            let (graph, stats) = load_edge_list(open(path)?, g.base.into())
                .with_context(|| format!("reading {}", path.display()))?;
            let shift = usize::from(!stats.zero_based);
            let labels: Vec<usize> = (0..graph.n()).map(|i| i + shift).collect();
            (graph, labels)
        }
        None => {
            if !(0.0..=1.0).contains(&g.edge_prob) || g.nodes == 0 {
                bail!("random graph needs --nodes >= 1 and --edge-prob in [0, 1]");
            }
            let graph = Graph::erdos_renyi(g.nodes, g.edge_prob, seed);
            (graph, (1..=g.nodes).collect())
        }
    };
    if g.lcc {
        let (sub, ids) = graph.largest_component();
        let labels = ids.iter().map(|&i| labels[i]).collect();
        Ok((sub, labels))
    } else {
        Ok((graph, labels))
    }
}

fn graph(ctx: &Ctx, cmd: GraphCommand) -> anyhow::Result<()> {
    match cmd {
        GraphCommand::Mlpr {
            graph: src,
            alpha,
            beta,
            tol,
            maxit,
        } => {
            let (g, labels) = load_graph(ctx.seed, &src)?;
            let walk = TriangleWalk::new(&g)?;
            let v = StochasticVector::uniform(g.n());
            let opts = SolveOptions::default().with_tol(tol).with_maxit(maxit);
            let r = hots_core::graph::triangle_mlpr(&walk, alpha, beta, &v, &v, &opts)?;
            struct NodeRow(usize, f64, f64);
            impl Row for NodeRow {
                fn header() -> &'static [&'static str] {
                    &["node", "x", "z", "x_minus_z"]
                }
                fn record(&self) -> Vec<String> {
                    vec![
                        self.0.to_string(),
                        float(self.1),
                        float(self.2),
                        float(self.1 - self.2),
                    ]
                }
            }
            let rows: Vec<NodeRow> = labels
                .iter()
                .zip(
                    r.solve
                        .solution
                        .as_slice()
                        .iter()
                        .zip(r.pagerank.as_slice()),
                )
                .map(|(&l, (&x, &z))| NodeRow(l, x, z))
                .collect();
            let json = json!({
                "n": g.n(),
                "m": g.m(),
                "alpha": alpha,
                "beta": beta,
                "triangles": walk.stats,
                "nodes": labels,
                "result": r,
            });
            if !r.solve.converged {
                eprintln!("warning: triangle PageRank did not converge in {maxit} iterations");
            }
            ctx.write(Format::Csv, |f, w| emit(f, &rows, &json, w))
        }
        GraphCommand::Stats { graph: src } => {
            let (g, _) = load_graph(ctx.seed, &src)?;
            let walk = TriangleWalk::new(&g)?;
            let json = json!({
                "n": g.n(),
                "m": g.m(),
                "triangles": walk.stats,
                "norm_diff": walk.one_norm_diff()?,
            });
            let rows = vec![
                NameValue("n".into(), g.n() as f64, String::new()),
                NameValue("m".into(), g.m() as f64, String::new()),
                NameValue(
                    "triangles".into(),
                    walk.stats.triangles as f64,
                    String::new(),
                ),
                NameValue("nonzeros".into(), walk.stats.nonzeros as f64, String::new()),
            ];
            ctx.write(Format::Json, |f, w| emit(f, &rows, &json, w))
        }
    }
}

fn experiment(ctx: &Ctx, cmd: ExperimentCommand) -> anyhow::Result<()> {
    match cmd {
        ExperimentCommand::Fig1 {
            samples,
            n_min,
            n_max,
        } => {
            let cfg = Fig1Config {
                samples,
                n_min,
                n_max,
                seed: ctx.seed,
            };
            let out = fig1_scatter(&cfg)?;
            eprintln!(
                "T > TH observed in {} of {samples} samples",
                out.tau_h_violations
            );
            ctx.write(Format::Csv, |f, w| emit(f, &out.rows, &out, w))
        }
        ExperimentCommand::Fig2 { source, alphas } => {
            let p = dense_tensor(&source)?;
            let rows = fig2_mlpr_sweep(&p, &unit_grid("alpha", &alphas)?)?;
            ctx.write(Format::Csv, |f, w| emit(f, &rows, &rows, w))
        }
        ExperimentCommand::Fig3 {
            graph: src,
            alphas,
            betas,
            tol,
            maxit,
        } => {
            let (g, _) = load_graph(ctx.seed, &src)?;
            let walk = TriangleWalk::new(&g)?;
            let v = StochasticVector::uniform(g.n());
            let opts = SolveOptions::default().with_tol(tol).with_maxit(maxit);
            let out = fig3_triangle_grid(
                &walk,
                &unit_grid("alpha", &alphas)?,
                &unit_grid("beta", &betas)?,
                &v,
                &opts,
            )?;
            ctx.write(Format::Csv, |f, w| emit(f, &out.rows, &out, w))?;
            if out.violations > 0 {
                return Err(Error::Invariant(format!(
                    "{} grid cells violated the PageRank distance bound",
                    out.violations
                ))
                .into());
            }
            Ok(())
        }
        ExperimentCommand::Fig4 {
            graph: src,
            reference,
            compare,
            tol,
            maxit,
        } => {
            let (g, labels) = load_graph(ctx.seed, &src)?;
            let walk = TriangleWalk::new(&g)?;
            let v = StochasticVector::uniform(g.n());
            let opts = SolveOptions::default().with_tol(tol).with_maxit(maxit);
            let comparisons = compare
                .iter()
                .map(|s| parse_pair(s))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let out = fig4_solution_scatter(
                &walk,
                &labels,
                parse_pair(&reference)?,
                &comparisons,
                &v,
                &opts,
            )?;
            ctx.write(Format::Csv, |f, w| emit(f, &out.rows(), &out, w))
        }
        ExperimentCommand::Fig5 {
            source,
            sigmas,
            left_weight,
        } => {
            let p = dense_tensor(&source)?;
            let out = fig5_shift_sweep(&p, &unit_grid("sigma", &sigmas)?, left_weight)?;
            ctx.write(Format::Csv, |f, w| emit(f, &out.rows, &out, w))
        }
    }
}

/// Exit status for an error: 2 for a violated invariant, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    let invariant = err
        .chain()
        .filter_map(|e| e.downcast_ref::<Error>())
        .any(Error::is_invariant_violation);
    if invariant {
        2
    } else {
        1
    }
}
