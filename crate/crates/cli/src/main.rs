use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use fgm_crm::aggregate::{discrete_aggregate_fft_with, discretize_severity, mixed_erlang_aggregate};
use fgm_crm::config::{Request, RunConfig};
use fgm_crm::ordering::{default_grid, icx_compare, DEFAULT_POINTS};
use fgm_crm::reproduce::{self, Reproduction, FIGURES, TABLES};
use fgm_crm::simulate::{mc_estimate, simulate, Algorithm, SimOptions};
use fgm_crm::{
    expected_s, risk_measures, variance_s, AggregateDistribution, BernoulliDependence, CollectiveRiskModel, Error,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

/// Collective risk models with FGM frequency-severity dependence.
#[derive(Parser)]
#[command(name = "fgmcrm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean and variance of S with their decompositions.
    Moments(ModelArgs),
    /// Probability mass function of S.
    Pmf(ModelArgs),
    /// VaR and TVaR of S.
    Risk(ModelArgs),
    /// Conditional laws of the claim sizes given N = n.
    Components(ModelArgs),
    /// Monte Carlo estimates from the stochastic representation.
    Simulate(SimArgs),
    /// Stop-loss comparison of two models.
    Order(OrderArgs),
    /// Recompute a published table or figure and compare with the printed values.
    Reproduce(ReproduceArgs),
    /// Run the request named in the config file.
    Run(ModelArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the dependence structure: independent, comonotone,
    /// counter-frequency, indep-comonotone, indep-counter.
    #[arg(long)]
    family: Option<String>,
    /// Discretization step for continuous claim sizes (FFT route).
    #[arg(long)]
    grid_step: Option<f64>,
    /// FFT length (power of two).
    #[arg(long)]
    grid_len: Option<usize>,
    /// Comma-separated risk levels.
    #[arg(long, value_delimiter = ',')]
    kappa: Option<Vec<f64>>,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    algorithm: Option<u8>,
    /// Write the raw records (rep, n, s) here.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    model_a: PathBuf,
    #[arg(long)]
    model_b: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Absolute slack on stop-loss differences.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, conflicts_with_all = ["figure", "all"])]
    table: Option<u8>,
    #[arg(long, conflicts_with = "all")]
    figure: Option<u8>,
    /// Every table and figure check in one file.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Outcome {
    Ok,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::InvalidParameter(_)) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

fn dispatch(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Moments(a) => with_config(&a, |c, m, out| moments(c, m, out)),
        Command::Pmf(a) => with_config(&a, |c, m, out| pmf(c, m, &a, out)),
        Command::Risk(a) => with_config(&a, |c, m, out| risk(c, m, &a, out)),
        Command::Components(a) => with_config(&a, |c, m, out| components(c, m, out)),
        Command::Simulate(s) => with_config(&s.model, |c, m, out| sim(c, m, &s, out)),
        Command::Order(o) => order(&o),
        Command::Reproduce(r) => reproduce_cmd(&r),
        Command::Run(a) => with_config(&a, |c, m, out| match c.compute.request {
            Some(Request::Moments) => moments(c, m, out),
            Some(Request::Pmf) => pmf(c, m, &a, out),
            Some(Request::Risk) => risk(c, m, &a, out),
            Some(Request::Components) => components(c, m, out),
            Some(Request::Simulate) => {
                let s = SimArgs { model: a.clone(), reps: None, seed: None, algorithm: None, dump: None };
                sim(c, m, &s, out)
            }
            None => Err(Error::Config("compute.request is required by `run`".into()).into()),
        }),
    }
}

type Csv = csv::Writer<Box<dyn Write>>;

fn writer(path: Option<&Path>) -> anyhow::Result<Csv> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn with_config<F>(a: &ModelArgs, f: F) -> anyhow::Result<Outcome>
where
    F: FnOnce(&RunConfig, &CollectiveRiskModel, &mut Csv) -> anyhow::Result<()>,
{
    let cfg = RunConfig::load(&a.config)?;
    let mut m = cfg.model()?;
    if let Some(name) = &a.family {
        m = m.with_dependence(parse_family(name)?).map_err(|e| Error::Config(format!("--family: {e}")))?;
    }
    let out = a.out.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    let mut w = writer(out.as_deref())?;
    f(&cfg, &m, &mut w)?;
    w.flush()?;
    Ok(Outcome::Ok)
}

fn parse_family(name: &str) -> anyhow::Result<BernoulliDependence> {
    Ok(match name {
        "independent" => BernoulliDependence::Independent,
        "comonotone" => BernoulliDependence::Comonotone,
        "counter-frequency" => BernoulliDependence::CounterFreq,
        "indep-comonotone" => BernoulliDependence::IndepFreqComonotoneSev,
        "indep-counter" => BernoulliDependence::IndepFreqCounterSev,
        other => bail!(Error::Config(format!("--family: unknown family {other:?}"))),
    })
}

fn moments(_: &RunConfig, m: &CollectiveRiskModel, w: &mut Csv) -> anyhow::Result<()> {
    let e = expected_s(m)?;
    let v = variance_s(m)?;
    w.write_record(["quantity", "value"])?;
    let rows = [
        ("mean", e.total),
        ("mean_baseline", e.baseline),
        ("mean_dependence", e.dependence),
        ("variance", v.total),
        ("c_evar", v.c_evar),
        ("c_ecov", v.c_ecov),
        ("c_vare", v.c_vare),
        ("variance_baseline", v.baseline),
        ("variance_dependence", v.c_dep),
        ("count_truncation", v.truncation),
        ("theta01", m.theta01()),
        ("theta12", m.theta12()),
        ("theta012", m.theta012()),
    ];
    for (k, val) in rows {
        w.write_record([k.to_string(), val.to_string()])?;
    }
    Ok(())
}

/// Exact mixed Erlang law when available, else the FFT on a grid.
fn aggregate(cfg: &RunConfig, m: &CollectiveRiskModel, a: &ModelArgs) -> anyhow::Result<AggregateDistribution> {
    let c = &cfg.compute;
    let step = a.grid_step.or(c.grid_step);
    let len = a.grid_len.unwrap_or(c.grid_len);
    if m.sev.is_discrete() {
        return Ok(discrete_aggregate_fft_with(m, len, c.alias_tol)?);
    }
    if let Some(h) = step {
        let x = discretize_severity(&m.sev, h, len, c.span_tol)?;
        let md = CollectiveRiskModel::new(m.freq.clone(), x, m.dep.clone())?;
        return Ok(discrete_aggregate_fft_with(&md, len, c.alias_tol)?);
    }
    if m.sev.as_mixed_erlang().is_some() {
        return Ok(mixed_erlang_aggregate(m)?);
    }
    bail!(Error::Config("claim sizes are neither discrete nor mixed Erlang; pass --grid-step".into()))
}

fn pmf(cfg: &RunConfig, m: &CollectiveRiskModel, a: &ModelArgs, w: &mut Csv) -> anyhow::Result<()> {
    match aggregate(cfg, m, a)? {
        AggregateDistribution::Grid(g) => {
            w.write_record(["s", "pmf", "cdf"])?;
            for (i, (p, c)) in g.pmf.iter().zip(g.cdf_values()).enumerate() {
                w.write_record([(i as f64 * g.step).to_string(), p.to_string(), c.to_string()])?;
            }
        }
        AggregateDistribution::MixedErlang(me) => {
            w.write_record(["order", "mass", "rate"])?;
            w.write_record(["0".to_string(), me.atom.to_string(), me.rate.to_string()])?;
            for (k, q) in me.masses.iter().enumerate() {
                w.write_record([(k + 1).to_string(), q.to_string(), me.rate.to_string()])?;
            }
        }
        AggregateDistribution::MomentOnly { .. } => unreachable!("aggregate() never returns moments only"),
    }
    Ok(())
}

fn risk(cfg: &RunConfig, m: &CollectiveRiskModel, a: &ModelArgs, w: &mut Csv) -> anyhow::Result<()> {
    let agg = aggregate(cfg, m, a)?;
    let method = if agg.as_grid().is_some() { "fft" } else { "mixed-erlang" };
    let kappas = a.kappa.clone().unwrap_or_else(|| cfg.compute.kappa.clone());
    w.write_record(["kappa", "var", "tvar", "method"])?;
    for r in risk_measures(&agg, &kappas)? {
        w.write_record([r.kappa.to_string(), r.var.to_string(), r.tvar.to_string(), method.to_string()])?;
    }
    Ok(())
}

fn components(cfg: &RunConfig, m: &CollectiveRiskModel, w: &mut Csv) -> anyhow::Result<()> {
    let max_n = cfg.compute.max_n.unwrap_or(100).min(m.freq.max_n() as u64);
    let xs = cfg.compute.x.clone().unwrap_or_default();
    let discrete = m.sev.is_discrete();
    let mut header: Vec<String> = ["n", "prob", "ratio", "mean", "second_moment", "cov"].map(String::from).to_vec();
    for x in &xs {
        header.push(format!("cdf@{x}"));
        header.push(format!("{}@{x}", if discrete { "pmf" } else { "density" }));
    }
    w.write_record(&header)?;
    for n in 0..=max_n {
        if m.freq.pmf(n) <= 0.0 {
            continue;
        }
        let mut row = vec![
            n.to_string(),
            m.freq.pmf(n).to_string(),
            m.freq.ratio(n).to_string(),
            m.conditional_mean(n)?.to_string(),
            m.conditional_second_moment(n)?.to_string(),
            m.conditional_cov(n)?.to_string(),
        ];
        for &x in &xs {
            row.push(m.conditional_sev_cdf(n, x)?.to_string());
            let d = if discrete { m.conditional_sev_pmf(n, x)? } else { m.conditional_sev_density(n, x)? };
            row.push(d.to_string());
        }
        w.write_record(&row)?;
    }
    Ok(())
}

fn sim(cfg: &RunConfig, m: &CollectiveRiskModel, s: &SimArgs, w: &mut Csv) -> anyhow::Result<()> {
    let c = &cfg.compute;
    let reps = s.reps.unwrap_or(c.reps);
    let seed = s.seed.unwrap_or(c.seed);
    let algorithm = Algorithm::from_number(s.algorithm.unwrap_or(c.algorithm))?;
    let kappas = s.model.kappa.clone().unwrap_or_else(|| c.kappa.clone());
    let batch = simulate(m, reps, seed, SimOptions { algorithm, recycle: true })?;
    if let Some(path) = &s.dump {
        let mut d = writer(Some(path))?;
        d.write_record(["rep", "n", "s"])?;
        for i in 0..batch.reps() {
            d.write_record([i.to_string(), batch.counts[i].to_string(), batch.totals[i].to_string()])?;
        }
        d.flush()?;
    }
    let exact_mean = expected_s(m).map(|e| e.total).ok();
    let exact_var = variance_s(m).map(|v| v.total).ok();
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    w.write_record(["statistic", "estimate", "se", "exact", "reps", "seed", "algorithm"])?;
    let meta = [reps.to_string(), seed.to_string(), algorithm.number().to_string()];
    let mut row = |name: String, est: f64, se: f64, exact: Option<f64>| -> anyhow::Result<()> {
        let mut r = vec![name, est.to_string(), se.to_string(), fmt(exact)];
        r.extend(meta.iter().cloned());
        w.write_record(&r)?;
        Ok(())
    };
    let mut first = true;
    for &k in &kappas {
        let e = mc_estimate(&batch.totals, k, c.bootstrap, seed)?;
        if first {
            row("mean".into(), e.mean, e.mean_se, exact_mean)?;
            row("variance".into(), e.variance, e.variance_se, exact_var)?;
            first = false;
        }
        row(format!("var_{k}"), e.var, e.var_se, None)?;
        row(format!("tvar_{k}"), e.tvar, e.tvar_se, None)?;
    }
    Ok(())
}

fn order(o: &OrderArgs) -> anyhow::Result<Outcome> {
    let a_cfg = RunConfig::load(&o.model_a)?;
    let b_cfg = RunConfig::load(&o.model_b)?;
    let args = |c: &RunConfig, p: &Path| ModelArgs {
        config: p.to_path_buf(),
        out: None,
        family: None,
        grid_step: None,
        grid_len: None,
        kappa: None,
    }
    .with_step(c);
    let a = aggregate(&a_cfg, &a_cfg.model()?, &args(&a_cfg, &o.model_a))?;
    let b = aggregate(&b_cfg, &b_cfg.model()?, &args(&b_cfg, &o.model_b))?;
    let grid = default_grid(&a, &b, o.points)?;
    let cmp = icx_compare(&a, &b, &grid, o.tol)?;
    eprintln!("verdict: {}", cmp.verdict.label());
    let mut w = writer(o.out.as_deref())?;
    w.write_record(["retention", "stop_loss_a", "stop_loss_b", "relation", "verdict"])?;
    for ((d, sa), sb) in grid.iter().zip(&cmp.curve_a.values).zip(&cmp.curve_b.values) {
        let rel = if sa > &(sb + o.tol) {
            "a>b"
        } else if sb > &(sa + o.tol) {
            "b>a"
        } else {
            "="
        };
        w.write_record([d.to_string(), sa.to_string(), sb.to_string(), rel.to_string(), cmp.verdict.label().to_string()])?;
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

impl ModelArgs {
    fn with_step(mut self, c: &RunConfig) -> Self {
        self.grid_step = c.compute.grid_step;
        self
    }
}

fn write_cells(w: &mut Csv, reps: &[Reproduction]) -> anyhow::Result<()> {
    w.write_record(["item", "row", "column", "computed", "golden", "tolerance", "status"])?;
    for r in reps {
        for c in &r.cells {
            w.write_record([
                r.name.clone(),
                c.row.clone(),
                c.column.clone(),
                c.computed.to_string(),
                c.golden.map(|g| g.to_string()).unwrap_or_default(),
                c.tolerance.to_string(),
                c.status.label().to_string(),
            ])?;
        }
    }
    Ok(())
}

fn reproduce_cmd(r: &ReproduceArgs) -> anyhow::Result<Outcome> {
    let results: Vec<Reproduction> = match (r.table, r.figure, r.all) {
        (Some(t), None, false) => vec![reproduce::table(t)?],
        (None, Some(f), false) => vec![reproduce::figure(f)?],
        (None, None, true) => {
            let mut v = TABLES.iter().map(|&t| reproduce::table(t)).collect::<Result<Vec<_>, _>>()?;
            v.extend(FIGURES.iter().map(|&f| reproduce::figure(f)).collect::<Result<Vec<_>, _>>()?);
            v
        }
        _ => bail!(Error::Config("pass one of --table N, --figure N, --all".into())),
    };
    let mut w = writer(r.out.as_deref())?;
    match (&results[..], r.figure) {
        ([one], Some(_)) => {
            let s = one.series.as_ref().expect("figures carry series");
            w.write_record(&s.header)?;
            for row in &s.rows {
                w.write_record(row.iter().map(|v| v.to_string()))?;
            }
            for c in &one.cells {
                eprintln!("{} [{} / {}]: {} ({})", one.name, c.row, c.column, c.computed, c.status.label());
            }
        }
        _ => write_cells(&mut w, &results)?,
    }
    w.flush()?;
    let mut ok = true;
    for res in &results {
        if !res.passed() {
            ok = false;
            eprint!("{}", res.diff_report());
        }
    }
    Ok(if ok { Outcome::Ok } else { Outcome::Mismatch })
}
