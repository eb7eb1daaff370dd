use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hajlasz::corpus::{self, NamedFunction};
use hajlasz::embed::{embedding_report, regime_classify, Regime};
use hajlasz::smoothness::{besov_seminorm, k_bounds_from_steps, ModulusProfile, ModulusSteps};
use hajlasz::verify::{sandwich_t_grid, verify, Theorem, VerifyOutcome, VerifyParams};
use hajlasz::{Error, Exponent, PowerLog, RISpaceSpec, Space, StepDecreasing};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "hajlasz", version, about = "Embedding diagnostics on finite metric measure spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Doubling constant, dimension, lower mass bound and diameter.
    SpaceInfo,
    /// Quasi-norm of every corpus function in every spec.
    Norms,
    /// Modulus of smoothness on a geometric radius grid.
    Modulus,
    /// Besov seminorms over the (spec, alpha, s, q) grid.
    Besov,
    /// Two-sided K-functional bounds, with the exact value for L^1.
    Kfun,
    /// Run a named theorem check.
    Verify,
    /// Classify Lorentz-Zygmund embeddings over a parameter grid.
    Regimes(RegimeGrid),
    /// Empirical constant of the oscillation inequality as the measure collapses.
    CollapseSweep,
}

#[derive(Args, Default)]
struct Opts {
    /// RunConfig JSON file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Space file, or `path:N[:H[:W]]`, `grid:RxC[:H[:W]]`, `rgg:N:RADIUS`.
    #[arg(long, global = true)]
    space: Option<String>,
    /// Corpus file, or `random-uniform:N`, `indicators`, `tents`, `lipschitz-noise:N`, `constants`.
    #[arg(long, global = true)]
    corpus: Option<String>,
    /// Spec JSON, inline or as a file; repeatable.
    #[arg(long, global = true)]
    spec: Vec<String>,
    #[arg(long, global = true, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long, global = true, value_delimiter = ',')]
    s: Vec<f64>,
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_exponent)]
    q: Vec<Exponent>,
    #[arg(long, global = true)]
    theorem: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    grid_ratio: Option<f64>,
    /// Weight `u` as PowerLog JSON `{"k":..,"a":..,"b":..,"c":..}`.
    #[arg(long, global = true)]
    weight: Option<String>,
    /// Values of t for `kfun`.
    #[arg(long, global = true, value_delimiter = ',')]
    t: Vec<f64>,
    /// Weight factors for `collapse-sweep`.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Vec<f64>,
}

#[derive(Args)]
struct RegimeGrid {
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 4.0])]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_exponent, default_values = ["0.5", "1", "2", "inf"])]
    r: Vec<Exponent>,
    #[arg(long, value_delimiter = ',', default_values_t = [-1.0, 0.0, 0.5, 1.0, 2.0])]
    beta: Vec<f64>,
    #[arg(long = "dim", value_delimiter = ',', default_values_t = [0.5, 1.0])]
    dim: Vec<f64>,
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

/// Run configuration. Every field is optional; flags take precedence.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    space_path: Option<String>,
    corpus: Option<String>,
    #[serde(default)]
    spec: Vec<RISpaceSpec>,
    #[serde(default)]
    params: Params,
    output_dir: Option<PathBuf>,
    seed: Option<u64>,
    theorem: Option<String>,
    grid_ratio: Option<f64>,
    weight: Option<PowerLog>,
    #[serde(default)]
    tolerance: Overrides,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(default)]
    alpha: Vec<f64>,
    #[serde(default)]
    s: Vec<f64>,
    #[serde(default)]
    q: Vec<Exponent>,
    #[serde(default)]
    t: Vec<f64>,
    #[serde(default)]
    eps: Vec<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    t_points: Option<usize>,
    grid_points: Option<usize>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::InvalidSpace(_) | Error::Domain(_) | Error::InvalidSpec(_) => 2,
            Error::Precondition(_) => 3,
            Error::Evaluation(_) | Error::Solver { .. } | Error::Symbolic(_) | Error::Inconsistent(_) => 4,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        };
        let mut message = e.to_string();
        if let Error::Solver { dump, .. } = &e {
            message.push('\n');
            message.push_str(dump);
        }
        Failure { code, message }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn io(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

type Res<T> = Result<T, Failure>;

/// The merged configuration.
struct Run {
    space: Option<String>,
    corpus: Option<String>,
    specs: Vec<RISpaceSpec>,
    alphas: Vec<f64>,
    ss: Vec<f64>,
    s_given: bool,
    qs: Vec<Exponent>,
    ts: Vec<f64>,
    eps: Vec<f64>,
    out: PathBuf,
    seed: u64,
    theorem: Option<String>,
    grid_ratio: f64,
    weight: Option<PowerLog>,
    t_points: usize,
    grid_points: usize,
}

fn or<T>(flag: Vec<T>, config: Vec<T>, default: Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else if !config.is_empty() {
        config
    } else {
        default
    }
}

fn parse_spec(text: &str) -> Res<RISpaceSpec> {
    let json = if Path::new(text).is_file() { fs::read_to_string(text).map_err(io)? } else { text.to_string() };
    Ok(RISpaceSpec::from_json(&json)?)
}

impl Run {
    fn merge(opts: Opts) -> Res<Run> {
        let cfg: RunConfig = match &opts.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| usage(format!("config {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        let flag_specs = opts.spec.iter().map(|s| parse_spec(s)).collect::<Res<Vec<_>>>()?;
        let weight = match &opts.weight {
            Some(w) => Some(serde_json::from_str(w).map_err(|e| usage(format!("--weight: {e}")))?),
            None => cfg.weight,
        };
        let s_given = !opts.s.is_empty() || !cfg.params.s.is_empty();
        Ok(Run {
            s_given,
            space: opts.space.or(cfg.space_path),
            corpus: opts.corpus.or(cfg.corpus),
            specs: or(flag_specs, cfg.spec, vec![RISpaceSpec::lp(1.0)]),
            alphas: or(opts.alpha, cfg.params.alpha, vec![1.0]),
            ss: or(opts.s, cfg.params.s, vec![0.5]),
            qs: or(opts.q, cfg.params.q, vec![Exponent(2.0)]),
            ts: or(opts.t, cfg.params.t, vec![]),
            eps: or(opts.eps, cfg.params.eps, vec![1.0, 1e-1, 1e-2, 1e-3, 1e-4]),
            out: opts.out.or(cfg.output_dir).unwrap_or_else(|| PathBuf::from("out")),
            seed: opts.seed.or(cfg.seed).unwrap_or(0),
            theorem: opts.theorem.or(cfg.theorem),
            grid_ratio: opts.grid_ratio.or(cfg.grid_ratio).unwrap_or(2.0),
            weight,
            t_points: cfg.tolerance.t_points.unwrap_or(20),
            grid_points: cfg.tolerance.grid_points.unwrap_or(64),
        })
    }

    fn space(&self) -> Res<Space> {
        let s = self.space.as_deref().ok_or_else(|| usage("--space is required"))?;
        builtin_space(s).unwrap_or_else(|| Space::load(s).map_err(Failure::from))
    }

    fn corpus(&self, space: &Space) -> Res<Vec<NamedFunction>> {
        let c = self.corpus.as_deref().ok_or_else(|| usage("--corpus is required"))?;
        Ok(corpus::resolve(c, space, self.seed)?)
    }

    /// Every `(spec, alpha, s, q)` combination, in flag order.
    fn grid(&self) -> Vec<(RISpaceSpec, f64, f64, Exponent)> {
        let mut out = vec![];
        for spec in &self.specs {
            for &alpha in &self.alphas {
                for &s in &self.ss {
                    for &q in &self.qs {
                        out.push((spec.clone(), alpha, s, q));
                    }
                }
            }
        }
        out
    }

    fn write(&self, name: &str, json: &impl Serialize, csv: &[u8]) -> Res<()> {
        fs::create_dir_all(&self.out).map_err(io)?;
        let text = serde_json::to_string_pretty(json).map_err(io)?;
        fs::write(self.out.join(format!("{name}.json")), text + "\n").map_err(io)?;
        fs::write(self.out.join(format!("{name}.csv")), csv).map_err(io)?;
        Ok(())
    }
}

/// `path:N[:H[:W]]`, `grid:RxC[:H[:W]]`, `rgg:N:RADIUS`; `None` if `s` is
/// not of this form.
fn builtin_space(s: &str) -> Option<Res<Space>> {
    let mut parts = s.split(':');
    let kind = parts.next()?;
    if !matches!(kind, "path" | "grid" | "rgg") || !s.contains(':') {
        return None;
    }
    let rest: Vec<&str> = parts.collect();
    let bad = || usage(format!("bad space '{s}'"));
    let num = |i: usize, default: f64| -> Res<f64> {
        rest.get(i).map_or(Ok(default), |v| v.parse().map_err(|_| bad()))
    };
    let built = (|| -> Res<Space> {
        match kind {
            "path" => {
                let n: usize = rest[0].parse().map_err(|_| bad())?;
                Ok(Space::path(n, num(1, 1.0)?, vec![num(2, 1.0)?; n])?)
            }
            "grid" => {
                let (r, c) = rest[0].split_once('x').ok_or_else(bad)?;
                let (r, c): (usize, usize) = (r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?);
                Ok(Space::grid(r, c, num(1, 1.0)?, vec![num(2, 1.0)?; r * c])?)
            }
            _ => {
                let n: usize = rest[0].parse().map_err(|_| bad())?;
                let radius = rest.get(1).ok_or_else(bad)?.parse().map_err(|_| bad())?;
                Ok(Space::random_geometric(n, radius, num(2, 0.0)? as u64)?)
            }
        }
    })();
    Some(built)
}

fn csv_rows<S: Serialize>(rows: &[S]) -> Res<Vec<u8>> {
    let mut w = csv::Writer::from_writer(vec![]);
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.into_inner().map_err(io)
}

#[derive(Serialize)]
struct NormRow {
    label: String,
    spec: String,
    alpha: f64,
    norm: f64,
    sum_plus_linf: f64,
}

#[derive(Serialize)]
struct ModulusRow<'a> {
    label: &'a str,
    spec: String,
    alpha: f64,
    r: f64,
    modulus: f64,
}

#[derive(Serialize)]
struct BesovRow {
    label: String,
    spec: String,
    alpha: f64,
    s: f64,
    q: Exponent,
    seminorm: f64,
}

#[derive(Serialize)]
struct KRow {
    label: String,
    spec: String,
    alpha: f64,
    t: f64,
    lower: f64,
    upper: f64,
    exact: Option<f64>,
}

#[derive(Serialize)]
struct RegimeRow {
    p: f64,
    r: Exponent,
    beta: f64,
    s: f64,
    q: Exponent,
    #[serde(rename = "Q")]
    q_dim: f64,
    case: String,
    row: String,
    alpha_used: f64,
    target: String,
}

#[derive(Serialize)]
struct SweepRow {
    eps: f64,
    b: f64,
    c_mu: f64,
    constant: f64,
}

#[derive(Serialize)]
struct SummaryRow {
    index: usize,
    report: String,
    spec: String,
    alpha: f64,
    s: f64,
    q: Exponent,
    constant: f64,
}

fn space_info(run: &Run) -> Res<()> {
    let d = run.space()?.diagnostics();
    run.write("space", &d, &csv_rows(&[d])?)?;
    println!("{}", serde_json::to_string_pretty(&d).map_err(io)?);
    Ok(())
}

fn norms(run: &Run) -> Res<()> {
    let space = run.space()?;
    let corpus = run.corpus(&space)?;
    let mut rows = vec![];
    for spec in &run.specs {
        for &alpha in &run.alphas {
            let conv = spec.convexify(alpha)?;
            for nf in &corpus {
                let fstar = StepDecreasing::from_function(&space, &nf.values)?;
                rows.push(NormRow {
                    label: nf.label.clone(),
                    spec: conv.label(),
                    alpha,
                    norm: conv.quasi_norm(&fstar)?,
                    sum_plus_linf: fstar.sum_plus_linf_norm(alpha)?,
                });
            }
        }
    }
    run.write("norms", &serde_json::json!({ "rows": rows_json(&rows)? }), &csv_rows(&rows)?)
}

fn rows_json<S: Serialize>(rows: &[S]) -> Res<serde_json::Value> {
    serde_json::to_value(rows).map_err(io)
}

fn modulus(run: &Run) -> Res<()> {
    let space = run.space()?;
    let corpus = run.corpus(&space)?;
    let mut rows = vec![];
    let mut profiles = vec![];
    for spec in &run.specs {
        for &alpha in &run.alphas {
            for nf in &corpus {
                let p = ModulusProfile::compute(&space, &nf.values, spec, alpha, run.grid_ratio)?;
                for (&r, &v) in p.radii.iter().zip(&p.values) {
                    rows.push(ModulusRow { label: &nf.label, spec: spec.label(), alpha, r, modulus: v });
                }
                profiles.push(serde_json::json!({ "label": nf.label, "spec": spec.label(), "alpha": alpha, "profile": p }));
            }
        }
    }
    let csv = csv_rows(&rows)?;
    run.write("modulus", &profiles, &csv)
}

fn besov(run: &Run) -> Res<()> {
    let space = run.space()?;
    let corpus = run.corpus(&space)?;
    let mut rows = vec![];
    for (spec, alpha, s, q) in run.grid() {
        for nf in &corpus {
            let seminorm = besov_seminorm(&space, &nf.values, s, q, &spec, alpha)?;
            rows.push(BesovRow { label: nf.label.clone(), spec: spec.label(), alpha, s, q, seminorm });
        }
    }
    run.write("besov", &rows_json(&rows)?, &csv_rows(&rows)?)
}

fn kfun(run: &Run) -> Res<()> {
    let space = run.space()?;
    let corpus = run.corpus(&space)?;
    let ts = if run.ts.is_empty() { sandwich_t_grid(&space, run.t_points) } else { run.ts.clone() };
    let mut rows = vec![];
    for spec in &run.specs {
        for &alpha in &run.alphas {
            for nf in &corpus {
                let steps = ModulusSteps::compute(&space, &nf.values, spec, alpha)?;
                for &t in &ts {
                    let kb = k_bounds_from_steps(&space, &nf.values, t, spec, alpha, &steps)?;
                    rows.push(KRow {
                        label: nf.label.clone(),
                        spec: spec.label(),
                        alpha,
                        t,
                        lower: kb.lower,
                        upper: kb.upper,
                        exact: kb.exact,
                    });
                }
            }
        }
    }
    run.write("kfun", &rows_json(&rows)?, &csv_rows(&rows)?)
}

fn verify_cmd(run: &Run) -> Res<()> {
    let name = run.theorem.as_deref().ok_or_else(|| usage("--theorem is required"))?;
    let theorem: Theorem = name.parse()?;
    let space = run.space()?;
    let corpus = run.corpus(&space)?;
    let grid = run.grid();
    let mut outcomes: Vec<VerifyOutcome> = vec![];
    let mut summary = vec![];
    for (index, (spec, alpha, s, q)) in grid.iter().cloned().enumerate() {
        let params = VerifyParams {
            weight: run.weight,
            t_points: run.t_points,
            grid_points: run.grid_points,
            ..VerifyParams::new(spec.clone(), alpha, s, q)
        };
        let outcome = verify(theorem, &space, &corpus, &params)?;
        for report in &outcome.reports {
            let name = if grid.len() == 1 { report.theorem_id.clone() } else { format!("{}-{index}", report.theorem_id) };
            fs::create_dir_all(&run.out).map_err(io)?;
            report.write_csv(fs::File::create(run.out.join(format!("{name}.csv"))).map_err(io)?)?;
            summary.push(SummaryRow {
                index,
                report: report.theorem_id.clone(),
                spec: spec.label(),
                alpha,
                s,
                q,
                constant: report.empirical_constant,
            });
            println!("{name}: empirical constant {:e}", report.empirical_constant);
        }
        for note in &outcome.notes {
            println!("  {note}");
        }
        outcomes.push(outcome);
    }
    run.write(&format!("verify-{}", theorem.id()), &outcomes, &csv_rows(&summary)?)
}

fn regimes(run: &Run, g: &RegimeGrid) -> Res<()> {
    let mut rows = vec![];
    let mut regimes: Vec<Regime> = vec![];
    for &p in &g.p {
        for &r in &g.r {
            for &beta in &g.beta {
                for &q_dim in &g.dim {
                    let crit = q_dim / p;
                    let ss: Vec<f64> = if run.s_given {
                        run.ss.clone()
                    } else {
                        vec![0.5 * crit, crit, 1.5 * crit]
                    };
                    for s in ss.into_iter().filter(|s| *s > 0.0 && *s < 1.0) {
                        for &q in &run.qs {
                            let reg = regime_classify(p, r, beta, s, q, q_dim)?;
                            let case = serde_json::to_value(reg.case_id).map_err(io)?;
                            rows.push(RegimeRow {
                                p,
                                r,
                                beta,
                                s,
                                q,
                                q_dim,
                                case: case.as_str().unwrap_or_default().to_string(),
                                row: reg.row.clone(),
                                alpha_used: reg.alpha_used,
                                target: reg.target_description.clone(),
                            });
                            regimes.push(reg);
                        }
                    }
                }
            }
        }
    }
    println!("{} parameter points classified", rows.len());
    run.write("regimes", &regimes, &csv_rows(&rows)?)
}

fn collapse_sweep(run: &Run) -> Res<()> {
    let base = run.space()?;
    let corpus = run.corpus(&base)?;
    let (spec, alpha, s, q) = run.grid().swap_remove(0);
    let mut rows = vec![];
    for &eps in &run.eps {
        let space = base.scale_weights(eps)?;
        let report = embedding_report(&space, &corpus, &spec, alpha, s, q)?;
        let d = space.diagnostics();
        println!("eps = {eps:e}: b = {:e}, constant = {:e}", d.b, report.empirical_constant);
        rows.push(SweepRow { eps, b: d.b, c_mu: d.c_mu, constant: report.empirical_constant });
    }
    let json = serde_json::json!({ "spec": spec.label(), "alpha": alpha, "s": s, "q": q, "rows": rows_json(&rows)? });
    run.write("collapse-sweep", &json, &csv_rows(&rows)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Run::merge(cli.opts).and_then(|run| match &cli.command {
        Command::SpaceInfo => space_info(&run),
        Command::Norms => norms(&run),
        Command::Modulus => modulus(&run),
        Command::Besov => besov(&run),
        Command::Kfun => kfun(&run),
        Command::Verify => verify_cmd(&run),
        Command::Regimes(g) => regimes(&run, g),
        Command::CollapseSweep => collapse_sweep(&run),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
