//! Command-line front end: load body description files, run any estimator,
//! run the cross-method validation suite, emit CSV.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use crate::bodies::ConvexBody;
use crate::error::{GeomError, Result};
use crate::report::{EstimateReport, Mode, QuadratureSpec};
use crate::{cauchy, crofton, holmes_thompson as ht, io};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Funk,
    Hilbert,
    Minkowski,
}

impl Model {
    fn name(&self) -> &'static str {
        match self {
            Model::Funk => "funk",
            Model::Hilbert => "hilbert",
            Model::Minkowski => "minkowski",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Cauchy,
    Vertex,
    Crofton,
    #[value(name = "double-integral")]
    DoubleIntegral,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Cauchy => "cauchy",
            Method::Vertex => "vertex",
            Method::Crofton => "crofton",
            Method::DoubleIntegral => "double-integral",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "funkgeo",
    about = "Holmes-Thompson surface areas and volumes in Funk, Hilbert, and Minkowski geometries"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Surface area of G in the geometry induced by K.
    Area(RunArgs),
    /// Volume of G in the geometry induced by K.
    Volume(RunArgs),
    /// Budget sweep, or the Minkowski scaling study when --radii is given.
    Convergence(ConvergenceArgs),
    /// Cross-method and special-case validation suite on the given bodies.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Body description file for the ambient body K.
    #[arg(long = "body-k")]
    body_k: PathBuf,
    /// Body description file for the nested body G.
    #[arg(long = "body-g")]
    body_g: PathBuf,
    /// Node count (deterministic) or sample count (Monte-Carlo).
    #[arg(long)]
    budget: Option<usize>,
    /// Seed for every random stream.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Rayon thread count (results are identical for every value).
    #[arg(long)]
    threads: Option<usize>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Require both bodies to have exactly this ambient dimension.
    #[arg(long = "dimension-check")]
    dimension_check: Option<usize>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, value_enum)]
    method: Method,
    /// Scale factors for the Minkowski limit study (model funk, method
    /// cauchy); a budget sweep is run when omitted.
    #[arg(long, value_delimiter = ',')]
    radii: Vec<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
}

/// Entry point for the `funkgeo` binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let common = match &cli.command {
        Command::Area(a) | Command::Volume(a) => &a.common,
        Command::Convergence(c) => &c.common,
        Command::Validate(v) => &v.common,
    };
    let k = io::load_body(&common.body_k)?;
    let g = io::load_body(&common.body_g)?;
    if k.dimension() != g.dimension() {
        return Err(GeomError::Invariant(format!(
            "dimension mismatch: K is {}-dimensional, G is {}-dimensional",
            k.dimension(),
            g.dimension()
        )));
    }
    if let Some(d) = common.dimension_check {
        if k.dimension() != d {
            return Err(GeomError::Invariant(format!(
                "dimension check failed: bodies are {}-dimensional, expected {d}",
                k.dimension()
            )));
        }
    }
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(GeomError::Invariant("thread count must be >= 1".into()));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads.unwrap_or(0))
        .build()
        .map_err(|e| GeomError::Invariant(format!("thread pool: {e}")))?;

    let mut out = String::new();
    let code = pool.install(|| match &cli.command {
        Command::Area(a) => run_measure(&mut out, a, &k, &g, MeasureKind::Area),
        Command::Volume(a) => run_measure(&mut out, a, &k, &g, MeasureKind::Volume),
        Command::Convergence(c) => run_convergence(&mut out, c, &k, &g),
        Command::Validate(v) => run_validate(&mut out, v, &k, &g),
    })?;
    write_output(common.output.as_deref(), &out)?;
    Ok(code)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| GeomError::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| GeomError::Parse(format!("stdout: {e}")))
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum MeasureKind {
    Area,
    Volume,
}

const RUN_HEADER: &str = "method,model,d,value,std_err,budget,seed,seconds\n";

fn resolve_spec(method: Method, d: usize, budget: Option<usize>, seed: u64) -> QuadratureSpec {
    match method {
        Method::Crofton | Method::DoubleIntegral => {
            QuadratureSpec::monte_carlo(budget.unwrap_or(100_000), seed)
        }
        _ if d == 2 => QuadratureSpec {
            mode: Mode::Deterministic,
            budget: budget.unwrap_or(4096),
            seed,
        },
        _ => QuadratureSpec::monte_carlo(budget.unwrap_or(100_000), seed),
    }
}

fn dispatch_area(
    model: Model,
    method: Method,
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    match (model, method) {
        (Model::Funk, Method::Direct) => ht::funk_area_direct(k, g, spec),
        (Model::Funk, Method::Cauchy) => cauchy::funk_area_cauchy(k, g, spec),
        (Model::Funk, Method::Vertex) => {
            let kp = k.as_polytope().ok_or_else(|| {
                GeomError::Invariant("the vertex method requires a polytopal K".into())
            })?;
            Ok(cauchy::funk_area_vertex_decomposition(kp, g, spec)?.0)
        }
        (Model::Funk, Method::Crofton) => crofton::crofton_estimate(k, Some(g), spec.budget, spec.seed),
        (Model::Funk, Method::DoubleIntegral) => cauchy::funk_area_double_integral(k, g, spec),
        (Model::Hilbert, Method::Direct) => ht::hilbert_area_direct(k, g, spec),
        (Model::Minkowski, Method::Direct) => ht::minkowski_area_direct(k, g, spec),
        (Model::Minkowski, Method::Cauchy) => cauchy::minkowski_area(k, g, spec),
        (m, meth) => Err(GeomError::Invariant(format!(
            "method {} is not defined for model {}",
            meth.name(),
            m.name()
        ))),
    }
}

fn dispatch_volume(
    model: Model,
    method: Method,
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    match (model, method) {
        (Model::Funk, Method::Direct) => ht::funk_volume(k, g, spec),
        (Model::Hilbert, Method::Direct) => ht::hilbert_volume(k, g, spec),
        (m, meth) => Err(GeomError::Invariant(format!(
            "volume supports model funk|hilbert with method direct, got {}/{}",
            m.name(),
            meth.name()
        ))),
    }
}

fn run_measure(
    out: &mut String,
    args: &RunArgs,
    k: &ConvexBody,
    g: &ConvexBody,
    kind: MeasureKind,
) -> Result<i32> {
    let d = k.dimension();
    let spec = resolve_spec(args.method, d, args.common.budget, args.common.seed);
    spec.validate()?;
    let start = Instant::now();
    let report = match kind {
        MeasureKind::Area => dispatch_area(args.model, args.method, k, g, &spec)?,
        MeasureKind::Volume => dispatch_volume(args.model, args.method, k, g, &spec)?,
    };
    out.push_str(RUN_HEADER);
    out.push_str(&format!(
        "{},{},{d},{},{},{},{},{:.6}\n",
        args.method.name(),
        args.model.name(),
        report.value,
        report.std_err,
        spec.budget,
        spec.seed,
        start.elapsed().as_secs_f64(),
    ));
    Ok(0)
}

const CONVERGENCE_HEADER: &str = "method,model,d,param,value,std_err,budget,seed,seconds\n";

fn run_convergence(
    out: &mut String,
    args: &ConvergenceArgs,
    k: &ConvexBody,
    g: &ConvexBody,
) -> Result<i32> {
    let d = k.dimension();
    out.push_str(CONVERGENCE_HEADER);
    if !args.radii.is_empty() {
        if !(args.model == Model::Funk && args.method == Method::Cauchy) {
            return Err(GeomError::Invariant(
                "the radius sweep is defined for --model funk --method cauchy".into(),
            ));
        }
        let spec = resolve_spec(args.method, d, args.common.budget, args.common.seed);
        let start = Instant::now();
        let study = cauchy::minkowski_limit_study(k, g, &args.radii, &spec)?;
        for p in &study.points {
            out.push_str(&format!(
                "cauchy,funk,{d},{},{},{},{},{},{:.6}\n",
                p.r,
                p.value.value,
                p.value.std_err,
                spec.budget,
                spec.seed,
                start.elapsed().as_secs_f64()
            ));
        }
        out.push_str(&format!(
            "cauchy,minkowski,{d},0,{},{},{},{},{:.6}\n",
            study.limit.value,
            study.limit.std_err,
            spec.budget,
            spec.seed,
            start.elapsed().as_secs_f64()
        ));
        return Ok(0);
    }
    // Budget sweep: quarters up to the requested budget.
    let top = resolve_spec(args.method, d, args.common.budget, args.common.seed).budget;
    let mut budgets = vec![top];
    let mut b = top;
    while budgets.len() < 4 && b / 4 >= 64 {
        b /= 4;
        budgets.push(b);
    }
    budgets.reverse();
    for b in budgets {
        let spec = resolve_spec(args.method, d, Some(b), args.common.seed);
        let start = Instant::now();
        let report = dispatch_area(args.model, args.method, k, g, &spec)?;
        out.push_str(&format!(
            "{},{},{d},{b},{},{},{b},{},{:.6}\n",
            args.method.name(),
            args.model.name(),
            report.value,
            report.std_err,
            spec.seed,
            start.elapsed().as_secs_f64()
        ));
    }
    Ok(0)
}

const VALIDATE_HEADER: &str = "check,model,d,pass,deviation,budget,seed,seconds\n";

struct CheckRow {
    check: &'static str,
    model: &'static str,
    pass: bool,
    deviation: f64,
}

fn run_validate(
    out: &mut String,
    args: &ValidateArgs,
    k: &ConvexBody,
    g: &ConvexBody,
) -> Result<i32> {
    let d = k.dimension();
    let budget = args.common.budget;
    let seed = args.common.seed;
    let spec = resolve_spec(Method::Direct, d, budget, seed);
    let mc_budget = budget.unwrap_or(200_000);
    let start = Instant::now();
    let mut rows: Vec<CheckRow> = Vec::new();

    let funk_direct = ht::funk_area_direct(k, g, &spec)?;
    let hilb_direct = ht::hilbert_area_direct(k, g, &spec)?;

    // Shadow averaging against the boundary integral.
    let cauchy_est = cauchy::funk_area_cauchy(k, g, &spec)?;
    rows.push(agreement_row(
        "funk-cauchy-vs-direct",
        "funk",
        d,
        &cauchy_est,
        &funk_direct,
    ));

    // Vertex decomposition (polytopal K only).
    if let Some(kp) = k.as_polytope() {
        let (vertex_est, _) = cauchy::funk_area_vertex_decomposition(kp, g, &spec)?;
        rows.push(agreement_row(
            "funk-vertex-vs-direct",
            "funk",
            d,
            &vertex_est,
            &funk_direct,
        ));
    }

    // Line sampling against the boundary integral.
    let crofton_est = crofton::crofton_estimate(k, Some(g), mc_budget, seed)?;
    rows.push(sigma_row(
        "funk-crofton-vs-direct",
        "funk",
        &crofton_est,
        &funk_direct,
    ));

    // Gnomonic double integral against the boundary integral.
    let double_est =
        cauchy::funk_area_double_integral(k, g, &QuadratureSpec::monte_carlo(mc_budget, seed))?;
    rows.push(sigma_row(
        "funk-double-integral-vs-direct",
        "funk",
        &double_est,
        &funk_direct,
    ));

    // Hilbert vs Funk area: planar equality, dimension bound otherwise.
    let ratio = hilb_direct.value / funk_direct.value;
    let bound = ht::hilbert_funk_ratio_bound(d - 1);
    let (pass, dev) = if d == 2 {
        ((ratio - 1.0).abs() < 1e-5, (ratio - 1.0).abs())
    } else {
        (
            ratio >= 1.0 - 1e-3 && ratio <= bound * (1.0 + 1e-3),
            (ratio - ratio.clamp(1.0, bound)).abs(),
        )
    };
    rows.push(CheckRow {
        check: "hilbert-funk-area-bounds",
        model: "hilbert",
        pass,
        deviation: dev,
    });

    // Volume sandwich with a common sample stream.
    let vf = ht::funk_volume(k, g, &spec)?;
    let vh = ht::hilbert_volume(k, g, &spec)?;
    let vratio = vh.value / vf.value;
    let vbound = ht::hilbert_funk_ratio_bound(d);
    rows.push(CheckRow {
        check: "hilbert-funk-volume-bounds",
        model: "hilbert",
        pass: vratio >= 1.0 - 1e-3 && vratio <= vbound * (1.0 + 1e-3),
        deviation: (vratio - vratio.clamp(1.0, vbound)).abs(),
    });

    // Minkowski shadow averaging against its own boundary integral.
    let origin_ok = matches!(k.interior_margin(&DVector::zeros(d)), Ok(m) if m > 0.0);
    if origin_ok {
        let mink_spec = resolve_spec(Method::Cauchy, d, budget, seed);
        let mc = cauchy::minkowski_area(k, g, &mink_spec)?;
        let md = ht::minkowski_area_direct(k, g, &spec)?;
        rows.push(agreement_row("minkowski-cauchy-vs-direct", "minkowski", d, &mc, &md));
    }

    out.push_str(VALIDATE_HEADER);
    let mut all_pass = true;
    for r in &rows {
        all_pass &= r.pass;
        out.push_str(&format!(
            "{},{},{d},{},{},{},{seed},{:.6}\n",
            r.check,
            r.model,
            if r.pass { "pass" } else { "fail" },
            r.deviation,
            spec.budget,
            start.elapsed().as_secs_f64()
        ));
    }
    Ok(if all_pass { 0 } else { 1 })
}

/// Relative-deviation agreement: 1e-4 for deterministic (d = 2) rules,
/// otherwise three combined standard errors (with a small floor).
fn agreement_row(
    check: &'static str,
    model: &'static str,
    d: usize,
    a: &EstimateReport,
    b: &EstimateReport,
) -> CheckRow {
    let dev = (a.value - b.value).abs() / b.value.abs().max(1e-300);
    let pass = if d == 2 {
        dev < 1e-4
    } else {
        (a.value - b.value).abs() <= (3.0 * (a.std_err + b.std_err)).max(1e-3 * b.value.abs())
    };
    CheckRow {
        check,
        model,
        pass,
        deviation: dev,
    }
}

fn sigma_row(
    check: &'static str,
    model: &'static str,
    a: &EstimateReport,
    b: &EstimateReport,
) -> CheckRow {
    let dev = (a.value - b.value).abs() / b.value.abs().max(1e-300);
    let pass = (a.value - b.value).abs() <= (3.0 * (a.std_err + b.std_err)).max(1e-6);
    CheckRow {
        check,
        model,
        pass,
        deviation: dev,
    }
}
