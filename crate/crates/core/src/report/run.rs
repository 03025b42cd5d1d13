use std::collections::BTreeMap;
use std::time::Instant;

use crate::adapted::{equivalence_step, verify_ideal_preservation, AdaptedError};
use crate::algebra::{parse_scalar, GaussRational, PolyForm, Rational};
use crate::bohr_sommerfeld::{
    bs_spectrum, liouville_integral, maslov_from_gauge, maslov_winding, tangent_frame, ActionFamily, BsProblem,
    LoopPath, PiPoly, Segment, RESIDUAL_LIMIT,
};
use crate::fedosov::{extract_bidiff, BidiffTable, FedosovError, StarProduct};
use crate::geometry::{check_adapted_data, parse_config, validate_setup, ConfigFile, QuantizationSetup};
use crate::hochschild::{associativity_residual, form_on_hamiltonians, hkr_antisymmetrize, hochschild_b, MultiDiffOp};

use super::{MaslovReport, RunReport, SetupEcho, SpectrumReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Build,
    Verify,
    Equiv,
    Spectrum,
    Maslov,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Verify => "verify",
            Command::Equiv => "equiv",
            Command::Spectrum => "spectrum",
            Command::Maslov => "maslov",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides `lambda_order`.
    pub order: Option<u32>,
    /// Overrides the degree budget.
    pub budget: Option<u32>,
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{0}")]
    Failure(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => 2,
            RunError::Validation(_) => 3,
            RunError::Failure(_) => 1,
        }
    }
}

impl From<FedosovError> for RunError {
    fn from(e: FedosovError) -> Self {
        RunError::Failure(e.to_string())
    }
}

struct Clock {
    on: bool,
    phases: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.on {
            *self.phases.entry(name.to_string()).or_default() += start.elapsed().as_secs_f64();
        }
        out
    }
}

fn load(text: &str) -> Result<ConfigFile, RunError> {
    parse_config(text).map_err(|e| RunError::Parse(e.to_string()))
}

fn setup_of(cfg: &ConfigFile, opts: &RunOptions) -> Result<QuantizationSetup, RunError> {
    let mut raw = cfg.setup.clone();
    if let Some(n) = opts.order {
        raw.lambda_order = n;
    }
    if opts.budget.is_some() {
        raw.budget = opts.budget;
    }
    validate_setup(raw).map_err(|e| RunError::Validation(e.to_string()))
}

fn value<T>(
    cfg: &ConfigFile,
    section: &str,
    key: &str,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Option<T>, RunError> {
    match cfg.value(section, key).map_err(|e| RunError::Parse(e.to_string()))? {
        None => Ok(None),
        Some((line, v)) => parse(&v)
            .map(Some)
            .ok_or_else(|| RunError::Parse(format!("line {line}: cannot read `{key} = {v}` in [{section}]"))),
    }
}

fn required<T>(cfg: &ConfigFile, section: &str, key: &str, parse: impl Fn(&str) -> Option<T>) -> Result<T, RunError> {
    value(cfg, section, key, parse)?.ok_or_else(|| RunError::Parse(format!("missing `{key}` in [{section}]")))
}

fn rational(s: &str) -> Option<Rational> {
    let c = parse_scalar(s).ok()?;
    c.is_real().then_some(c.re)
}

fn tables(star: &StarProduct, n: u32, max_order: u32) -> Result<Vec<BidiffTable>, RunError> {
    (0..=n).map(|k| Ok(extract_bidiff(star, k, max_order)?)).collect()
}

fn cochains(tables: &[BidiffTable], dim: usize) -> Vec<MultiDiffOp> {
    tables.iter().map(|t| MultiDiffOp::from_bidiff(t, dim)).collect()
}

/// Runs one command on config texts (two for `equiv`, one otherwise).
pub fn run(cmd: Command, configs: &[&str], opts: &RunOptions) -> Result<RunReport, RunError> {
    let expected = if cmd == Command::Equiv { 2 } else { 1 };
    if configs.len() != expected {
        return Err(RunError::Validation(format!(
            "{} takes {expected} config file(s), got {}",
            cmd.name(),
            configs.len()
        )));
    }
    let cfgs = configs.iter().map(|t| load(t)).collect::<Result<Vec<_>, _>>()?;
    let mut clock = Clock {
        on: opts.timing,
        phases: BTreeMap::new(),
    };
    let mut report = RunReport::new(cmd.name());
    match cmd {
        Command::Build => build(&cfgs[0], opts, &mut clock, &mut report)?,
        Command::Verify => verify(&cfgs[0], opts, &mut clock, &mut report)?,
        Command::Equiv => equiv(&cfgs[0], &cfgs[1], opts, &mut clock, &mut report)?,
        Command::Spectrum => spectrum(&cfgs[0], &mut clock, &mut report)?,
        Command::Maslov => maslov(&cfgs[0], &mut clock, &mut report)?,
    }
    if opts.timing {
        report.timing = Some(clock.phases);
    }
    Ok(report)
}

fn solve(setup: &QuantizationSetup, clock: &mut Clock, report: &mut RunReport) -> Result<StarProduct, RunError> {
    solve_named(setup, "fedosov_residual", clock, report)
}

fn solve_named(
    setup: &QuantizationSetup,
    name: &str,
    clock: &mut Clock,
    report: &mut RunReport,
) -> Result<StarProduct, RunError> {
    let star = clock.time("solve", || StarProduct::build(setup))?;
    let residual = star.solution().residual();
    report.push(Verdict::new(
        name,
        residual.is_zero(),
        if residual.is_zero() {
            format!("exactly zero at budget {}", setup.budget())
        } else {
            format!("nonzero residual: {residual}")
        },
    ));
    Ok(star)
}

fn build(cfg: &ConfigFile, opts: &RunOptions, clock: &mut Clock, report: &mut RunReport) -> Result<(), RunError> {
    let setup = setup_of(cfg, opts)?;
    report.setup = Some(SetupEcho::of(&setup));
    let star = solve(&setup, clock, report)?;
    let n = setup.lambda_order();
    report.star_coefficients = clock.time("coefficients", || tables(&star, n, n + 1))?;
    Ok(())
}

fn verify(cfg: &ConfigFile, opts: &RunOptions, clock: &mut Clock, report: &mut RunReport) -> Result<(), RunError> {
    let setup = setup_of(cfg, opts)?;
    report.setup = Some(SetupEcho::of(&setup));
    let n = setup.lambda_order();
    let dim = setup.dim();
    let star = solve(&setup, clock, report)?;

    let defect = star.solution().normalization_defect();
    report.push(Verdict::new(
        "normalization",
        defect.is_zero(),
        if defect.is_zero() { "delta^{-1} gamma = s".to_string() } else { format!("defect {defect}") },
    ));

    let tabs = clock.time("coefficients", || tables(&star, n, n + 1))?;
    let unnatural: Vec<String> = tabs
        .iter()
        .filter(|t| !t.is_natural())
        .map(|t| {
            let (l, r) = t.differential_orders();
            format!("star_{} has orders ({l}, {r})", t.k)
        })
        .collect();
    report.push(Verdict::new(
        "naturalness",
        unnatural.is_empty(),
        if unnatural.is_empty() {
            format!("star_k has order <= k in each argument for k <= {n}, probed to order {}", n + 1)
        } else {
            unnatural.join("; ")
        },
    ));

    let stars = cochains(&tabs, dim);
    let mut assoc = Vec::new();
    clock.time("associativity", || -> Result<(), RunError> {
        for k in 1..=n as usize {
            let res = associativity_residual(&stars, k).map_err(|e| RunError::Failure(e.to_string()))?;
            if let Some((args, v)) = res.witness() {
                assoc.push(format!("order {k}: {v} on {args:?}"));
            }
        }
        Ok(())
    })?;
    report.push(Verdict::new(
        "associativity",
        assoc.is_empty(),
        if assoc.is_empty() { format!("Hochschild residual zero for orders 1..{n}") } else { assoc.join("; ") },
    ));

    let wider = setup
        .with_truncation(n, Some(setup.budget() + 2))
        .map_err(|e| RunError::Validation(e.to_string()))?;
    let star_wide = clock.time("solve_wider", || StarProduct::build(&wider))?;
    let tabs_wide = clock.time("coefficients", || tables(&star_wide, n, n + 1))?;
    let moved: Vec<u32> = tabs.iter().zip(&tabs_wide).filter(|(a, b)| a != b).map(|(a, _)| a.k).collect();
    report.push(Verdict::new(
        "truncation_stability",
        moved.is_empty(),
        if moved.is_empty() {
            format!("coefficients unchanged at budget {}", wider.budget())
        } else {
            format!("coefficients changed at orders {moved:?}")
        },
    ));

    if cfg.has_section("lagrangian") {
        let d = value(cfg, "verify", "degree", |s| s.parse::<u32>().ok())?.unwrap_or(4);
        let order = value(cfg, "verify", "order", |s| s.parse::<u32>().ok())?.unwrap_or(n);
        let adapted = check_adapted_data(&setup);
        let failed: Vec<String> = adapted
            .conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.label, c.witness.clone().unwrap_or_default()))
            .collect();
        report.push(Verdict::new(
            "adaptedness",
            failed.is_empty(),
            if failed.is_empty() { "conditions i-iv hold".to_string() } else { failed.join("; ") },
        ));
        report.adaptedness = Some(adapted);
        let scan = clock.time("ideal_scan", || verify_ideal_preservation(&star, setup.p_axes(), d, order))?;
        report.push(Verdict::new(
            "ideal_preservation",
            scan.passed(),
            match &scan.witness {
                None => format!("{} pairs, degree <= {d}, orders <= {}", scan.pairs_checked, scan.order),
                Some(w) => w.to_string(),
            },
        ));
        report.ideal_scan = Some(scan);
    }

    if let Some((&k, omega_k)) = setup.omega_series().iter().next_back() {
        if k < n {
            let v = clock.time("class_shift", || class_shift(&setup, &star, k, omega_k))?;
            report.push(v);
        } else {
            report.push(Verdict::new(
                "class_shift",
                true,
                format!("Omega_{k} first acts at lambda^{} beyond order {n}; not checked", k + 1),
            ));
        }
    }
    report.star_coefficients = tabs;
    Ok(())
}

/// Compares against the same data without `Ω_k`: no change below `λ^{k+1}`,
/// a Hochschild cocycle there whose antisymmetric part is `Ω_k(X_f, X_g)`.
fn class_shift(setup: &QuantizationSetup, star: &StarProduct, k: u32, omega_k: &PolyForm) -> Result<Verdict, RunError> {
    let mut series = setup.omega_series().clone();
    series.remove(&k);
    let base_setup = setup
        .with_omega_series(series)
        .map_err(|e| RunError::Validation(e.to_string()))?;
    let base = StarProduct::build(&base_setup)?;
    let dim = setup.dim();
    let max_order = k + 2;
    let hoch = |e: crate::hochschild::HochschildError| RunError::Failure(e.to_string());
    for j in 0..=k + 1 {
        let a = MultiDiffOp::from_bidiff(&extract_bidiff(&base, j, max_order)?, dim);
        let b = MultiDiffOp::from_bidiff(&extract_bidiff(star, j, max_order)?, dim);
        let diff = b.try_sub(&a).map_err(hoch)?;
        if j <= k {
            if let Some((args, v)) = diff.witness() {
                return Ok(Verdict::new("class_shift", false, format!("order {j}: products differ by {v} on {args:?}")));
            }
            continue;
        }
        if let Some((args, v)) = hochschild_b(&diff).witness() {
            return Ok(Verdict::new(
                "class_shift",
                false,
                format!("order {j}: difference is not a cocycle, b = {v} on {args:?}"),
            ));
        }
        let beta = hkr_antisymmetrize(&diff, setup.poisson()).map_err(hoch)?;
        if &beta != omega_k {
            return Ok(Verdict::new(
                "class_shift",
                false,
                format!("order {j}: antisymmetric part is {beta}, expected {omega_k}"),
            ));
        }
        let exact = diff == form_on_hamiltonians(omega_k, setup.poisson());
        return Ok(Verdict::new(
            "class_shift",
            true,
            format!(
                "Omega_{k} first acts at lambda^{j} with antisymmetric part Omega_{k}(X_f, X_g){}",
                if exact { " and no symmetric remainder" } else { " plus a symmetric coboundary" }
            ),
        ));
    }
    unreachable!()
}

fn equiv(
    a: &ConfigFile,
    b: &ConfigFile,
    opts: &RunOptions,
    clock: &mut Clock,
    report: &mut RunReport,
) -> Result<(), RunError> {
    let sa = setup_of(a, opts)?;
    let sb = setup_of(b, opts)?;
    if sa.dim() != sb.dim() || sa.poisson() != sb.poisson() || sa.p_axes() != sb.p_axes() {
        return Err(RunError::Validation(
            "equiv needs two configs on the same chart, form and Lagrangian".into(),
        ));
    }
    report.setup = Some(SetupEcho::of(&sa));
    let star = solve_named(&sa, "fedosov_residual_first", clock, report)?;
    let star_prime = solve_named(&sb, "fedosov_residual_second", clock, report)?;
    let n = sa.lambda_order().min(sb.lambda_order());
    let dim = sa.dim();
    let mut first = None;
    for j in 0..=n {
        let x = MultiDiffOp::from_bidiff(&extract_bidiff(&star, j, n + 1)?, dim);
        let y = MultiDiffOp::from_bidiff(&extract_bidiff(&star_prime, j, n + 1)?, dim);
        if x != y {
            first = Some(j);
            break;
        }
    }
    let Some(k) = first else {
        report.push(Verdict::new("equivalence", true, format!("products agree through order {n}; identity map")));
        return Ok(());
    };
    match clock.time("equivalence", || equivalence_step(&star, &star_prime, k, sa.poisson(), sa.p_axes())) {
        Ok(step) => {
            report.push(Verdict::new(
                "equivalence",
                step.certificate.holds(),
                format!("order {k}: S = {}", step.map),
            ));
            report.equivalence = Some(step);
        }
        Err(AdaptedError::AdaptedInequivalent { order, obstruction }) => {
            report.push(Verdict::new(
                "equivalence",
                false,
                format!("adapted-inequivalent at order {order}: restriction to L is {obstruction}"),
            ));
        }
        Err(e) => report.push(Verdict::new("equivalence", false, format!("order {k}: {e}"))),
    }
    Ok(())
}

fn window(s: &str) -> Option<[Rational; 2]> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    let (lo, hi) = inner.split_once(',')?;
    Some([rational(lo)?, rational(hi)?])
}

fn spectrum(cfg: &ConfigFile, clock: &mut Clock, report: &mut RunReport) -> Result<(), RunError> {
    let action = required(cfg, "bs", "action", |s| ActionFamily::parse(s).ok())?;
    let mu = required(cfg, "bs", "maslov", |s| s.parse::<i64>().ok())?;
    let kappa = value(cfg, "bs", "kappa", |s| parse_scalar(s).ok())?.unwrap_or_else(GaussRational::zero);
    let lambda = required(cfg, "bs", "lambda", rational)?;
    let win = required(cfg, "bs", "window", window)?;
    let mut problem = BsProblem::new(action, mu, kappa, lambda).map_err(|e| RunError::Validation(e.to_string()))?;
    if let Some(w) = value(cfg, "bs", "weight", rational)? {
        problem = problem.with_maslov_weight(w);
    }
    let values = clock
        .time("spectrum", || bs_spectrum(&problem, &win[0], &win[1]))
        .map_err(|e| RunError::Validation(e.to_string()))?;
    let mut bad = Vec::new();
    for v in &values {
        let c = problem.condition(&v.energy).map_err(|e| RunError::Failure(e.to_string()))?;
        if c != Rational::from_integer(v.n) {
            bad.push(format!("E = {} gives {c}", v.energy));
        }
    }
    report.push(Verdict::new(
        "integrality",
        bad.is_empty(),
        if bad.is_empty() { format!("{} values satisfy the condition exactly", values.len()) } else { bad.join("; ") },
    ));
    report.spectrum = Some(SpectrumReport {
        problem,
        window: win,
        values,
    });
    Ok(())
}

fn maslov(cfg: &ConfigFile, clock: &mut Clock, report: &mut RunReport) -> Result<(), RunError> {
    let radius = value(cfg, "maslov", "circle", rational)?;
    let turns = value(cfg, "maslov", "turns", |s| s.parse::<i64>().ok())?.unwrap_or(1);
    let gauge = value(cfg, "maslov", "gauge", |s| {
        s.split(',').map(|k| k.trim().parse::<i64>().ok()).collect::<Option<Vec<_>>>()
    })?;
    if radius.is_none() && gauge.is_none() {
        return Err(RunError::Parse("[maslov] needs `circle = <radius>` or `gauge = k1, k2, ...`".into()));
    }
    let mut out = MaslovReport {
        action: None,
        winding: None,
        gauge: None,
    };
    if let Some(r) = radius {
        if r.is_zero() || r.is_negative() || turns == 0 {
            return Err(RunError::Validation("circle needs a positive radius and nonzero turns".into()));
        }
        let seg = Segment::circle(&[PiPoly::zero(), PiPoly::zero()], (0, 1), &PiPoly::rational(r), turns);
        let path = LoopPath::new(2, vec![seg], vec![]).map_err(|e| RunError::Validation(e.to_string()))?;
        let mut theta = PolyForm::zero(2, 1);
        theta.add_component(vec![0], &crate::algebra::ChartPoly::var(2, 1));
        out.action = Some(liouville_integral(&path, &theta).map_err(|e| RunError::Failure(e.to_string()))?);
        let frame = tangent_frame(&path).map_err(|e| RunError::Failure(e.to_string()))?;
        let w = clock.time("winding", || maslov_winding(frame));
        match w {
            Ok(w) => {
                report.push(Verdict::new(
                    "winding",
                    w.residual < RESIDUAL_LIMIT,
                    format!("index {} with residual {:.2e}", w.index, w.residual),
                ));
                out.winding = Some(w);
            }
            Err(e) => report.push(Verdict::new("winding", false, e.to_string())),
        }
    }
    if let Some(ks) = gauge {
        let g = clock.time("gauge", || {
            maslov_from_gauge(|t| {
                nalgebra::DMatrix::from_fn(ks.len(), ks.len(), |i, j| {
                    if i == j {
                        num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ks[i] as f64 * t)
                    } else {
                        num_complex::Complex64::new(0.0, 0.0)
                    }
                })
            })
        });
        match g {
            Ok(g) => {
                report.push(Verdict::new(
                    "gauge",
                    g.residual < RESIDUAL_LIMIT,
                    format!("trace integral {:.6} rounds to {}, maslov {}", g.trace_integral, g.rounded, g.maslov),
                ));
                out.gauge = Some(g);
            }
            Err(e) => report.push(Verdict::new("gauge", false, e.to_string())),
        }
    }
    if let (Some(w), Some(g)) = (&out.winding, &out.gauge) {
        report.push(Verdict::new(
            "gauge_matches_winding",
            w.index == g.maslov,
            format!("winding {} vs gauge {}", w.index, g.maslov),
        ));
    }
    report.maslov = Some(out);
    Ok(())
}
