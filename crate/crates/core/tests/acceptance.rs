//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use starbench::adapted::{equivalence_step, formal_exp_i, holonomy_twist, verify_ideal_preservation, QuotientModule};
use starbench::algebra::{parse_chart_poly, ChartPoly, GaussRational, LambdaPoly, PolyForm, Rational};
use starbench::bohr_sommerfeld::{
    bs_spectrum, maslov_from_gauge, maslov_winding, tangent_frame, ActionFamily, BsProblem, LoopPath, PiPoly, Segment,
};
use starbench::fedosov::{extract_bidiff, FormalProduct, StarProduct};
use starbench::geometry::{check_adapted_data, parse_config, validate_setup, QuantizationSetup, RawSetup};
use starbench::hochschild::{
    associativity_residual, form_on_hamiltonians, gerstenhaber_bracket, hkr_antisymmetrize, hochschild_b,
    star_cochains, MultiDiffOp,
};
use starbench::weyl::OrderingMode;

/// Numeric tolerance on the Maslov winding residual.
const WINDING_RESIDUAL: f64 = 0.1;
/// Every other comparison in this file is exact equality over Q(i).
const ORDER: u32 = 3;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(raw: RawSetup) -> (QuantizationSetup, StarProduct) {
    let setup = validate_setup(raw).unwrap();
    let star = StarProduct::build(&setup).unwrap();
    (setup, star)
}

fn shipped_configs() -> Vec<(String, QuantizationSetup)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "conf"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let cfg = parse_config(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, validate_setup(cfg.setup).unwrap())
        })
        .collect()
}

fn two_form(dim: usize, i: usize, j: usize, c: ChartPoly) -> PolyForm {
    let mut f = PolyForm::zero(dim, 2);
    f.add_component(vec![i, j], &c);
    f
}

fn c1_moyal() -> Check {
    let (mut pairs, mut cubic) = (0, 0);
    for n in [1usize, 2] {
        let (_, star) = build(RawSetup::flat(n, OrderingMode::Weyl, ORDER));
        let mut r = rng(100 + n as u64);
        for _ in 0..100 {
            let f = random_poly(&mut r, 2 * n, 3, 6);
            let g = random_poly(&mut r, 2 * n, 3, 6);
            let got = star.product(&f, &g).unwrap();
            ensure(got == moyal(&f, &g, n, ORDER), || format!("dim {}: f = {f}, g = {g}", 2 * n))?;
            pairs += 1;
            cubic += usize::from(!got.coeff(ORDER).is_zero());
        }
    }
    Ok(format!("{pairs} pairs (dim 2 and 4), degree <= 3, exact through lambda^3 ({cubic} with nonzero lambda^3 term)"))
}

fn c2_associativity() -> Check {
    let setups = [
        ("flat weyl", RawSetup::flat(1, OrderingMode::Weyl, ORDER)),
        ("flat standard", RawSetup::flat(1, OrderingMode::Standard, ORDER)),
        ("curved weyl", curved_raw(201, 1, OrderingMode::Weyl, ORDER, 2)),
        ("curved standard", curved_raw(202, 1, OrderingMode::Standard, ORDER, 2)),
    ];
    for (name, raw) in setups.clone() {
        let (setup, star) = build(raw);
        let d = setup.dim();
        let mut r = rng(210);
        for _ in 0..50 {
            let f = random_poly(&mut r, d, 3, 2);
            let g = random_poly(&mut r, d, 3, 2);
            let h = random_poly(&mut r, d, 3, 2);
            let lift = |p: &ChartPoly| LambdaPoly::from_poly(p.clone(), ORDER);
            let lhs = star.product_series(&star.product(&f, &g).unwrap(), &lift(&h)).unwrap();
            let rhs = star.product_series(&lift(&f), &star.product(&g, &h).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("{name}: f = {f}, g = {g}, h = {h}"))?;
        }
    }
    Ok(format!("{} setups x 50 triples, exact mod lambda^4", setups.len()))
}

fn c3_residual() -> Check {
    let configs = shipped_configs();
    for (name, setup) in &configs {
        let star = StarProduct::build(setup).unwrap();
        let res = star.solution().residual();
        ensure(res.is_zero(), || format!("{name}: residual {res}"))?;
        ensure(star.solution().normalization_defect().is_zero(), || format!("{name}: normalization"))?;
    }
    Ok(format!("{} shipped configs, residual exactly zero", configs.len()))
}

fn c4_truncation() -> Check {
    let configs = shipped_configs();
    for (name, setup) in &configs {
        let n = setup.lambda_order();
        let wider = setup.with_truncation(n, Some(setup.budget() + 2)).unwrap();
        let a = StarProduct::build(setup).unwrap();
        let b = StarProduct::build(&wider).unwrap();
        for k in 0..=n {
            let ta = extract_bidiff(&a, k, n + 1).unwrap();
            let tb = extract_bidiff(&b, k, n + 1).unwrap();
            ensure(ta == tb, || format!("{name}: star_{k} moved at budget {}", wider.budget()))?;
        }
    }
    Ok(format!("{} shipped configs, star_k for k <= N unchanged at D + 2", configs.len()))
}

fn with_s(text: &str) -> RawSetup {
    let cfg = format!("[chart]\ndim = 2\n[ordering]\nstandard\n[truncation]\nlambda_order = 3\n[s]\n{text}\n");
    parse_config(&cfg).unwrap().setup
}

fn c5_adaptedness() -> Check {
    let mut adapted = vec![
        adapted_curved_raw(5, 1, ORDER, 1),
        adapted_curved_raw(6, 1, ORDER, 1),
        with_s("xi1^2*xi2 + xi2^4"),
    ];
    let mut raw = RawSetup::flat(2, OrderingMode::Standard, ORDER);
    raw.omega_series.insert(1, two_form(4, 0, 2, ChartPoly::one(4)));
    adapted.push(raw);
    for (_, setup) in shipped_configs() {
        if check_adapted_data(&setup).all_pass() && setup.dim() == 2 {
            adapted.push(setup.raw().clone());
        }
    }
    let forward = adapted.len();
    for raw in adapted {
        let (setup, star) = build(raw);
        ensure(check_adapted_data(&setup).all_pass(), || "construction data not all-pass".into())?;
        let v = verify_ideal_preservation(&star, setup.p_axes(), 4, 3).unwrap();
        ensure(v.passed(), || format!("scan failed: {:?}", v.witness))?;
    }

    let mut non_geodesic = RawSetup::flat(1, OrderingMode::Standard, ORDER);
    non_geodesic.christoffel.insert((1, 0, 0), parse_chart_poly("x1", 2).unwrap());
    let mut tangential = RawSetup::flat(2, OrderingMode::Standard, ORDER);
    tangential.omega_series.insert(1, two_form(4, 0, 1, ChartPoly::one(4)));
    let mutations = [
        ("i", non_geodesic),
        ("ii", tangential),
        ("iii", with_s("xi1^3")),
        ("iv", RawSetup::flat(1, OrderingMode::Weyl, ORDER)),
    ];
    let mut witnesses = Vec::new();
    for (label, raw) in mutations {
        let (setup, star) = build(raw);
        let failed: Vec<&str> = check_adapted_data(&setup)
            .conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.label)
            .collect();
        ensure(failed == [label], || format!("mutation {label}: failing conditions {failed:?}"))?;
        let v = verify_ideal_preservation(&star, setup.p_axes(), 4, 3).unwrap();
        let w = v.witness.ok_or_else(|| format!("mutation {label}: no counterexample"))?;
        let direct = star.product(&w.f, &w.g).unwrap().coeff(w.order).restrict(setup.p_axes()).unwrap();
        ensure(direct == w.value && !direct.is_zero(), || format!("mutation {label}: witness does not replay"))?;
        witnesses.push(format!("{label}: {}*{} at lambda^{}", w.f, w.g, w.order));
    }
    Ok(format!("{forward} all-pass setups scan clean at d = 4, N = 3; mutations [{}]", witnesses.join("; ")))
}

/// Products for `Ω` and `Ω + λ^k Ω_k` on a curved Weyl base.
fn omega_pair(k: u32, omega_k: &PolyForm, mode: OrderingMode) -> (QuantizationSetup, StarProduct, StarProduct) {
    let base = curved_raw(21, 1, mode, ORDER, 1);
    let mut shifted = base.clone();
    shifted.omega_series.insert(k, omega_k.clone());
    let (setup, a) = build(base);
    let (_, b) = build(shifted);
    (setup, a, b)
}

fn c6_class_shift() -> Check {
    let omega_k = two_form(2, 0, 1, parse_chart_poly("1 + x1*x2 - 2*x2^2", 2).unwrap());
    for k in [1u32, 2] {
        let (setup, a, b) = omega_pair(k, &omega_k, OrderingMode::Weyl);
        for j in 0..=ORDER {
            let ta = MultiDiffOp::from_bidiff(&extract_bidiff(&a, j, ORDER + 1).unwrap(), 2);
            let tb = MultiDiffOp::from_bidiff(&extract_bidiff(&b, j, ORDER + 1).unwrap(), 2);
            let diff = tb.try_sub(&ta).unwrap();
            if j <= k {
                ensure(diff.is_zero(), || format!("k = {k}: products differ at lambda^{j}"))?;
            } else if j == k + 1 {
                let want = form_on_hamiltonians(&omega_k, setup.poisson());
                ensure(diff == want, || format!("k = {k}: lambda^{j} difference is {diff}"))?;
            }
        }
    }
    Ok("k = 1, 2 on a curved Weyl base: equal below lambda^{k+1}, difference there is exactly Omega_k(X_f, X_g)".into())
}

fn c7_equivalence_holonomy() -> Check {
    let omega_k = two_form(2, 0, 1, parse_chart_poly("1 + x1*x2 - 2*x2^2", 2).unwrap());
    for k in [1u32, 2] {
        for mode in [OrderingMode::Standard, OrderingMode::Weyl] {
            let (setup, a, b) = omega_pair(k, &omega_k, mode);
            let step = equivalence_step(&a, &b, k + 1, setup.poisson(), setup.p_axes()).map_err(|e| e.to_string())?;
            ensure(step.split.beta == omega_k, || format!("k = {k}: beta = {}", step.split.beta))?;
            ensure(step.split.alpha.d() == omega_k, || format!("k = {k}: d alpha != Omega_k"))?;
            ensure(step.certificate.holds(), || format!("k = {k} {mode:?}: {:?}", step.certificate))?;
        }
    }
    // angle chart (phi, y), basis loop phi: 0 -> 2 pi
    let two_pi = PiPoly::pi().scale(&GaussRational::from_int(2));
    let h = PiPoly::one();
    let basis = LoopPath::new(2, vec![Segment::line(&[PiPoly::zero(), h.clone()], &[two_pi.clone(), h])], vec![0]).unwrap();
    let mut r = rng(700);
    for _ in 0..10 {
        let c = GaussRational::from_frac(r.gen_range(-9..=9), r.gen_range(1..=7));
        let mut alpha = PolyForm::zero(2, 1);
        alpha.add_component(vec![0], &ChartPoly::constant(2, c.clone()));
        let tw = holonomy_twist(&basis, &alpha, 5).map_err(|e| e.to_string())?;
        // e^{2 pi i lambda c} = sum (2 pi i c)^m / m! lambda^m
        let mut want = Vec::new();
        let mut term = PiPoly::one();
        for m in 0..=5i64 {
            want.push(term.clone());
            term = (&term * &two_pi.scale(&(&c * &GaussRational::i()))).scale(&GaussRational::from_frac(1, m + 1));
        }
        ensure(tw.coefficients == want, || format!("c = {c}: {:?}", tw.coefficients))?;
        ensure(tw.coefficients == formal_exp_i(&two_pi.scale(&c), 5), || "formal_exp_i disagrees".into())?;
    }
    Ok("Omega pairs k = 1, 2 (standard and Weyl): alpha with d alpha = Omega_k, certificate holds; 10 holonomies e^{2 pi i lambda c} exact to lambda^5".into())
}

fn c8_hochschild() -> Check {
    let cases = 30;
    let mut r = rng(800);
    for i in 0..cases {
        let dim = if i % 2 == 0 { 2 } else { 4 };
        let c = random_cochain(&mut r, dim, 1 + i % 3, 2, 2, 4);
        ensure(hochschild_b(&hochschild_b(&c)).is_zero(), || format!("b^2 != 0 on case {i}"))?;
    }
    for i in 0..cases {
        let ks: Vec<usize> = (0..3).map(|_| r.gen_range(1..=2)).collect();
        let a = random_cochain(&mut r, 2, ks[0], 2, 1, 2);
        let b = random_cochain(&mut r, 2, ks[1], 2, 1, 2);
        let c = random_cochain(&mut r, 2, ks[2], 2, 1, 2);
        let br = |x: &MultiDiffOp, y: &MultiDiffOp| gerstenhaber_bracket(x, y).unwrap();
        let lhs = br(&a, &br(&b, &c));
        let sign = GaussRational::from_int(if (ks[0] - 1) * (ks[1] - 1) % 2 == 0 { 1 } else { -1 });
        let rhs = br(&br(&a, &b), &c).try_add_scaled(&br(&b, &br(&a, &c)), &sign).unwrap();
        ensure(lhs == rhs, || format!("graded Jacobi fails on case {i}"))?;
    }
    for i in 0..cases {
        let dim = if i % 2 == 0 { 2 } else { 4 };
        let c = random_cochain(&mut r, dim, 1, 3, 2, 4);
        let beta = hkr_antisymmetrize(&hochschild_b(&c), &darboux_poisson(dim / 2)).unwrap();
        ensure(beta.is_zero(), || format!("hkr(b c) = {beta} on case {i}"))?;
    }
    let mut products = 0;
    for (name, raw) in [
        ("flat weyl d2", RawSetup::flat(1, OrderingMode::Weyl, ORDER)),
        ("flat standard d4", RawSetup::flat(2, OrderingMode::Standard, ORDER)),
        ("curved weyl d2", curved_raw(801, 1, OrderingMode::Weyl, ORDER, 2)),
        ("curved standard d2", curved_raw(802, 1, OrderingMode::Standard, ORDER, 2)),
        ("curved adapted d2", adapted_curved_raw(803, 1, ORDER, 1)),
    ] {
        let (_, star) = build(raw);
        let stars = star_cochains(&star, ORDER, ORDER).unwrap();
        for n in 1..=ORDER as usize {
            let res = associativity_residual(&stars, n).unwrap();
            ensure(res.is_zero(), || format!("{name}: residual at order {n}: {res}"))?;
        }
        products += 1;
    }
    Ok(format!("{cases} cases each for b^2, Jacobi, hkr o b; residual zero for {products} engine products at n <= 3"))
}

fn c9_representation() -> Check {
    let (name, setup) = shipped_configs()
        .into_iter()
        .find(|(n, _)| n == "curved_adapted_d2.conf")
        .ok_or("curved_adapted_d2.conf missing")?;
    let star = StarProduct::build(&setup).unwrap();
    let m = QuotientModule::new(&star, setup.p_axes(), 3, ORDER).map_err(|e| e.to_string())?;
    let axes = setup.p_axes();
    let lift = |p: &ChartPoly| LambdaPoly::from_poly(p.clone(), ORDER);
    let mut r = rng(900);
    for _ in 0..50 {
        let f = random_poly(&mut r, 2, 2, 3);
        let g = random_poly(&mut r, 2, 2, 3);
        let phi = random_poly(&mut r, 2, 2, 3).restrict(axes).unwrap();
        let left = m.act(&star.product(&f, &g).unwrap(), &lift(&phi)).unwrap();
        let right = m.act(&lift(&f), &m.act_poly(&g, &phi).unwrap()).unwrap();
        ensure(left == right, || format!("module law fails: f = {f}, g = {g}, phi = {phi}"))?;
        let psi = random_poly(&mut r, 2, 3, 3).restrict(axes).unwrap();
        ensure(m.act_poly(&psi, &phi).unwrap() == lift(&(&psi * &phi)), || format!("psi.phi != psi phi for {psi}"))?;
    }
    Ok(format!("{name}: 50 triples satisfy the module law mod lambda^4; base functions act by multiplication"))
}

fn c10_bohr_sommerfeld() -> Check {
    let lambda = Rational::new(1, 10);
    let problem = BsProblem::new(ActionFamily::parse("2*E*pi").unwrap(), 2, GaussRational::zero(), lambda.clone())
        .map_err(|e| e.to_string())?;
    let values = bs_spectrum(&problem, &Rational::zero(), &Rational::new(41, 20)).map_err(|e| e.to_string())?;
    let want: Vec<Rational> = (0..=20).map(|n| &lambda * &Rational::new(2 * n + 1, 2)).collect();
    let got: Vec<Rational> = values.iter().map(|v| v.energy.clone()).collect();
    ensure(got == want, || format!("spectrum {got:?}"))?;

    let circle = Segment::circle(&[PiPoly::zero(), PiPoly::zero()], (0, 1), &PiPoly::one(), 1);
    let path = LoopPath::new(2, vec![circle], vec![]).unwrap();
    let w = maslov_winding(tangent_frame(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(w.index == 2 && w.residual < WINDING_RESIDUAL, || format!("winding {} residual {}", w.index, w.residual))?;
    let g = maslov_from_gauge(|t| {
        nalgebra::DMatrix::from_element(1, 1, num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t))
    })
    .map_err(|e| e.to_string())?;
    ensure(g.maslov == w.index, || format!("gauge {} vs winding {}", g.maslov, w.index))?;
    Ok(format!(
        "E_n = (n + 1/2)/10 exact for n <= 20; winding 2 (residual {:.1e} < {WINDING_RESIDUAL}); gauge Maslov {}",
        w.residual, g.maslov
    ))
}

fn c11_naturalness() -> Check {
    let configs = shipped_configs();
    for (name, setup) in &configs {
        let star = StarProduct::build(setup).unwrap();
        for k in 0..=ORDER.min(setup.lambda_order()) {
            let t = extract_bidiff(&star, k, ORDER + 1).unwrap();
            ensure(t.is_natural(), || format!("{name}: star_{k} violations {:?}", t.naturalness_violations()))?;
        }
    }
    Ok(format!("{} shipped configs, star_k of order <= k in each slot for k <= 3 (probed to order 4)", configs.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "moyal oracle", budget: Some(Duration::from_secs(60)), check: c1_moyal },
        Criterion { id: 2, name: "associativity", budget: Some(Duration::from_secs(300)), check: c2_associativity },
        Criterion { id: 3, name: "fedosov residual", budget: None, check: c3_residual },
        Criterion { id: 4, name: "truncation stability", budget: None, check: c4_truncation },
        Criterion { id: 5, name: "adaptedness", budget: None, check: c5_adaptedness },
        Criterion { id: 6, name: "class shift", budget: None, check: c6_class_shift },
        Criterion { id: 7, name: "equivalence and holonomy", budget: None, check: c7_equivalence_holonomy },
        Criterion { id: 8, name: "hochschild suite", budget: None, check: c8_hochschild },
        Criterion { id: 9, name: "representation", budget: None, check: c9_representation },
        Criterion { id: 10, name: "bohr-sommerfeld", budget: Some(Duration::from_secs(10)), check: c10_bohr_sommerfeld },
        Criterion { id: 11, name: "naturalness", budget: None, check: c11_naturalness },
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {:.1}s, target {}s", elapsed.as_secs_f64(), b.as_secs())),
            (o, _) => o,
        };
        let (mark, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{mark} [{:>2}] {}: {detail} ({:.2}s)", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
