mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use common::*;
use starbench::algebra::{parse_chart_poly, ChartPoly, GaussRational, PolyForm, Rational};
use starbench::bohr_sommerfeld::{
    bs_spectrum, liouville_integral, maslov_from_gauge, maslov_winding, tangent_frame, ActionFamily, BsError,
    BsProblem, LoopPath, PiPoly, Segment,
};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn pr(n: i64, d: i64) -> PiPoly {
    PiPoly::rational(rat(n, d))
}

fn circle(r: Rational, turns: i64) -> LoopPath {
    let seg = Segment::circle(&[PiPoly::zero(), PiPoly::zero()], (0, 1), &PiPoly::rational(r), turns);
    LoopPath::new(2, vec![seg], vec![]).unwrap()
}

/// `θ = p dq` on `(q, p)`.
fn p_dq() -> PolyForm {
    let mut t = PolyForm::zero(2, 1);
    t.add_component(vec![0], &ChartPoly::var(2, 1));
    t
}

fn exact(s: &ChartPoly) -> PolyForm {
    PolyForm::function(s.clone()).d()
}

#[test]
fn circle_action_is_minus_pi_r_squared() {
    let v = liouville_integral(&circle(rat(3, 1), 1), &p_dq()).unwrap();
    assert_eq!(v, PiPoly::term(GaussRational::from_int(-9), 1));
    assert_eq!(v.to_string(), "-9*pi");
    let twice = liouville_integral(&circle(rat(1, 2), 2), &p_dq()).unwrap();
    assert_eq!(twice.to_string(), "-1/2*pi");
}

#[test]
fn torus_angle_loop() {
    // chart (φ, I), θ = I dφ, loop φ: 0 → 2π at I = 5/3
    let seg = Segment::line(&[PiPoly::zero(), pr(5, 3)], &[PiPoly::pi().scale(&GaussRational::from_int(2)), pr(5, 3)]);
    let path = LoopPath::new(2, vec![seg.clone()], vec![0]).unwrap();
    assert!(path.is_closed());
    assert!(!LoopPath::new(2, vec![seg], vec![]).unwrap().is_closed());
    let mut theta = PolyForm::zero(2, 1);
    theta.add_component(vec![0], &ChartPoly::var(2, 1));
    let v = liouville_integral(&path, &theta).unwrap();
    assert_eq!(v.to_string(), "10/3*pi");
}

#[test]
fn polygon_action_is_signed_area() {
    // unit square counterclockwise in (q, p): ∮ p dq = −1
    let pts: Vec<Vec<PiPoly>> = [(0, 0), (1, 0), (1, 1), (0, 1)]
        .iter()
        .map(|&(a, b)| vec![pr(a, 1), pr(b, 1)])
        .collect();
    let sq = LoopPath::polygon(&pts).unwrap();
    assert!(sq.is_closed());
    assert_eq!(liouville_integral(&sq, &p_dq()).unwrap(), pr(-1, 1));
    assert_eq!(liouville_integral(&sq.reversed(), &p_dq()).unwrap(), pr(1, 1));
}

#[test]
fn reversal_concatenation_and_reparametrization() {
    let c = circle(rat(2, 1), 1);
    let a = liouville_integral(&c, &p_dq()).unwrap();
    assert_eq!(liouville_integral(&c.reversed(), &p_dq()).unwrap(), -&a);
    let cc = c.concat(&c).unwrap();
    assert_eq!(liouville_integral(&cc, &p_dq()).unwrap(), &a + &a);
    assert_eq!(liouville_integral(&c.concat(&c.reversed()).unwrap(), &p_dq()).unwrap(), PiPoly::zero());

    let pts: Vec<Vec<PiPoly>> = [(0, 0), (2, 1), (-1, 3)].iter().map(|&(a, b)| vec![pr(a, 1), pr(b, 1)]).collect();
    let tri = LoopPath::polygon(&pts).unwrap();
    let base = liouville_integral(&tri, &p_dq()).unwrap();
    for s in [
        vec![GaussRational::zero(), GaussRational::zero(), GaussRational::one()],
        vec![GaussRational::zero(), GaussRational::zero(), GaussRational::from_int(3), GaussRational::from_int(-2)],
        vec![GaussRational::zero(), GaussRational::from_frac(1, 2), GaussRational::zero(), GaussRational::from_frac(1, 2)],
    ] {
        let re = tri.reparametrized(&s).unwrap();
        assert_eq!(liouville_integral(&re, &p_dq()).unwrap(), base);
    }
    assert!(matches!(
        tri.reparametrized(&[GaussRational::zero(), GaussRational::from_int(2)]),
        Err(BsError::BadReparametrization)
    ));
}

#[test]
fn discontinuous_segments_are_rejected() {
    let a = Segment::line(&[pr(0, 1), pr(0, 1)], &[pr(1, 1), pr(0, 1)]);
    let b = Segment::line(&[pr(2, 1), pr(0, 1)], &[pr(0, 1), pr(0, 1)]);
    assert_eq!(LoopPath::new(2, vec![a, b], vec![]).unwrap_err(), BsError::Discontinuous { segment: 1 });
    let two_form = PolyForm::zero(2, 2);
    assert!(matches!(
        liouville_integral(&circle(rat(1, 1), 1), &two_form),
        Err(BsError::NotAOneForm { degree: 2 })
    ));
}

#[test]
fn oscillator_action_matches_family() {
    // H = (p² + q²)/2 = E on the circle of radius r = sqrt(2E)
    let fam = ActionFamily::parse("2*pi*E").unwrap();
    for r in [1, 2, 5] {
        let e = rat(r * r, 2);
        let v = liouville_integral(&circle(rat(r, 1), 1), &p_dq()).unwrap();
        assert_eq!(-&v, fam.eval(&e));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn circle_area_formula(n in 1i64..30, d in 1i64..12) {
        let r = rat(n, d);
        let v = liouville_integral(&circle(r.clone(), 1), &p_dq()).unwrap();
        prop_assert_eq!(v, PiPoly::term(GaussRational::real(-(&r * &r)), 1));
    }

    #[test]
    fn exact_forms_integrate_to_zero(seed in 0u64..1000) {
        let mut g = rng(seed);
        let s = random_poly(&mut g, 2, 4, 4);
        let theta = exact(&s);
        prop_assert!(liouville_integral(&circle(rat(3, 2), 1), &theta).unwrap().is_zero());
        let pts: Vec<Vec<PiPoly>> = (0..4)
            .map(|_| vec![PiPoly::constant(small_scalar(&mut g)), PiPoly::constant(small_scalar(&mut g))])
            .collect();
        let poly = LoopPath::polygon(&pts).unwrap();
        prop_assert!(liouville_integral(&poly, &theta).unwrap().is_zero());
    }
}

fn rotating_line(angle: impl Fn(f64) -> f64) -> impl Fn(f64) -> DMatrix<f64> {
    move |t| {
        let a = angle(t);
        DMatrix::from_column_slice(2, 1, &[a.cos(), a.sin()])
    }
}

#[test]
fn circle_has_maslov_index_two() {
    let c = circle(rat(1, 1), 1);
    let w = maslov_winding(tangent_frame(&c).unwrap()).unwrap();
    assert_eq!(w.index, 2);
    assert!(w.residual < 1e-6);
    let back = c.reversed();
    assert_eq!(maslov_winding(tangent_frame(&back).unwrap()).unwrap().index, -2);
    let twice = circle(rat(1, 3), 2);
    assert_eq!(maslov_winding(tangent_frame(&twice).unwrap()).unwrap().index, 4);
}

#[test]
fn constant_frame_has_index_zero() {
    let w = maslov_winding(|_| DMatrix::from_column_slice(2, 1, &[1.0, 2.0])).unwrap();
    assert_eq!(w.index, 0);
}

#[test]
fn winding_is_invariant_under_reparametrization() {
    let reps: [fn(f64) -> f64; 3] = [
        |t| t * t,
        |t| t + 0.1 * (2.0 * PI * t).sin() / (2.0 * PI),
        |t| 0.5 * (1.0 - (PI * t).cos()),
    ];
    for s in reps {
        let w = maslov_winding(rotating_line(move |t| PI / 2.0 + 2.0 * PI * s(t))).unwrap();
        assert_eq!(w.index, 2);
    }
}

#[test]
fn winding_adds_under_concatenation_and_products() {
    // once around, then twice around, as one path
    let joined = rotating_line(|t| if t < 0.5 { 4.0 * PI * t } else { 2.0 * PI + 8.0 * PI * (t - 0.5) });
    assert_eq!(maslov_winding(joined).unwrap().index, 2 + 4);
    // product Lagrangian in dimension 4
    let frame = |t: f64| {
        let (a, b) = (2.0 * PI * t, -6.0 * PI * t);
        let mut m = DMatrix::zeros(4, 2);
        m[(0, 0)] = a.cos();
        m[(2, 0)] = a.sin();
        m[(1, 1)] = b.cos();
        m[(3, 1)] = b.sin();
        m
    };
    assert_eq!(maslov_winding(frame).unwrap().index, 2 - 6);
}

#[test]
fn winding_guards() {
    assert!(matches!(
        maslov_winding(|_| DMatrix::zeros(2, 1)),
        Err(BsError::SingularFrame { .. })
    ));
    // not closed: 0.6 turns of det²
    assert!(matches!(
        maslov_winding(rotating_line(|t| 0.6 * PI * t)),
        Err(BsError::ResidualTooLarge { .. })
    ));
    let open = LoopPath::new(2, vec![Segment::line(&[pr(0, 1), pr(0, 1)], &[pr(1, 1), pr(0, 1)])], vec![]).unwrap();
    assert!(matches!(tangent_frame(&open).err(), Some(BsError::OpenPath)));
}

fn phase(k: f64) -> impl Fn(f64) -> Complex64 {
    move |t| Complex64::from_polar(1.0, 2.0 * PI * k * t)
}

#[test]
fn gauge_trace_integrals() {
    let one = phase(1.0);
    let g = maslov_from_gauge(|t| DMatrix::from_element(1, 1, one(t))).unwrap();
    assert_eq!(g.rounded, -1);
    assert_eq!(g.maslov, 2);
    assert!(g.residual < 1e-6);
    let c = maslov_from_gauge(|_| DMatrix::from_element(1, 1, Complex64::new(0.0, 2.0))).unwrap();
    assert_eq!(c.rounded, 0);
    let (p1, p2) = (phase(1.0), phase(2.0));
    let block = maslov_from_gauge(|t| {
        let mut m = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        m[(0, 0)] = p1(t);
        m[(1, 1)] = p2(t);
        m
    })
    .unwrap();
    assert_eq!(block.rounded, -3);
    // the gauge form agrees with the det² winding of the same unitary frame
    let w = maslov_winding(rotating_line(|t| 2.0 * PI * t)).unwrap();
    assert_eq!(w.index, g.maslov);
}

fn oscillator(lambda: Rational) -> BsProblem {
    BsProblem::new(ActionFamily::parse("2*pi*E").unwrap(), 2, GaussRational::zero(), lambda).unwrap()
}

#[test]
fn oscillator_spectrum_is_exact() {
    let lambda = rat(1, 10);
    let spec = bs_spectrum(&oscillator(lambda.clone()), &rat(0, 1), &rat(41, 20)).unwrap();
    assert_eq!(spec.len(), 21);
    for (n, v) in spec.iter().enumerate() {
        assert_eq!(v.n, n as i64);
        assert_eq!(v.energy, &lambda * &(&Rational::from_integer(n as i64) + &rat(1, 2)));
    }
    assert_eq!(spec[0].energy.to_string(), "1/20");
}

#[test]
fn integrality_and_shifts() {
    let lambda = rat(1, 7);
    let fam = ActionFamily::parse("2*pi*E").unwrap();
    let plain = BsProblem::new(fam.clone(), 0, GaussRational::zero(), lambda.clone()).unwrap();
    let spec = bs_spectrum(&plain, &rat(0, 1), &rat(1, 1)).unwrap();
    let want: Vec<Rational> = (0..=7).map(|n| &lambda * &Rational::from_integer(n)).collect();
    assert_eq!(spec.iter().map(|v| v.energy.clone()).collect::<Vec<_>>(), want);
    // κ = 1/2 cancels the Maslov shift of the oscillator
    let shifted = BsProblem::new(fam, 2, GaussRational::from_frac(1, 2), lambda.clone()).unwrap();
    let spec = bs_spectrum(&shifted, &rat(0, 1), &rat(1, 1)).unwrap();
    assert_eq!(spec.iter().map(|v| v.energy.clone()).collect::<Vec<_>>(), want);
}

#[test]
fn unsupported_families_are_rejected() {
    let l = rat(1, 2);
    let flat = BsProblem::new(ActionFamily::parse("pi").unwrap(), 0, GaussRational::zero(), l.clone()).unwrap();
    assert_eq!(bs_spectrum(&flat, &rat(0, 1), &rat(1, 1)).unwrap_err(), BsError::NonMonotone);
    let quad = BsProblem::new(ActionFamily::parse("pi*E^2").unwrap(), 0, GaussRational::zero(), l.clone()).unwrap();
    assert!(matches!(bs_spectrum(&quad, &rat(0, 1), &rat(1, 1)), Err(BsError::Unsupported(_))));
    assert!(BsProblem::new(ActionFamily::parse("2*pi*E").unwrap(), 0, GaussRational::i(), l).is_err());
    assert!(ActionFamily::parse("2*pi*F").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn spectral_values_satisfy_the_condition(
        ln in 1i64..20, ld in 1i64..20, mu in -4i64..5, kn in -3i64..4, slope in prop::sample::select(vec![-3i64, -1, 1, 2, 5]),
        intercept in -5i64..5,
    ) {
        let fam = ActionFamily::parse(&format!("({slope})*pi*E + ({intercept})*pi")).unwrap();
        let p = BsProblem::new(fam, mu, GaussRational::from_frac(kn, 3), rat(ln, ld)).unwrap();
        let spec = bs_spectrum(&p, &rat(-2, 1), &rat(3, 1)).unwrap();
        for w in spec.windows(2) {
            prop_assert!(w[0].energy < w[1].energy);
        }
        for v in &spec {
            let c = p.condition(&v.energy).unwrap();
            prop_assert!(c.is_integer());
            prop_assert_eq!(c, Rational::from_integer(v.n));
            prop_assert!(v.energy >= rat(-2, 1) && v.energy <= rat(3, 1));
        }
    }
}

#[test]
fn parse_roundtrip_of_action() {
    let fam = ActionFamily::parse("pi*(E - 1/2)").unwrap();
    assert_eq!(fam.eval(&rat(3, 2)), PiPoly::pi());
    assert_eq!(fam.to_string(), "-1/2*pi + E*pi");
}

#[test]
fn general_trigonometric_segments() {
    // ellipse q = 2cos, p = 3sin from Fourier data; ∮ p dq = −6π
    let mut q = BTreeMap::new();
    q.insert(1, pr(1, 1));
    q.insert(-1, pr(1, 1));
    let mut p = BTreeMap::new();
    p.insert(1, PiPoly::constant(GaussRational::new(rat(0, 1), rat(-3, 2))));
    p.insert(-1, PiPoly::constant(GaussRational::new(rat(0, 1), rat(3, 2))));
    let e = LoopPath::new(2, vec![Segment::trigonometric(&[q, p])], vec![]).unwrap();
    assert_eq!(liouville_integral(&e, &p_dq()).unwrap().to_string(), "-6*pi");
    // ∮ q²p dq = −24∫cos²sin² = −6π, ∮ qp² dq = −36∫cos sin³ = 0
    let form = |s: &str| {
        let mut t = PolyForm::zero(2, 1);
        t.add_component(vec![0], &parse_chart_poly(s, 2).unwrap());
        t
    };
    assert_eq!(liouville_integral(&e, &form("x1^2*x2")).unwrap().to_string(), "-6*pi");
    assert!(liouville_integral(&e, &form("x1*x2^2")).unwrap().is_zero());
}
