mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use starbench::algebra::{parse_chart_poly, ChartPoly, GaussRational, PolyForm};
use starbench::fedosov::StarProduct;
use starbench::geometry::{validate_setup, RawSetup};
use starbench::hochschild::{
    associativity_residual, form_on_hamiltonians, gerstenhaber_bracket, hkr_antisymmetrize, hochschild_b,
    lichnerowicz_split, star_cochains, HochschildError, MultiDiffOp,
};
use starbench::weyl::OrderingMode;

fn sign(k: usize) -> GaussRational {
    GaussRational::from_int(if k % 2 == 0 { 1 } else { -1 })
}

/// `⋆_k` of the Moyal product written out directly:
/// `(1/k!) (1/2i)^k π^{i₁j₁}⋯π^{i_kj_k} ∂_{i₁⋯i_k} ⊗ ∂_{j₁⋯j_k}`.
fn moyal_cochain(n: usize, k: usize) -> MultiDiffOp {
    let d = 2 * n;
    let pi = darboux_poisson(n);
    let mut terms = vec![(vec![0u32; d], vec![0u32; d], GaussRational::one())];
    let half_over_i = GaussRational::from_frac(-1, 2) * GaussRational::i();
    for step in 1..=k {
        let mut next = Vec::new();
        for (a, b, c) in &terms {
            for i in 0..d {
                for j in 0..d {
                    if pi[i][j].is_zero() {
                        continue;
                    }
                    let (mut a2, mut b2) = (a.clone(), b.clone());
                    a2[i] += 1;
                    b2[j] += 1;
                    let c2 = &(c * &pi[i][j]) * &(&half_over_i / &GaussRational::from_int(step as i64));
                    next.push((a2, b2, c2));
                }
            }
        }
        terms = next;
    }
    let mut out = MultiDiffOp::zero(d, 2);
    for (a, b, c) in terms {
        out.add_term(vec![a, b], ChartPoly::constant(d, c));
    }
    out
}

fn poisson_op(n: usize) -> MultiDiffOp {
    let pi = darboux_poisson(n);
    let d = 2 * n;
    let m: Vec<Vec<ChartPoly>> = pi
        .iter()
        .map(|r| r.iter().map(|c| ChartPoly::constant(d, c.clone())).collect())
        .collect();
    MultiDiffOp::from_bivector(&m)
}

fn random_args(r: &mut rand_chacha::ChaCha8Rng, dim: usize, k: usize) -> Vec<ChartPoly> {
    (0..k).map(|_| random_poly(r, dim, 3, 3)).collect()
}

#[test]
fn b_examples() {
    let id = MultiDiffOp::identity(2);
    let mut r = rng(1);
    let args = random_args(&mut r, 2, 2);
    let v = hochschild_b(&id).apply(&args).unwrap();
    assert_eq!(v, &args[0] * &args[1]);
    assert!(hochschild_b(&MultiDiffOp::pointwise_product(2)).is_zero());
}

#[test]
fn b_matches_direct_evaluation() {
    // The table-level coboundary agrees with the alternating sum evaluated
    // on polynomials.
    let mut r = rng(2);
    for arity in 1..=3 {
        for _ in 0..5 {
            let c = random_cochain(&mut r, 2, arity, 2, 1, 3);
            let args = random_args(&mut r, 2, arity + 1);
            let mut expect = &args[0] * &c.apply(&args[1..]).unwrap();
            for i in 0..arity {
                let mut merged: Vec<ChartPoly> = args[..i].to_vec();
                merged.push(&args[i] * &args[i + 1]);
                merged.extend(args[i + 2..].iter().cloned());
                expect.add_scaled(&c.apply(&merged).unwrap(), &sign(i + 1));
            }
            expect.add_scaled(&(&c.apply(&args[..arity]).unwrap() * &args[arity]), &sign(arity + 1));
            assert_eq!(hochschild_b(&c).apply(&args).unwrap(), expect);
        }
    }
}

#[test]
fn composition_matches_direct_evaluation() {
    let mut r = rng(3);
    for (ka, kb) in [(1, 2), (2, 2), (2, 1), (3, 2)] {
        let a = random_cochain(&mut r, 2, ka, 2, 1, 3);
        let b = random_cochain(&mut r, 2, kb, 2, 1, 3);
        let args = random_args(&mut r, 2, ka + kb - 1);
        let l = kb - 1;
        let mut expect = ChartPoly::zero(2);
        for i in 0..ka {
            let inner = b.apply(&args[i..i + kb]).unwrap();
            let mut outer: Vec<ChartPoly> = args[..i].to_vec();
            outer.push(inner);
            outer.extend(args[i + kb..].iter().cloned());
            expect.add_scaled(&a.apply(&outer).unwrap(), &sign(i * l));
        }
        assert_eq!(a.compose(&b).unwrap().apply(&args).unwrap(), expect);
    }
}

#[test]
fn bracket_of_multiplication_is_twice_the_associator() {
    let mu = MultiDiffOp::pointwise_product(2);
    assert!(gerstenhaber_bracket(&mu, &mu).unwrap().is_zero());
    // For a non-associative operator the bracket is twice its associator.
    let p = poisson_op(1);
    let br = gerstenhaber_bracket(&p, &p).unwrap();
    let mut r = rng(4);
    let args = random_args(&mut r, 2, 3);
    let pf = |a: &ChartPoly, b: &ChartPoly| p.apply(&[a.clone(), b.clone()]).unwrap();
    let mut assoc = pf(&pf(&args[0], &args[1]), &args[2]);
    assoc.sub_assign_poly(&pf(&args[0], &pf(&args[1], &args[2])));
    assert_eq!(br.apply(&args).unwrap(), assoc.scale(&GaussRational::from_int(2)));
}

#[test]
fn coboundary_is_bracket_with_multiplication() {
    // Sign convention: bC = (−1)^{|C|} [μ₀, C].
    let mu = MultiDiffOp::pointwise_product(2);
    let mut r = rng(5);
    for arity in 1..=3 {
        for _ in 0..4 {
            let c = random_cochain(&mut r, 2, arity, 2, 1, 3);
            let br = gerstenhaber_bracket(&mu, &c).unwrap().scale(&sign(arity - 1));
            assert_eq!(hochschild_b(&c), br);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 30, .. ProptestConfig::default() })]

    #[test]
    fn b_squared_vanishes(seed in any::<u64>(), arity in 1usize..=3, dim in prop::sample::select(vec![2usize, 4])) {
        let mut r = rng(seed);
        let c = random_cochain(&mut r, dim, arity, 2, 2, 4);
        prop_assert!(hochschild_b(&hochschild_b(&c)).is_zero());
    }

    #[test]
    fn bracket_is_graded_antisymmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (ka, kb) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let a = random_cochain(&mut r, 2, ka, 2, 1, 3);
        let b = random_cochain(&mut r, 2, kb, 2, 1, 3);
        let ab = gerstenhaber_bracket(&a, &b).unwrap();
        let ba = gerstenhaber_bracket(&b, &a).unwrap();
        let s = if ((ka - 1) * (kb - 1)) % 2 == 0 { -1 } else { 1 };
        prop_assert_eq!(ab, ba.scale(&GaussRational::from_int(s)));
    }

    #[test]
    fn bracket_satisfies_graded_jacobi(seed in any::<u64>()) {
        // [a, [b, c]] = [[a, b], c] + (−1)^{|a||b|} [b, [a, c]]
        let mut r = rng(seed);
        let ks: Vec<usize> = (0..3).map(|_| r.gen_range(1..=2)).collect();
        let a = random_cochain(&mut r, 2, ks[0], 2, 1, 2);
        let b = random_cochain(&mut r, 2, ks[1], 2, 1, 2);
        let c = random_cochain(&mut r, 2, ks[2], 2, 1, 2);
        let lhs = gerstenhaber_bracket(&a, &gerstenhaber_bracket(&b, &c).unwrap()).unwrap();
        let r1 = gerstenhaber_bracket(&gerstenhaber_bracket(&a, &b).unwrap(), &c).unwrap();
        let r2 = gerstenhaber_bracket(&b, &gerstenhaber_bracket(&a, &c).unwrap()).unwrap();
        let rhs = r1.try_add_scaled(&r2, &sign((ks[0] - 1) * (ks[1] - 1))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hkr_kills_coboundaries(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let mut r = rng(seed);
        let first_order = random_cochain(&mut r, dim, 1, 1, 2, 4);
        let any_order = random_cochain(&mut r, dim, 1, 3, 2, 4);
        let pi = darboux_poisson(dim / 2);
        prop_assert!(hkr_antisymmetrize(&hochschild_b(&first_order), &pi).unwrap().is_zero());
        prop_assert!(hkr_antisymmetrize(&hochschild_b(&any_order), &pi).unwrap().is_zero());
    }
}

#[test]
fn hkr_of_poisson_bracket_is_omega() {
    for n in 1..=2 {
        let d = 2 * n;
        let half_i = GaussRational::from_frac(1, 2) * GaussRational::i();
        let beta = hkr_antisymmetrize(&poisson_op(n).scale(&half_i), &darboux_poisson(n)).unwrap();
        let mut omega = PolyForm::zero(d, 2);
        for i in 0..n {
            omega.add_component(vec![i, n + i], &ChartPoly::constant(d, half_i.clone()));
        }
        assert_eq!(beta, omega);
    }
}

#[test]
fn hkr_of_symmetric_cochain_is_zero() {
    let mut r = rng(6);
    for _ in 0..10 {
        let c = random_cochain(&mut r, 2, 2, 2, 2, 4);
        let mut sym = c.clone();
        for (k, v) in c.terms() {
            sym.add_term(vec![k[1].clone(), k[0].clone()], v.clone());
        }
        assert!(hkr_antisymmetrize(&sym, &darboux_poisson(1)).unwrap().is_zero());
    }
}

#[test]
fn hkr_inverts_form_on_hamiltonians() {
    let mut r = rng(7);
    let d = 4;
    let mut beta = PolyForm::zero(d, 2);
    for i in 0..d {
        for j in i + 1..d {
            beta.add_component(vec![i, j], &random_poly(&mut r, d, 2, 2));
        }
    }
    let pi = darboux_poisson(2);
    assert_eq!(hkr_antisymmetrize(&form_on_hamiltonians(&beta, &pi), &pi).unwrap(), beta);
}

#[test]
fn moyal_coefficients_are_associative() {
    for n in 1..=2 {
        let stars: Vec<MultiDiffOp> = (0..=3).map(|k| moyal_cochain(n, k)).collect();
        assert_eq!(stars[0], MultiDiffOp::pointwise_product(2 * n));
        for order in 1..=3 {
            assert!(associativity_residual(&stars, order).unwrap().is_zero(), "n={n} order={order}");
        }
        // Order one reduces to −2b⋆₁.
        let r1 = associativity_residual(&stars, 1).unwrap();
        assert_eq!(r1, hochschild_b(&stars[1]).scale(&GaussRational::from_int(-2)));
        // The opposite sign on the coboundary term does not vanish.
        let plus = hochschild_b(&stars[2])
            .scale(&GaussRational::from_int(2))
            .try_add(&gerstenhaber_bracket(&stars[1], &stars[1]).unwrap())
            .unwrap();
        assert!(!plus.is_zero());
    }
}

#[test]
fn residual_equals_full_bracket_sum() {
    let stars: Vec<MultiDiffOp> = (0..=3).map(|k| moyal_cochain(1, k)).collect();
    let mut r = rng(8);
    let mut perturbed = stars.clone();
    perturbed[3] = perturbed[3].try_add(&random_cochain(&mut r, 2, 2, 2, 1, 3)).unwrap();
    let mut full = MultiDiffOp::zero(2, 3);
    for i in 0..=3 {
        full = full.try_add(&gerstenhaber_bracket(&perturbed[i], &perturbed[3 - i]).unwrap()).unwrap();
    }
    assert_eq!(associativity_residual(&perturbed, 3).unwrap(), full);
}

#[test]
fn perturbed_moyal_has_witnessed_residual() {
    let mut stars: Vec<MultiDiffOp> = (0..=2).map(|k| moyal_cochain(1, k)).collect();
    // A symmetric second-order term that is not a cocycle.
    let mut bump = MultiDiffOp::zero(2, 2);
    bump.add_term(vec![vec![2, 0], vec![0, 0]], parse_chart_poly("x2", 2).unwrap());
    stars[2] = stars[2].try_add(&bump).unwrap();
    let res = associativity_residual(&stars, 2).unwrap();
    let (args, value) = res.witness().expect("nonzero residual");
    assert_eq!(args.len(), 3);
    assert!(!value.is_zero());
    let polys: Vec<ChartPoly> = args
        .iter()
        .map(|m| ChartPoly::monomial(m.clone(), GaussRational::one()))
        .collect();
    assert_eq!(res.apply(&polys).unwrap(), value);
}

fn engine_products() -> Vec<(&'static str, StarProduct)> {
    let mut out = Vec::new();
    for (name, raw) in [
        ("flat weyl d2", RawSetup::flat(1, OrderingMode::Weyl, 3)),
        ("flat standard d2", RawSetup::flat(1, OrderingMode::Standard, 3)),
        ("curved weyl d2", curved_raw(21, 1, OrderingMode::Weyl, 3, 2)),
        ("curved standard d2", curved_raw(22, 1, OrderingMode::Standard, 3, 2)),
        ("flat standard d4", RawSetup::flat(2, OrderingMode::Standard, 3)),
    ] {
        out.push((name, StarProduct::build(&validate_setup(raw).unwrap()).unwrap()));
    }
    out
}

#[test]
fn engine_products_have_zero_residual() {
    for (name, star) in engine_products() {
        let stars = star_cochains(&star, 3, 3).unwrap();
        assert_eq!(stars[0], MultiDiffOp::pointwise_product(star.setup().dim()), "{name}");
        for n in 1..=3 {
            let res = associativity_residual(&stars, n).unwrap();
            assert!(res.is_zero(), "{name} order {n}: {:?}", res.witness());
        }
    }
}

#[test]
fn lichnerowicz_identical_products() {
    let star = StarProduct::build(&validate_setup(RawSetup::flat(1, OrderingMode::Weyl, 2)).unwrap()).unwrap();
    let split = lichnerowicz_split(&star, &star, 1, &darboux_poisson(1)).unwrap();
    assert!(split.alpha.is_zero());
    assert!(split.difference.is_zero());
    assert!(split.certificate.holds());
}

#[test]
fn lichnerowicz_weyl_versus_standard_is_pure_coboundary() {
    for n in 1..=2 {
        let w = StarProduct::build(&validate_setup(RawSetup::flat(n, OrderingMode::Weyl, 2)).unwrap()).unwrap();
        let s = StarProduct::build(&validate_setup(RawSetup::flat(n, OrderingMode::Standard, 2)).unwrap()).unwrap();
        let split = lichnerowicz_split(&w, &s, 1, &darboux_poisson(n)).unwrap();
        assert!(!split.difference.is_zero());
        assert!(split.beta.is_zero());
        assert!(split.alpha.d().is_zero());
        assert!(split.certificate.holds());
    }
}

#[test]
fn lichnerowicz_recovers_omega_primitive() {
    // Ω + λ^k Ω_k against Ω: the first difference sits at λ^{k+1}.
    let omega_k = parse_chart_poly("1 + x1*x2 - 2*x2^2", 2).unwrap();
    for k in 1..=2u32 {
        let base = curved_raw(31, 1, OrderingMode::Standard, 3, 1);
        let mut shifted = base.clone();
        let mut form = PolyForm::zero(2, 2);
        form.add_component(vec![0, 1], &omega_k);
        shifted.omega_series.insert(k, form.clone());
        let a = StarProduct::build(&validate_setup(base).unwrap()).unwrap();
        let b = StarProduct::build(&validate_setup(shifted).unwrap()).unwrap();
        let split = lichnerowicz_split(&a, &b, k + 1, &darboux_poisson(1)).unwrap();
        assert_eq!(split.beta, form, "k={k}");
        assert_eq!(split.alpha.d(), form);
        assert!(split.certificate.holds());

        let early = lichnerowicz_split(&a, &b, k + 2, &darboux_poisson(1));
        if k + 2 <= 3 {
            assert!(matches!(early, Err(HochschildError::OrdersDisagree { order, .. }) if order == k + 1));
        }
    }
}
