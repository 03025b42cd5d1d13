#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use starbench::algebra::{ChartPoly, GaussRational, LambdaPoly, Rational};
use starbench::geometry::RawSetup;
use starbench::weyl::{OrderingMode, WeylElement, WeylKey};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar(r: &mut ChaCha8Rng) -> GaussRational {
    let re = r.gen_range(-3..=3);
    let im = if r.gen_bool(0.3) { r.gen_range(-2..=2) } else { 0 };
    scalar(re, im)
}

fn to_rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn scalar(re: i64, im: i64) -> GaussRational {
    GaussRational::new(to_rat(re), to_rat(im))
}

/// Random polynomial with at most `terms` monomials of degree ≤ `max_deg`.
pub fn random_poly(r: &mut ChaCha8Rng, dim: usize, max_deg: u32, terms: usize) -> ChartPoly {
    let mut p = ChartPoly::zero(dim);
    for _ in 0..terms {
        let mut m = vec![0u32; dim];
        let deg = r.gen_range(0..=max_deg);
        for _ in 0..deg {
            m[r.gen_range(0..dim)] += 1;
        }
        p.add_term(m, small_scalar(r));
    }
    p
}

/// Random Weyl element with fiber degree ≤ `max_xi` and polynomial
/// coefficients of degree ≤ `coeff_deg`.
pub fn random_element(
    r: &mut ChaCha8Rng,
    dim: usize,
    budget: u32,
    max_xi: u32,
    coeff_deg: u32,
    terms: usize,
) -> WeylElement {
    let mut a = WeylElement::zero(dim, budget);
    for _ in 0..terms {
        let mut xi = vec![0u32; dim];
        let deg = r.gen_range(0..=max_xi);
        for _ in 0..deg {
            xi[r.gen_range(0..dim)] += 1;
        }
        let lam = if r.gen_bool(0.3) { 1 } else { 0 };
        a.add_term(WeylKey::new(xi, lam), random_poly(r, dim, coeff_deg, 2));
    }
    a
}

/// Darboux Poisson matrix on `(q_1..q_n, p_1..p_n)` with `{q_i, p_i} = 1`.
pub fn darboux_poisson(n: usize) -> Vec<Vec<GaussRational>> {
    let d = 2 * n;
    let mut m = vec![vec![GaussRational::zero(); d]; d];
    for i in 0..n {
        m[i][n + i] = GaussRational::one();
        m[n + i][i] = GaussRational::from_int(-1);
    }
    m
}

pub fn p_axes(n: usize) -> Vec<usize> {
    (n..2 * n).collect()
}

/// Connection `Γ^l_{jk} = π^{li} Γ_{ijk}` from a random totally symmetric
/// lowered tensor, hence symplectic and torsion free.
pub fn random_symplectic_connection(
    r: &mut ChaCha8Rng,
    poisson: &[Vec<GaussRational>],
    coeff_deg: u32,
) -> starbench::weyl::Connection {
    let d = poisson.len();
    let mut low = vec![vec![vec![ChartPoly::zero(d); d]; d]; d];
    for i in 0..d {
        for j in i..d {
            for k in j..d {
                let c = if r.gen_bool(0.5) {
                    random_poly(r, d, coeff_deg, 1)
                } else {
                    ChartPoly::zero(d)
                };
                for (a, b, e) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    low[a][b][e] = c.clone();
                }
            }
        }
    }
    let mut gamma = vec![vec![vec![ChartPoly::zero(d); d]; d]; d];
    for l in 0..d {
        for j in 0..d {
            for k in 0..d {
                for i in 0..d {
                    if !poisson[l][i].is_zero() {
                        gamma[l][j][k].add_scaled(&low[i][j][k], &poisson[l][i]);
                    }
                }
            }
        }
    }
    starbench::weyl::Connection::new(d, gamma).unwrap()
}

/// Raw setup carrying a random symplectic connection with coefficient degree
/// ≤ `coeff_deg`.
pub fn curved_raw(seed: u64, n: usize, ordering: OrderingMode, order: u32, coeff_deg: u32) -> RawSetup {
    let mut r = rng(seed);
    let pi = darboux_poisson(n);
    let conn = random_symplectic_connection(&mut r, &pi, coeff_deg);
    let mut raw = RawSetup::flat(n, ordering, order);
    let d = 2 * n;
    for l in 0..d {
        for j in 0..d {
            for k in 0..d {
                let c = conn.symbol(l, j, k);
                if !c.is_zero() {
                    raw.christoffel.insert((l, j, k), c.clone());
                }
            }
        }
    }
    raw
}

/// Random multidifferential operator of the given arity with derivative
/// order ≤ `max_order` per slot.
pub fn random_cochain(
    r: &mut ChaCha8Rng,
    dim: usize,
    arity: usize,
    max_order: u32,
    coeff_deg: u32,
    terms: usize,
) -> starbench::hochschild::MultiDiffOp {
    let mut c = starbench::hochschild::MultiDiffOp::zero(dim, arity);
    for _ in 0..terms {
        let key = (0..arity)
            .map(|_| {
                let mut m = vec![0u32; dim];
                for _ in 0..r.gen_range(0..=max_order) {
                    m[r.gen_range(0..dim)] += 1;
                }
                m
            })
            .collect();
        c.add_term(key, random_poly(r, dim, coeff_deg, 2));
    }
    c
}

/// Random symplectic connection for which `L = {p = 0}` is totally geodesic:
/// every all-`q` component of the lowered tensor carries a factor `p`.
pub fn adapted_curved_raw(seed: u64, n: usize, order: u32, coeff_deg: u32) -> RawSetup {
    let mut r = rng(seed);
    let d = 2 * n;
    let pi = darboux_poisson(n);
    let mut low = vec![vec![vec![ChartPoly::zero(d); d]; d]; d];
    for i in 0..d {
        for j in i..d {
            for k in j..d {
                let mut c = random_poly(&mut r, d, coeff_deg, 1);
                if k < n {
                    c = &c * &ChartPoly::var(d, n + r.gen_range(0..n));
                }
                for (a, b, e) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    low[a][b][e] = c.clone();
                }
            }
        }
    }
    let mut raw = RawSetup::flat(n, OrderingMode::Standard, order);
    for l in 0..d {
        for j in 0..d {
            for k in 0..d {
                let mut g = ChartPoly::zero(d);
                for i in 0..d {
                    if !pi[l][i].is_zero() {
                        g.add_scaled(&low[i][j][k], &pi[l][i]);
                    }
                }
                if !g.is_zero() {
                    raw.christoffel.insert((l, j, k), g);
                }
            }
        }
    }
    raw
}

/// Closed-form Moyal product `Σ_k (1/k!) (λ/2i)^k π^{i₁j₁}⋯π^{i_kj_k} ∂_I f ∂_J g`.
pub fn moyal(f: &ChartPoly, g: &ChartPoly, n: usize, order: u32) -> LambdaPoly {
    let pi = darboux_poisson(n);
    let d = 2 * n;
    let mut out = LambdaPoly::zero(d, order);
    // terms: list of (left derivative, right derivative, coefficient)
    let mut layer = vec![(f.clone(), g.clone(), GaussRational::one())];
    let half_over_i = GaussRational::from_frac(-1, 2) * GaussRational::i();
    for k in 0..=order {
        let mut acc = ChartPoly::zero(d);
        for (a, b, c) in &layer {
            acc.add_assign_poly(&(a * b).scale(c));
        }
        out.set_coeff(k, acc);
        let mut next = Vec::new();
        for (a, b, c) in &layer {
            for i in 0..d {
                for j in 0..d {
                    if pi[i][j].is_zero() {
                        continue;
                    }
                    let da = a.diff(i).unwrap();
                    let db = b.diff(j).unwrap();
                    if da.is_zero() || db.is_zero() {
                        continue;
                    }
                    let coeff = &(c * &pi[i][j]) * &(&half_over_i / &GaussRational::from_int(k as i64 + 1));
                    next.push((da, db, coeff));
                }
            }
        }
        layer = next;
    }
    out
}
