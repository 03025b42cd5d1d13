//! Constant fiberwise orderings `a ∗ b = μ₀ exp((λ/2i) μ^{ij} ∂_{ξ^i} ⊗ ∂_{ξ^j})(a ⊗ b)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{GaussRational, LambdaPoly, Rational};

use super::{WeylElement, WeylError, WeylKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingMode {
    /// `μ = ω`, the symmetric (Moyal-Weyl) product.
    Weyl,
    /// Fiber derivatives of the left factor along the marked axes paired with
    /// base-direction derivatives of the right factor only.
    Standard,
    Custom,
}

/// A constant ordering tensor `μ` whose antisymmetric part is the Poisson
/// matrix, so all orderings share the same commutator.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingSpec {
    mode: OrderingMode,
    poisson: Vec<Vec<GaussRational>>,
    mu: Vec<Vec<GaussRational>>,
    pairs: Vec<(usize, usize, GaussRational)>,
    sym_pairs: Vec<(usize, usize, GaussRational)>,
}

fn nonzero_entries(m: &[Vec<GaussRational>]) -> Vec<(usize, usize, GaussRational)> {
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                out.push((i, j, v.clone()));
            }
        }
    }
    out
}

impl OrderingSpec {
    pub fn weyl(poisson: Vec<Vec<GaussRational>>) -> Self {
        Self::build(OrderingMode::Weyl, poisson.clone(), poisson)
    }

    /// Standard ordering adapted to the zero set of `p_axes`: `μ^{ab}` is
    /// `2ω^{ab}` for `a ∈ P, b ∉ P`, `ω^{ab}` for `a, b ∉ P`, and `0` whenever
    /// `b ∈ P`. Requires `ω^{ab} = 0` on `P × P`.
    pub fn standard(poisson: Vec<Vec<GaussRational>>, p_axes: &[usize]) -> Result<Self, WeylError> {
        let d = poisson.len();
        let in_p = |k: usize| p_axes.contains(&k);
        let mut mu = vec![vec![GaussRational::zero(); d]; d];
        for a in 0..d {
            for b in 0..d {
                let w = &poisson[a][b];
                mu[a][b] = match (in_p(a), in_p(b)) {
                    (true, false) => w.scale_int(2),
                    (false, false) => w.clone(),
                    (_, true) => {
                        if in_p(a) && !w.is_zero() {
                            return Err(WeylError::InvalidOrdering(format!(
                                "Poisson matrix pairs marked axes {} and {}",
                                a + 1,
                                b + 1
                            )));
                        }
                        GaussRational::zero()
                    }
                };
            }
        }
        Ok(Self::build(OrderingMode::Standard, poisson, mu))
    }

    pub fn custom(poisson: Vec<Vec<GaussRational>>, mu: Vec<Vec<GaussRational>>) -> Result<Self, WeylError> {
        let d = poisson.len();
        if mu.len() != d || mu.iter().any(|r| r.len() != d) {
            return Err(WeylError::InvalidOrdering("mu has wrong shape".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let anti = (&mu[i][j] - &mu[j][i]).scale_rat(&Rational::new(1, 2));
                if anti != poisson[i][j] {
                    return Err(WeylError::InvalidOrdering(format!(
                        "antisymmetric part of mu differs from the Poisson matrix at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self::build(OrderingMode::Custom, poisson, mu))
    }

    fn build(mode: OrderingMode, poisson: Vec<Vec<GaussRational>>, mu: Vec<Vec<GaussRational>>) -> Self {
        let d = poisson.len();
        let sym: Vec<Vec<GaussRational>> = (0..d)
            .map(|i| (0..d).map(|j| &mu[i][j] - &poisson[i][j]).collect())
            .collect();
        Self {
            mode,
            pairs: nonzero_entries(&mu),
            sym_pairs: nonzero_entries(&sym),
            poisson,
            mu,
        }
    }

    pub fn mode(&self) -> OrderingMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.poisson.len()
    }

    pub fn mu(&self) -> &[Vec<GaussRational>] {
        &self.mu
    }

    pub fn poisson(&self) -> &[Vec<GaussRational>] {
        &self.poisson
    }

    /// Symmetric part `μ - ω`; zero exactly in Weyl mode.
    pub fn symmetric_part(&self) -> Vec<Vec<GaussRational>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| &self.mu[i][j] - &self.poisson[i][j]).collect())
            .collect()
    }

    pub fn is_weyl_like(&self) -> bool {
        self.sym_pairs.is_empty()
    }

    /// `a ∗ b`, truncated at the common budget.
    pub fn product(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement, WeylError> {
        check_pair(a, b)?;
        Ok(self.product_impl(a, b, false, a.budget()))
    }

    /// `(a ∗ b − ab) / λ`: the part of the product that carries at least one
    /// contraction, divided by λ. Output budget is `out_budget`.
    pub fn product_tail(&self, a: &WeylElement, b: &WeylElement, out_budget: u32) -> WeylElement {
        self.product_impl(a, b, true, out_budget)
    }

    fn product_impl(&self, a: &WeylElement, b: &WeylElement, tail: bool, out_budget: u32) -> WeylElement {
        let dim = a.dim();
        let mut out = WeylElement::zero(dim, out_budget);
        let shift = if tail { 2 } else { 0 };
        let mut cache: HashMap<(Vec<u32>, Vec<u32>), Vec<(Vec<u32>, u32, GaussRational)>> = HashMap::new();
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                let deg = ka.degree() + kb.degree();
                if deg < shift || deg - shift > out_budget {
                    continue;
                }
                let expansion = cache
                    .entry((ka.xi.clone(), kb.xi.clone()))
                    .or_insert_with(|| self.expand_pair(&ka.xi, &kb.xi));
                let mut prod = None;
                for (xi, k, s) in expansion.iter() {
                    if tail && *k == 0 {
                        continue;
                    }
                    let lam = ka.lambda + kb.lambda + k - if tail { 1 } else { 0 };
                    let p = prod.get_or_insert_with(|| ca * cb);
                    out.add_term_scaled(WeylKey::new(xi.clone(), lam), p, s);
                }
            }
        }
        out
    }

    /// Central part `σ(a ∗ b)` up to `λ^order`, skipping all non-central
    /// output.
    pub fn central_product(&self, a: &WeylElement, b: &WeylElement, order: u32) -> LambdaPoly {
        let dim = a.dim();
        let mut out = LambdaPoly::zero(dim, order);
        let mut cache: HashMap<(Vec<u32>, Vec<u32>), Vec<(u32, GaussRational)>> = HashMap::new();
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                if ka.degree() + kb.degree() > 2 * order || (ka.degree() + kb.degree()) % 2 != 0 {
                    continue;
                }
                let expansion = cache.entry((ka.xi.clone(), kb.xi.clone())).or_insert_with(|| {
                    self.expand_pair(&ka.xi, &kb.xi)
                        .into_iter()
                        .filter(|(xi, _, _)| xi.iter().all(|&e| e == 0))
                        .map(|(_, k, s)| (k, s))
                        .collect()
                });
                if expansion.is_empty() {
                    continue;
                }
                let p = ca * cb;
                for (k, s) in expansion.iter() {
                    let lam = ka.lambda + kb.lambda + k;
                    if lam <= order {
                        out.add_to_coeff(lam, &p.scale(s));
                    }
                }
            }
        }
        out
    }

    /// Expands `exp((λ/2i) μ^{ij} ∂_i ⊗ ∂_j)(ξ^A ⊗ ξ^B)` into
    /// `(ξ-exponent, λ-power, scalar)` triples.
    fn expand_pair(&self, a: &[u32], b: &[u32]) -> Vec<(Vec<u32>, u32, GaussRational)> {
        let half_over_i = GaussRational::new(Rational::zero(), Rational::new(-1, 2));
        let mut states: Vec<(Vec<u32>, Vec<u32>, u32, GaussRational)> =
            vec![(a.to_vec(), b.to_vec(), 0, GaussRational::one())];
        for (i, j, m) in &self.pairs {
            let step = &half_over_i * m;
            let mut next = Vec::new();
            for (ea, eb, k, s) in states {
                let top = ea[*i].min(eb[*j]);
                let mut factor = GaussRational::one();
                for t in 0..=top {
                    if t > 0 {
                        // (step)^t / t! * falling(ea_i, t) * falling(eb_j, t)
                        let num = (ea[*i] - t + 1) as i64 * (eb[*j] - t + 1) as i64;
                        factor = &(&factor * &step).scale_int(num) / &GaussRational::from_int(t as i64);
                    }
                    let mut na = ea.clone();
                    let mut nb = eb.clone();
                    na[*i] -= t;
                    nb[*j] -= t;
                    next.push((na, nb, k + t, &s * &factor));
                }
            }
            states = next;
        }
        let mut merged: HashMap<(Vec<u32>, u32), GaussRational> = HashMap::new();
        for (ea, eb, k, s) in states {
            let xi: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            *merged.entry((xi, k)).or_default() += &s;
        }
        let mut out: Vec<_> = merged
            .into_iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|((xi, k), s)| (xi, k, s))
            .collect();
        out.sort_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
        out
    }

    /// `Σ σ^{ab} ∂_{ξ^a} ∂_{ξ^b}` with `σ = μ − ω`.
    fn sym_laplacian(&self, a: &WeylElement) -> WeylElement {
        let mut out = WeylElement::zero(a.dim(), a.budget());
        for (i, j, s) in &self.sym_pairs {
            let t = a.xi_diff(*i).xi_diff(*j);
            out.add_scaled_unchecked(&t, s);
        }
        out
    }

    /// The fiberwise isomorphism `E^{sign}` with
    /// `E = exp((λ/4i) σ^{ab} ∂_a ∂_b)`, satisfying `E(a ∗_W b) = Ea ∗ Eb`.
    pub fn weyl_to_ordered(&self, a: &WeylElement, inverse: bool) -> WeylElement {
        if self.sym_pairs.is_empty() {
            return a.clone();
        }
        // (λ/4i)^m / m!, with λ carried as a shift.
        let quarter_over_i = GaussRational::new(Rational::zero(), Rational::new(if inverse { 1 } else { -1 }, 4));
        let mut out = a.clone();
        let mut term = a.clone();
        let mut m = 0i64;
        loop {
            m += 1;
            term = self
                .sym_laplacian(&term)
                .shift_lambda(1)
                .scale(&(&quarter_over_i / &GaussRational::from_int(m)));
            if term.is_zero() {
                break;
            }
            out.add_assign_unchecked(&term);
        }
        out
    }
}

fn check_pair(a: &WeylElement, b: &WeylElement) -> Result<(), WeylError> {
    if a.dim() != b.dim() {
        return Err(WeylError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if a.budget() != b.budget() {
        return Err(WeylError::BudgetMismatch {
            left: a.budget(),
            right: b.budget(),
        });
    }
    Ok(())
}
