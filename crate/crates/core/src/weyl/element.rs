use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{monomial_degree, ChartPoly, GaussRational, LambdaPoly};

use super::WeylError;

/// Fiber monomial `ξ^xi λ^lambda`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WeylKey {
    pub xi: Vec<u32>,
    pub lambda: u32,
}

impl WeylKey {
    pub fn new(xi: Vec<u32>, lambda: u32) -> Self {
        Self { xi, lambda }
    }

    pub fn xi_degree(&self) -> u32 {
        monomial_degree(&self.xi)
    }

    /// Total degree with `deg ξ = 1`, `deg λ = 2`.
    pub fn degree(&self) -> u32 {
        self.xi_degree() + 2 * self.lambda
    }

    pub fn is_central(&self) -> bool {
        self.xi.iter().all(|&e| e == 0)
    }
}

/// Element of the truncated formal Weyl algebra over a chart: a finite sum
/// of `c(x) ξ^I λ^k` with `|I| + 2k ≤ budget`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElement {
    dim: usize,
    budget: u32,
    terms: BTreeMap<WeylKey, ChartPoly>,
}

impl WeylElement {
    pub fn zero(dim: usize, budget: u32) -> Self {
        Self {
            dim,
            budget,
            terms: BTreeMap::new(),
        }
    }

    /// Lifts `Σ λ^k f_k` as a ξ-free element; orders with `2k > budget` drop.
    pub fn from_central(f: &LambdaPoly, budget: u32) -> Self {
        let mut out = Self::zero(f.dim(), budget);
        for (k, c) in f.coeffs().iter().enumerate() {
            out.add_term(WeylKey::new(vec![0; f.dim()], k as u32), c.clone());
        }
        out
    }

    pub fn from_poly(f: ChartPoly, budget: u32) -> Self {
        let dim = f.dim();
        let mut out = Self::zero(dim, budget);
        out.add_term(WeylKey::new(vec![0; dim], 0), f);
        out
    }

    pub fn one(dim: usize, budget: u32) -> Self {
        Self::from_poly(ChartPoly::one(dim), budget)
    }

    /// The generator `ξ^{axis+1}`.
    pub fn xi(dim: usize, budget: u32, axis: usize) -> Self {
        let mut xi = vec![0; dim];
        xi[axis] = 1;
        Self::monomial(dim, budget, WeylKey::new(xi, 0), GaussRational::one())
    }

    pub fn monomial(dim: usize, budget: u32, key: WeylKey, c: GaussRational) -> Self {
        let mut out = Self::zero(dim, budget);
        out.add_term(key, ChartPoly::constant(dim, c));
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylKey, &ChartPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &WeylKey) -> ChartPoly {
        self.terms.get(key).cloned().unwrap_or_else(|| ChartPoly::zero(self.dim))
    }

    /// Adds a term; silently drops it when it exceeds the budget.
    pub fn add_term(&mut self, key: WeylKey, c: ChartPoly) {
        debug_assert_eq!(key.xi.len(), self.dim);
        if c.is_zero() || key.degree() > self.budget {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_poly(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_term_scaled(&mut self, key: WeylKey, c: &ChartPoly, s: &GaussRational) {
        if key.degree() > self.budget || s.is_zero() {
            return;
        }
        self.add_term(key, c.scale(s));
    }

    fn check(&self, other: &Self) -> Result<(), WeylError> {
        if self.dim != other.dim {
            return Err(WeylError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.budget != other.budget {
            return Err(WeylError::BudgetMismatch {
                left: self.budget,
                right: other.budget,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, WeylError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_scaled_unchecked(other, &GaussRational::from_int(-1));
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub(crate) fn add_scaled_unchecked(&mut self, other: &Self, s: &GaussRational) {
        for (k, c) in &other.terms {
            self.add_term_scaled(k.clone(), c, s);
        }
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        let mut out = Self::zero(self.dim, self.budget);
        out.add_scaled_unchecked(self, s);
        out
    }

    /// Multiplies every coefficient by the chart polynomial `p`.
    pub fn mul_poly(&self, p: &ChartPoly) -> Self {
        let mut out = Self::zero(self.dim, self.budget);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * p);
        }
        out
    }

    /// Multiplies by `λ^k`.
    pub fn shift_lambda(&self, k: u32) -> Self {
        let mut out = Self::zero(self.dim, self.budget);
        for (key, c) in &self.terms {
            out.add_term(WeylKey::new(key.xi.clone(), key.lambda + k), c.clone());
        }
        out
    }

    /// Drops everything above `budget` (which must not exceed the current one).
    pub fn truncate(&self, budget: u32) -> Self {
        assert!(budget <= self.budget, "truncate cannot raise the budget");
        let mut out = Self::zero(self.dim, budget);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    /// Reinterprets with a larger budget; only meaningful for elements whose
    /// higher-degree parts are known to vanish.
    pub fn embed(&self, budget: u32) -> Self {
        assert!(budget >= self.budget);
        Self {
            dim: self.dim,
            budget,
            terms: self.terms.clone(),
        }
    }

    /// Homogeneous component of total degree `d`.
    pub fn degree_part(&self, d: u32) -> Self {
        self.filter(|k| k.degree() == d)
    }

    pub fn filter<F: Fn(&WeylKey) -> bool>(&self, keep: F) -> Self {
        Self {
            dim: self.dim,
            budget: self.budget,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::degree).min()
    }

    pub fn max_xi_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::xi_degree).max()
    }

    /// `∂/∂ξ^{axis+1}`.
    pub fn xi_diff(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.dim, self.budget);
        for (k, c) in &self.terms {
            let e = k.xi[axis];
            if e == 0 {
                continue;
            }
            let mut xi = k.xi.clone();
            xi[axis] -= 1;
            out.add_term(WeylKey::new(xi, k.lambda), c.scale(&GaussRational::from_int(e as i64)));
        }
        out
    }

    /// Multiplication by the commuting variable `ξ^{axis+1}`.
    pub fn xi_mul(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.dim, self.budget);
        for (k, c) in &self.terms {
            let mut xi = k.xi.clone();
            xi[axis] += 1;
            out.add_term(WeylKey::new(xi, k.lambda), c.clone());
        }
        out
    }

    /// Base-coordinate partial derivative of all coefficients.
    pub fn x_diff(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.dim, self.budget);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.diff(axis).expect("axis checked by caller"));
        }
        out
    }

    /// Maps every coefficient through `f`.
    pub fn map_coeffs<F: Fn(&ChartPoly) -> ChartPoly>(&self, f: F) -> Self {
        let mut out = Self::zero(self.dim, self.budget);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    /// Projection onto ξ-degree zero, as a λ-series of order `budget / 2`.
    pub fn central_part(&self) -> LambdaPoly {
        let order = self.budget / 2;
        let mut out = LambdaPoly::zero(self.dim, order);
        for (k, c) in &self.terms {
            if k.is_central() {
                out.add_to_coeff(k.lambda, c);
            }
        }
        out
    }

    pub fn is_central(&self) -> bool {
        self.terms.keys().all(WeylKey::is_central)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = format!("({c})");
                for (a, &e) in k.xi.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*xi{}", a + 1)),
                        _ => s.push_str(&format!("*xi{}^{}", a + 1, e)),
                    }
                }
                match k.lambda {
                    0 => {}
                    1 => s.push_str("*lambda"),
                    l => s.push_str(&format!("*lambda^{l}")),
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_drops_high_degree_terms() {
        let mut a = WeylElement::zero(2, 3);
        a.add_term(WeylKey::new(vec![1, 0], 1), ChartPoly::one(2));
        a.add_term(WeylKey::new(vec![2, 0], 1), ChartPoly::one(2));
        assert_eq!(a.num_terms(), 1);
    }

    #[test]
    fn central_projection() {
        // σ(q + ξ1 + λ ξ1 ξ2) = q
        let q = ChartPoly::var(2, 0);
        let mut a = WeylElement::from_poly(q.clone(), 6);
        a.add_term(WeylKey::new(vec![1, 0], 0), ChartPoly::one(2));
        a.add_term(WeylKey::new(vec![1, 1], 1), ChartPoly::one(2));
        assert_eq!(a.central_part(), LambdaPoly::from_poly(q, 3));
    }

    #[test]
    fn budget_mismatch_fails_fast() {
        let a = WeylElement::one(2, 4);
        let b = WeylElement::one(2, 6);
        assert!(matches!(
            a.try_add(&b),
            Err(WeylError::BudgetMismatch { left: 4, right: 6 })
        ));
    }
}
