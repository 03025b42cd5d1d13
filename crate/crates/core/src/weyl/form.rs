use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{sort_with_sign, GaussRational, LambdaPoly};

use super::{OrderingSpec, WeylElement, WeylError, WeylKey};

/// A Weyl-valued differential form `Σ_I a_I dx^I`, stored with strictly
/// increasing dx-indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylForm {
    dim: usize,
    budget: u32,
    degree: usize,
    comps: BTreeMap<Vec<usize>, WeylElement>,
}

impl WeylForm {
    pub fn zero(dim: usize, budget: u32, degree: usize) -> Result<Self, WeylError> {
        if degree > dim {
            return Err(WeylError::FormDegree { degree, dim });
        }
        Ok(Self {
            dim,
            budget,
            degree,
            comps: BTreeMap::new(),
        })
    }

    pub fn from_element(a: WeylElement) -> Self {
        let mut out = Self::zero(a.dim(), a.budget(), 0).expect("degree 0");
        out.add_component(vec![], &a);
        out
    }

    /// `a dx^{idx[0]} ∧ ... `; indices are 0-based and need not be sorted.
    pub fn monomial(a: WeylElement, idx: Vec<usize>) -> Result<Self, WeylError> {
        let mut out = Self::zero(a.dim(), a.budget(), idx.len())?;
        out.add_component(idx, &a);
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &WeylElement)> {
        self.comps.iter()
    }

    /// Component at the sorted index `idx`, or zero.
    pub fn component(&self, idx: &[usize]) -> WeylElement {
        self.comps
            .get(idx)
            .cloned()
            .unwrap_or_else(|| WeylElement::zero(self.dim, self.budget))
    }

    /// The element of a 0-form.
    pub fn scalar(&self) -> WeylElement {
        self.component(&[])
    }

    /// Adds `a dx^idx`, reordering `idx` with the appropriate sign.
    pub fn add_component(&mut self, mut idx: Vec<usize>, a: &WeylElement) {
        debug_assert_eq!(idx.len(), self.degree);
        let Some(sign) = sort_with_sign(&mut idx) else {
            return;
        };
        if a.is_zero() {
            return;
        }
        let slot = self
            .comps
            .entry(idx.clone())
            .or_insert_with(|| WeylElement::zero(self.dim, self.budget));
        slot.add_scaled_unchecked(a, &GaussRational::from_int(sign));
        if slot.is_zero() {
            self.comps.remove(&idx);
        }
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
        if self.degree != other.degree {
            return Err(WeylError::FormDegreeMismatch {
                left: self.degree,
                right: other.degree,
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
        self.add_scaled_unchecked(other, &GaussRational::one());
    }

    pub(crate) fn add_scaled_unchecked(&mut self, other: &Self, s: &GaussRational) {
        for (idx, a) in &other.comps {
            self.add_component(idx.clone(), &a.scale(s));
        }
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        self.map(|a| a.scale(s))
    }

    /// Applies a fiberwise map to every component.
    pub fn map<F: Fn(&WeylElement) -> WeylElement>(&self, f: F) -> Self {
        let mut out = Self {
            dim: self.dim,
            budget: self.budget,
            degree: self.degree,
            comps: BTreeMap::new(),
        };
        for (idx, a) in &self.comps {
            let b = f(a);
            if b.budget() != self.budget {
                out.budget = b.budget();
            }
            out.add_component(idx.clone(), &b);
        }
        out
    }

    pub fn truncate(&self, budget: u32) -> Self {
        let mut out = self.map(|a| a.truncate(budget));
        out.budget = budget;
        out
    }

    pub fn embed(&self, budget: u32) -> Self {
        let mut out = self.map(|a| a.embed(budget));
        out.budget = budget;
        out
    }

    pub fn degree_part(&self, d: u32) -> Self {
        self.map(|a| a.degree_part(d))
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.comps.values().filter_map(WeylElement::min_degree).min()
    }

    /// Generic wedge product with fiber product `f`; the result has form
    /// degree `p + q` and budget `out_budget`.
    pub fn wedge_with<F>(&self, other: &Self, out_budget: u32, f: F) -> Result<Self, WeylError>
    where
        F: Fn(&WeylElement, &WeylElement) -> WeylElement,
    {
        if self.dim != other.dim {
            return Err(WeylError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = Self::zero(self.dim, out_budget, self.degree + other.degree)?;
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                if i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_component(idx, &f(a, b));
            }
        }
        Ok(out)
    }

    /// `A ∗ B` with the wedge on form parts.
    pub fn product(&self, other: &Self, ord: &OrderingSpec) -> Result<Self, WeylError> {
        self.check_budget(other)?;
        self.wedge_with(other, self.budget, |a, b| {
            ord.product(a, b).expect("checked")
        })
    }

    /// `(A ∗ B − A·B) / λ`, the λ-divided contraction part of the product.
    pub fn product_tail(&self, other: &Self, ord: &OrderingSpec, out_budget: u32) -> Result<Self, WeylError> {
        self.wedge_with(other, out_budget, |a, b| ord.product_tail(a, b, out_budget))
    }

    /// `(1/λ)[A, B]` with the graded commutator; the ordinary commutative
    /// parts cancel, so only contractions contribute.
    pub fn commutator_tail(&self, other: &Self, ord: &OrderingSpec, out_budget: u32) -> Result<Self, WeylError> {
        self.wedge_with(other, out_budget, |a, b| {
            let mut t = ord.product_tail(a, b, out_budget);
            t.add_scaled_unchecked(&ord.product_tail(b, a, out_budget), &GaussRational::from_int(-1));
            t
        })
    }

    fn check_budget(&self, other: &Self) -> Result<(), WeylError> {
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

    /// `δ = dx^k ∧ ∂/∂ξ^k`.
    pub fn delta(&self) -> Result<Self, WeylError> {
        let mut out = Self::zero(self.dim, self.budget, self.degree + 1)?;
        for (idx, a) in &self.comps {
            for k in 0..self.dim {
                if idx.contains(&k) {
                    continue;
                }
                let d = a.xi_diff(k);
                let mut j = vec![k];
                j.extend_from_slice(idx);
                out.add_component(j, &d);
            }
        }
        Ok(out)
    }

    /// `δ⁻¹`: on a component of ξ-degree `s` and form degree `p` with
    /// `s + p > 0` it is `(1/(s+p)) ξ^k ι_{∂_k}`; zero otherwise.
    pub fn delta_inv(&self) -> Self {
        let mut out = Self {
            dim: self.dim,
            budget: self.budget,
            degree: self.degree.saturating_sub(1),
            comps: BTreeMap::new(),
        };
        if self.degree == 0 {
            return out;
        }
        let p = self.degree as u32;
        for (idx, a) in &self.comps {
            for (m, &k) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(m);
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let mut b = WeylElement::zero(self.dim, self.budget);
                for (key, c) in a.terms() {
                    let s = key.xi_degree();
                    let mut xi = key.xi.clone();
                    xi[k] += 1;
                    let w = GaussRational::from_frac(sign, (s + p) as i64);
                    b.add_term(WeylKey::new(xi, key.lambda), c.scale(&w));
                }
                out.add_component(rest, &b);
            }
        }
        out
    }

    /// Projection onto ξ-degree zero of 0-form components (the kernel
    /// complement of the homotopy).
    pub fn sigma(&self) -> Self {
        if self.degree != 0 {
            return self.map(|a| WeylElement::zero(a.dim(), a.budget()));
        }
        self.map(|a| a.filter(WeylKey::is_central))
    }

    /// Central part of a 0-form.
    pub fn central_part(&self) -> LambdaPoly {
        self.scalar().central_part()
    }

    /// Base exterior derivative `Σ_i dx^i ∧ ∂_{x^i}` acting on coefficients.
    pub fn exterior_d(&self) -> Result<Self, WeylError> {
        let mut out = Self::zero(self.dim, self.budget, self.degree + 1)?;
        for (idx, a) in &self.comps {
            for i in 0..self.dim {
                if idx.contains(&i) {
                    continue;
                }
                let mut j = vec![i];
                j.extend_from_slice(idx);
                out.add_component(j, &a.x_diff(i));
            }
        }
        Ok(out)
    }

    /// `Σ_i dx^i ∧ op_i(·)` for a family of fiberwise operators.
    pub fn d_with<F: Fn(usize, &WeylElement) -> WeylElement>(&self, op: F) -> Result<Self, WeylError> {
        let mut out = Self::zero(self.dim, self.budget, self.degree + 1)?;
        for (idx, a) in &self.comps {
            for i in 0..self.dim {
                if idx.contains(&i) {
                    continue;
                }
                let mut j = vec![i];
                j.extend_from_slice(idx);
                out.add_component(j, &op(i, a));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for WeylForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(idx, a)| {
                if idx.is_empty() {
                    format!("[{a}]")
                } else {
                    let dx: Vec<String> = idx.iter().map(|k| format!("dx{}", k + 1)).collect();
                    format!("[{a}] {}", dx.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
