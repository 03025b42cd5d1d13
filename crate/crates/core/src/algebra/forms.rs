//! Scalar differential forms with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{AlgebraError, ChartPoly, GaussRational};

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// `Σ_I f_I dx^I` with strictly increasing 0-based index lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyForm {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, ChartPoly>,
}

impl PolyForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn function(f: ChartPoly) -> Self {
        let mut out = Self::zero(f.dim(), 0);
        out.add_component(vec![], &f);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &ChartPoly)> {
        self.comps.iter()
    }

    pub fn component(&self, idx: &[usize]) -> ChartPoly {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => ChartPoly::zero(self.dim),
            Some(s) => self
                .comps
                .get(&sorted)
                .map(|c| c.scale(&GaussRational::from_int(s)))
                .unwrap_or_else(|| ChartPoly::zero(self.dim)),
        }
    }

    /// Adds `f dx^idx`, reordering `idx` with the permutation sign.
    pub fn add_component(&mut self, mut idx: Vec<usize>, f: &ChartPoly) {
        debug_assert_eq!(idx.len(), self.degree);
        let Some(sign) = sort_with_sign(&mut idx) else {
            return;
        };
        if f.is_zero() {
            return;
        }
        let slot = self
            .comps
            .entry(idx.clone())
            .or_insert_with(|| ChartPoly::zero(self.dim));
        slot.add_scaled(f, &GaussRational::from_int(sign));
        if slot.is_zero() {
            self.comps.remove(&idx);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        assert_eq!(self.degree, other.degree, "form degree mismatch");
        let mut out = self.clone();
        for (i, f) in &other.comps {
            out.add_component(i.clone(), f);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn map<F: Fn(&ChartPoly) -> ChartPoly>(&self, f: F) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (i, c) in &self.comps {
            out.add_component(i.clone(), &f(c));
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + 1);
        for (idx, f) in &self.comps {
            for k in 0..self.dim {
                if idx.contains(&k) {
                    continue;
                }
                let mut j = vec![k];
                j.extend_from_slice(idx);
                out.add_component(j, &f.diff(k).expect("axis in range"));
            }
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (i, f) in &self.comps {
            for (j, g) in &other.comps {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_component(idx, &(f * g));
            }
        }
        out
    }

    /// Pullback to the coordinate subspace `{x_a = 0, a ∈ axes}`: drops every
    /// component containing a `dx^a` and restricts coefficients.
    pub fn pullback_to_zero_set(&self, axes: &[usize]) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, f) in &self.comps {
            if idx.iter().any(|k| axes.contains(k)) {
                continue;
            }
            out.add_component(idx.clone(), &f.restrict(axes).expect("axes in range"));
        }
        out
    }

    /// Restricts coefficients to `{x_a = 0, a ∈ axes}` keeping all components.
    pub fn restrict_coeffs(&self, axes: &[usize]) -> Self {
        self.map(|f| f.restrict(axes).expect("axes in range"))
    }

    /// Radial homotopy operator `h` with `dh + hd = id` on forms of positive
    /// degree: `h(f dx^I) = Σ_m (−1)^m ∫₀¹ t^{p−1} f(tx) dt · x^{i_m} dx^{I∖i_m}`.
    pub fn radial_homotopy(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(self.dim, 0);
        }
        let p = self.degree as i64;
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, f) in &self.comps {
            let scaled = f.map_coeffs(|m, c| {
                let deg: u32 = m.iter().sum();
                c * &GaussRational::from_frac(1, deg as i64 + p)
            });
            for (m, &k) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(m);
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let g = (&scaled * &ChartPoly::var(self.dim, k)).scale(&GaussRational::from_int(sign));
                out.add_component(rest, &g);
            }
        }
        out
    }

    /// Interior product with the vector field `Σ_a v^a ∂_a`.
    pub fn interior(&self, v: &[ChartPoly]) -> Self {
        if self.degree == 0 {
            return Self::zero(self.dim, 0);
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, f) in &self.comps {
            for (m, &k) in idx.iter().enumerate() {
                if v[k].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(m);
                let sign = if m % 2 == 0 { 1 } else { -1 };
                out.add_component(rest, &(f * &v[k]).scale(&GaussRational::from_int(sign)));
            }
        }
        out
    }

    pub fn format_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(idx, f)| {
                if idx.is_empty() {
                    format!("({f})")
                } else {
                    let dx: Vec<String> = idx.iter().map(|&k| format!("d{}", names(k))).collect();
                    format!("({f})*{}", dx.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|k| format!("x{}", k + 1)))
    }
}

impl Serialize for PolyForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(dim: usize, k: usize) -> ChartPoly {
        ChartPoly::var(dim, k)
    }

    #[test]
    fn d_squared_vanishes() {
        let mut a = PolyForm::zero(3, 1);
        a.add_component(vec![1], &(&x(3, 0) * &x(3, 2)));
        a.add_component(vec![0], &x(3, 1).pow(3));
        assert!(a.d().d().is_zero());
    }

    #[test]
    fn homotopy_recovers_closed_forms() {
        // Ω = (x1 + x2²) dx1∧dx2 is closed in dim 2
        let mut om = PolyForm::zero(2, 2);
        om.add_component(vec![0, 1], &(&x(2, 0) + &x(2, 1).pow(2)));
        assert_eq!(om.radial_homotopy().d(), om);
    }

    #[test]
    fn closedness_detects_x1_dx2_dx3() {
        let mut om = PolyForm::zero(4, 2);
        om.add_component(vec![1, 2], &x(4, 0));
        assert_eq!(om.d().component(&[0, 1, 2]), ChartPoly::one(4));
    }
}
