//! Truncated formal power series in λ with polynomial coefficients.

use std::fmt;

use serde::{Serialize, Serializer};

use super::{AlgebraError, ChartPoly, GaussRational};

/// `Σ_{k ≤ N} λ^k f_k`; everything of order `λ^{N+1}` and above is dropped.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LambdaPoly {
    dim: usize,
    coeffs: Vec<ChartPoly>,
}

impl LambdaPoly {
    pub fn zero(dim: usize, order: u32) -> Self {
        Self {
            dim,
            coeffs: vec![ChartPoly::zero(dim); order as usize + 1],
        }
    }

    /// `f` placed at λ⁰.
    pub fn from_poly(f: ChartPoly, order: u32) -> Self {
        let mut out = Self::zero(f.dim(), order);
        out.coeffs[0] = f;
        out
    }

    /// Builds from a list of coefficients; entries past `order` are dropped.
    pub fn from_coeffs(dim: usize, order: u32, coeffs: Vec<ChartPoly>) -> Self {
        let mut out = Self::zero(dim, order);
        for (k, c) in coeffs.into_iter().enumerate() {
            if k <= order as usize {
                assert_eq!(c.dim(), dim, "dimension mismatch");
                out.coeffs[k] = c;
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, k: u32) -> &ChartPoly {
        &self.coeffs[k as usize]
    }

    pub fn coeffs(&self) -> &[ChartPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: u32, p: ChartPoly) {
        if (k as usize) < self.coeffs.len() {
            self.coeffs[k as usize] = p;
        }
    }

    pub fn add_to_coeff(&mut self, k: u32, p: &ChartPoly) {
        if (k as usize) < self.coeffs.len() {
            self.coeffs[k as usize].add_assign_poly(p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ChartPoly::is_zero)
    }

    /// Lowest λ-power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| k as u32)
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.order() != other.order() {
            return Err(AlgebraError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_assign_poly(b);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.sub_assign_poly(b);
        }
        Ok(out)
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut out = Self::zero(self.dim, self.order());
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i + j].add_assign_poly(&prod);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplies by `λ^k`, dropping what falls past the order.
    pub fn shift(&self, k: u32) -> Self {
        let mut out = Self::zero(self.dim, self.order());
        for (j, c) in self.coeffs.iter().enumerate() {
            let t = j + k as usize;
            if t < out.coeffs.len() {
                out.coeffs[t] = c.clone();
            }
        }
        out
    }

    /// Changes the truncation order (padding with zeros or truncating).
    pub fn with_order(&self, order: u32) -> Self {
        Self::from_coeffs(self.dim, order, self.coeffs.clone())
    }

    /// Applies `f` to every coefficient.
    pub fn map<F: FnMut(&ChartPoly) -> Result<ChartPoly, AlgebraError>>(
        &self,
        mut f: F,
    ) -> Result<Self, AlgebraError> {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            dim: self.dim,
            coeffs,
        })
    }

    pub fn diff(&self, axis: usize) -> Result<Self, AlgebraError> {
        self.map(|c| c.diff(axis))
    }

    pub fn restrict(&self, axes: &[usize]) -> Result<Self, AlgebraError> {
        self.map(|c| c.restrict(axes))
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("lambda*({c})"),
                _ => format!("lambda^{k}*({c})"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for LambdaPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}
