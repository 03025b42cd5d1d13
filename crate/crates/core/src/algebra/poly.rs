//! Sparse multivariate polynomials over ℚ(i) in chart coordinates `x1..x_d`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{AlgebraError, GaussRational, Rational};

/// Exponent vector, one entry per coordinate.
pub type Monomial = Vec<u32>;

pub fn monomial_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Polynomial with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChartPoly {
    dim: usize,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl ChartPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: GaussRational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussRational::one())
    }

    /// The coordinate function `x_{axis+1}`.
    pub fn var(dim: usize, axis: usize) -> Self {
        assert!(axis < dim, "axis {axis} out of range for dimension {dim}");
        let mut m = vec![0; dim];
        m[axis] = 1;
        Self::monomial(m, GaussRational::one())
    }

    pub fn monomial(exps: Monomial, c: GaussRational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussRational)>>(dim: usize, it: I) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in it {
            assert_eq!(m.len(), dim, "monomial length mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Constant term.
    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&vec![0; self.dim])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| monomial_degree(m) == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| monomial_degree(m)).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRational) {
        debug_assert_eq!(m.len(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        out.add_assign_poly(other);
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self += other`; panics on dimension mismatch.
    pub fn add_assign_poly(&mut self, other: &Self) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &GaussRational) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn sub_assign_poly(&mut self, other: &Self) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c);
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative along `axis`.
    pub fn diff(&self, axis: usize) -> Result<Self, AlgebraError> {
        if axis >= self.dim {
            return Err(AlgebraError::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if m[axis] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            let e = m2[axis];
            m2[axis] -= 1;
            out.add_term(m2, c.scale_int(e as i64));
        }
        Ok(out)
    }

    /// Applies `∂^exps`.
    pub fn diff_multi(&self, exps: &[u32]) -> Result<Self, AlgebraError> {
        let mut p = self.clone();
        for (axis, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                if p.is_zero() {
                    return Ok(p);
                }
                p = p.diff(axis)?;
            }
        }
        Ok(p)
    }

    /// Substitutes 0 for every coordinate in `axes`.
    pub fn restrict(&self, axes: &[usize]) -> Result<Self, AlgebraError> {
        for &a in axes {
            if a >= self.dim {
                return Err(AlgebraError::AxisOutOfRange {
                    axis: a,
                    dim: self.dim,
                });
            }
        }
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if axes.iter().all(|&a| m[a] == 0) {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Keeps only monomials for which `keep` holds.
    pub fn filter_terms<F: Fn(&[u32]) -> bool>(&self, keep: F) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rescales every monomial by `f(monomial)`.
    pub fn map_coeffs<F: Fn(&[u32], &GaussRational) -> GaussRational>(&self, f: F) -> Self {
        Self::from_terms(
            self.dim,
            self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))),
        )
    }

    /// Substitutes `x_k ↦ t·x_k` for all k and returns the coefficients of
    /// each power of `t`, i.e. the homogeneous components by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, ChartPoly> {
        let mut out: BTreeMap<u32, ChartPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(monomial_degree(m))
                .or_insert_with(|| ChartPoly::zero(self.dim))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Composition `p(q_1, ..., q_d)` where the `q_k` may live in a
    /// different number of variables.
    pub fn compose(&self, subs: &[ChartPoly]) -> Result<ChartPoly, AlgebraError> {
        if subs.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: subs.len(),
            });
        }
        let target = subs.first().map(|s| s.dim).unwrap_or(0);
        let mut out = ChartPoly::zero(target);
        let mut powers: Vec<Vec<ChartPoly>> = subs.iter().map(|s| vec![ChartPoly::one(s.dim)]).collect();
        for (m, c) in &self.terms {
            let mut term = ChartPoly::constant(target, c.clone());
            for (k, &e) in m.iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().unwrap() * &subs[k];
                    powers[k].push(next);
                }
                term = &term * &powers[k][e as usize];
            }
            out.add_assign_poly(&term);
        }
        Ok(out)
    }

    /// Numeric evaluation at a real point.
    pub fn eval_f64(&self, point: &[f64]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, c) in &self.terms {
            let mut v = 1.0;
            for (x, &e) in point.iter().zip(m) {
                v *= x.powi(e as i32);
            }
            let (cr, ci) = c.to_f64_pair();
            re += cr * v;
            im += ci * v;
        }
        (re, im)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[GaussRational]) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    v = &v * &x.pow(e);
                }
            }
            acc += &v;
        }
        acc
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&GaussRational::real(r.clone()))
    }

    /// Formats using `prefix1`, `prefix2`, ... as variable names.
    pub fn format_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    if e == 1 {
                        names(k)
                    } else {
                        format!("{}^{}", names(k), e)
                    }
                })
                .collect();
            let (neg, body) = coeff_token(c);
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match (body, vars.is_empty()) {
                (None, true) => s.push('1'),
                (None, false) => s.push_str(&vars.join("*")),
                (Some(b), true) => s.push_str(&b),
                (Some(b), false) => {
                    s.push_str(&b);
                    s.push('*');
                    s.push_str(&vars.join("*"));
                }
            }
        }
        s
    }
}

/// Splits a coefficient into a leading sign and a body that parses back
/// under the literal grammar; `None` body means unit magnitude.
fn coeff_token(c: &GaussRational) -> (bool, Option<String>) {
    let rat = |r: &Rational| r.to_string();
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let a = c.re.abs();
        return (neg, if a.is_one() { None } else { Some(rat(&a)) });
    }
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        let a = c.im.abs();
        return (neg, Some(if a.is_one() { "i".into() } else { format!("{}*i", rat(&a)) }));
    }
    let sign = if c.im.is_negative() { "-" } else { "+" };
    (false, Some(format!("({} {} {}*i)", rat(&c.re), sign, rat(&c.im.abs()))))
}

impl fmt::Display for ChartPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|k| format!("x{}", k + 1)))
    }
}

impl Serialize for ChartPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> std::ops::Add<&'a ChartPoly> for &'a ChartPoly {
    type Output = ChartPoly;
    fn add(self, o: &ChartPoly) -> ChartPoly {
        let mut out = self.clone();
        out.add_assign_poly(o);
        out
    }
}

impl<'a> std::ops::Sub<&'a ChartPoly> for &'a ChartPoly {
    type Output = ChartPoly;
    fn sub(self, o: &ChartPoly) -> ChartPoly {
        let mut out = self.clone();
        out.sub_assign_poly(o);
        out
    }
}

impl<'a> std::ops::Mul<&'a ChartPoly> for &'a ChartPoly {
    type Output = ChartPoly;
    fn mul(self, o: &ChartPoly) -> ChartPoly {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        self.mul_unchecked(o)
    }
}

impl std::ops::Neg for &ChartPoly {
    type Output = ChartPoly;
    fn neg(self) -> ChartPoly {
        self.scale(&GaussRational::from_int(-1))
    }
}
