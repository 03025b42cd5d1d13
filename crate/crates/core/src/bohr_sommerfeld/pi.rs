use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::algebra::{ChartPoly, GaussRational, Rational};

/// An exact element of `Q(i)[π]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPoly(ChartPoly);

impl PiPoly {
    pub fn zero() -> Self {
        Self(ChartPoly::zero(1))
    }

    pub fn constant(c: GaussRational) -> Self {
        Self(ChartPoly::constant(1, c))
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(GaussRational::real(r))
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn pi() -> Self {
        Self(ChartPoly::var(1, 0))
    }

    /// `c · π^k`.
    pub fn term(c: GaussRational, k: u32) -> Self {
        Self(ChartPoly::monomial(vec![k], c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Coefficient of `π^k`.
    pub fn coeff(&self, k: u32) -> GaussRational {
        self.0.coeff(&[k])
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.total_degree()
    }

    pub fn as_constant(&self) -> Option<GaussRational> {
        self.0.is_constant().then(|| self.0.constant_term())
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self(self.0.scale(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self(self.0.pow(e))
    }

    /// The same polynomial in the variable `axis` of a `dim`-variable ring.
    pub(crate) fn embed(&self, dim: usize, axis: usize) -> ChartPoly {
        let mut out = ChartPoly::zero(dim);
        for (m, c) in self.0.terms() {
            let mut e = vec![0; dim];
            e[axis] = m[0];
            out.add_term(e, c.clone());
        }
        out
    }

    /// Reads back a polynomial that only involves the variable `axis`.
    pub(crate) fn from_axis(p: &ChartPoly, axis: usize) -> Option<Self> {
        let mut out = ChartPoly::zero(1);
        for (m, c) in p.terms() {
            if m.iter().enumerate().any(|(k, &e)| k != axis && e > 0) {
                return None;
            }
            out.add_term(vec![m[axis]], c.clone());
        }
        Some(Self(out))
    }

    /// Value as a complex float pair.
    pub fn to_f64(&self) -> (f64, f64) {
        self.0.eval_f64(&[std::f64::consts::PI])
    }
}

impl fmt::Display for PiPoly {
    /// `-pi`, `2*pi^2 + 1/3`, `(1+2i)*pi`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(u32, GaussRational)> = self.0.terms().map(|(m, c)| (m[0], c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out = String::new();
        for (k, c) in terms {
            let pi = match k {
                0 => String::new(),
                1 => "pi".to_string(),
                _ => format!("pi^{k}"),
            };
            let neg = c.is_real() && c.re.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            let body = if k == 0 {
                mag.to_string()
            } else if mag.is_one() {
                pi
            } else if mag.is_real() {
                format!("{mag}*{pi}")
            } else {
                format!("({mag})*{pi}")
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        }
        write!(f, "{out}")
    }
}

impl Serialize for PiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add<&'a PiPoly> for &'a PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        PiPoly(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a PiPoly> for &'a PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        PiPoly(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a PiPoly> for &'a PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        PiPoly(&self.0 * &rhs.0)
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let r = PiPoly::term(GaussRational::from_int(-4), 1);
        assert_eq!(r.to_string(), "-4*pi");
        let s = &PiPoly::term(GaussRational::from_int(2), 2) + &PiPoly::rational(Rational::new(1, 3));
        assert_eq!(s.to_string(), "2*pi^2 + 1/3");
        assert_eq!((-&PiPoly::pi()).to_string(), "-pi");
        let c = PiPoly::term(GaussRational::new(Rational::one(), Rational::from_integer(2)), 1);
        assert_eq!(c.to_string(), "(1+2i)*pi");
        assert_eq!(PiPoly::zero().to_string(), "0");
    }

    #[test]
    fn float_value() {
        let v = PiPoly::term(GaussRational::from_int(2), 1).to_f64();
        assert!((v.0 - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
