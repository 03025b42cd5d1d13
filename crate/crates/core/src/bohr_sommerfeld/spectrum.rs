use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::parse::parse_flat;
use crate::algebra::{ChartPoly, GaussRational, Rational};

use super::{BsError, PiPoly};

const E: usize = 0;
const PI: usize = 1;

/// An action `A(E)` given as a polynomial in `E` and `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionFamily(ChartPoly);

impl ActionFamily {
    /// Parses e.g. `2*pi*E` or `pi*(E - 1/2)`.
    pub fn parse(text: &str) -> Result<Self, BsError> {
        let resolve = |name: &str| match name {
            "E" => Some(E),
            "pi" => Some(PI),
            _ => None,
        };
        let flat = parse_flat(text, 2, &resolve).map_err(|e| BsError::Unsupported(format!("action: {e}")))?;
        Ok(Self(ChartPoly::from_terms(2, flat)))
    }

    /// `A(E) = π (slope·E + intercept)`.
    fn affine(&self) -> Result<(Rational, Rational), BsError> {
        let mut slope = Rational::zero();
        let mut intercept = Rational::zero();
        for (m, c) in self.0.terms() {
            if m[PI] != 1 || !c.is_real() {
                return Err(BsError::Unsupported(format!(
                    "action {self} is not pi times a real polynomial in E"
                )));
            }
            match m[E] {
                0 => intercept = c.re.clone(),
                1 => slope = c.re.clone(),
                _ => {
                    return Err(BsError::Unsupported(format!(
                        "action {self} is not affine in E; exact spectra are only produced for affine families"
                    )))
                }
            }
        }
        if slope.is_zero() {
            return Err(BsError::NonMonotone);
        }
        Ok((slope, intercept))
    }

    pub fn eval(&self, energy: &Rational) -> PiPoly {
        let v = self
            .0
            .compose(&[
                ChartPoly::constant(1, GaussRational::real(energy.clone())),
                ChartPoly::var(1, 0),
            ])
            .expect("two variables");
        let mut out = PiPoly::zero();
        for (m, c) in v.terms() {
            out = &out + &PiPoly::term(c.clone(), m[0]);
        }
        out
    }
}

impl fmt::Display for ActionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |k: usize| if k == E { "E".to_string() } else { "pi".to_string() };
        write!(f, "{}", self.0.format_with(&names))
    }
}

impl Serialize for ActionFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One basis loop of a one-parameter family: the condition is
/// `A(E)/(2πλ) − c_μ μ + κ ∈ ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BsProblem {
    pub action: ActionFamily,
    pub maslov: i64,
    pub kappa: Rational,
    pub maslov_weight: Rational,
    pub lambda: Rational,
}

pub const DEFAULT_MASLOV_WEIGHT: (i64, i64) = (1, 4);

impl BsProblem {
    pub fn new(action: ActionFamily, maslov: i64, kappa: GaussRational, lambda: Rational) -> Result<Self, BsError> {
        if !kappa.is_real() {
            return Err(BsError::Unsupported(format!("kappa {kappa} is not real")));
        }
        if lambda.is_negative() || lambda.is_zero() {
            return Err(BsError::Unsupported(format!("lambda {lambda} is not positive")));
        }
        Ok(Self {
            action,
            maslov,
            kappa: kappa.re,
            maslov_weight: Rational::new(DEFAULT_MASLOV_WEIGHT.0, DEFAULT_MASLOV_WEIGHT.1),
            lambda,
        })
    }

    pub fn with_maslov_weight(mut self, c: Rational) -> Self {
        self.maslov_weight = c;
        self
    }

    fn shift(&self) -> Rational {
        &(&self.maslov_weight * &Rational::from_integer(self.maslov)) - &self.kappa
    }

    /// `A(E)/(2πλ) − c_μ μ + κ`, exact.
    pub fn condition(&self, energy: &Rational) -> Result<Rational, BsError> {
        let (slope, intercept) = self.action.affine()?;
        let a_over_pi = &(&slope * energy) + &intercept;
        Ok(&(&a_over_pi / &(&Rational::from_integer(2) * &self.lambda)) - &self.shift())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralValue {
    pub n: i64,
    pub energy: Rational,
}

/// Every `E` in `[lo, hi]` satisfying the condition, in increasing order.
pub fn bs_spectrum(problem: &BsProblem, lo: &Rational, hi: &Rational) -> Result<Vec<SpectralValue>, BsError> {
    if lo > hi {
        return Err(BsError::EmptyWindow);
    }
    let (slope, intercept) = problem.action.affine()?;
    let two_lambda = &Rational::from_integer(2) * &problem.lambda;
    let shift = problem.shift();
    let n_at = |e: &Rational| &(&(&(&slope * e) + &intercept) / &two_lambda) - &shift;
    let (a, b) = (n_at(lo), n_at(hi));
    let (n_lo, n_hi) = if a <= b { (a.ceil(), b.floor()) } else { (b.ceil(), a.floor()) };
    let to_i64 = |n: num_bigint::BigInt| n.to_i64().ok_or(BsError::Unsupported("branch index overflows i64".into()));
    let (n_lo, n_hi) = (to_i64(n_lo)?, to_i64(n_hi)?);
    let mut out: Vec<SpectralValue> = (n_lo..=n_hi)
        .map(|n| {
            let target = &two_lambda * &(&Rational::from_integer(n) + &shift);
            SpectralValue {
                n,
                energy: &(&target - &intercept) / &slope,
            }
        })
        .collect();
    out.sort_by(|x, y| x.energy.cmp(&y.energy));
    Ok(out)
}
