use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{ChartPoly, GaussRational, PolyForm};

use super::{BsError, PiPoly};

// Variables of the ring segment components live in: the parameter `t`,
// `z = e^{2πit}`, `w = z⁻¹` and `π`.
const T: usize = 0;
const Z: usize = 1;
const W: usize = 2;
const PI: usize = 3;
const RING: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    /// Components polynomial in `t` with coefficients in `Q(i)[π]`.
    Polynomial,
    /// Components trigonometric polynomials in `2πt`, i.e. Laurent
    /// polynomials in `e^{2πit}`; such a segment closes on itself.
    Trigonometric,
}

/// A map `[0, 1] → chart`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    kind: SegmentKind,
    coords: Vec<ChartPoly>,
}

fn lift(c: &PiPoly) -> ChartPoly {
    c.embed(RING, PI)
}

fn ring_var(axis: usize) -> ChartPoly {
    ChartPoly::var(RING, axis)
}

impl Segment {
    /// `x_a(t) = Σ_j coeffs[a][j] t^j`.
    pub fn polynomial(coeffs: &[Vec<PiPoly>]) -> Self {
        let coords = coeffs
            .iter()
            .map(|cs| {
                let mut x = ChartPoly::zero(RING);
                for (j, c) in cs.iter().enumerate() {
                    x.add_assign_poly(&(&lift(c) * &ring_var(T).pow(j as u32)));
                }
                x
            })
            .collect();
        Self {
            kind: SegmentKind::Polynomial,
            coords,
        }
    }

    /// Straight segment from `a` to `b`.
    pub fn line(a: &[PiPoly], b: &[PiPoly]) -> Self {
        let coeffs: Vec<Vec<PiPoly>> = a.iter().zip(b).map(|(x, y)| vec![x.clone(), y - x]).collect();
        Self::polynomial(&coeffs)
    }

    /// `x_a(t) = Σ_k coeffs[a][k] e^{2πikt}`.
    pub fn trigonometric(coeffs: &[BTreeMap<i64, PiPoly>]) -> Self {
        let coords = coeffs
            .iter()
            .map(|cs| {
                let mut x = ChartPoly::zero(RING);
                for (&k, c) in cs {
                    let e = if k >= 0 { ring_var(Z).pow(k as u32) } else { ring_var(W).pow((-k) as u32) };
                    x.add_assign_poly(&(&lift(c) * &e));
                }
                x
            })
            .collect();
        Self {
            kind: SegmentKind::Trigonometric,
            coords,
        }
    }

    /// `x_i = c_i + r cos(2πmt)`, `x_j = c_j + r sin(2πmt)`, other coordinates
    /// fixed at the center.
    pub fn circle(center: &[PiPoly], (i, j): (usize, usize), radius: &PiPoly, turns: i64) -> Self {
        let mut coeffs: Vec<BTreeMap<i64, PiPoly>> =
            center.iter().map(|c| BTreeMap::from([(0, c.clone())])).collect();
        let half = GaussRational::from_frac(1, 2);
        let r2 = radius.scale(&half);
        let ri = radius.scale(&(&half * &GaussRational::i()));
        coeffs[i].insert(turns, r2.clone());
        coeffs[i].insert(-turns, r2);
        coeffs[j].insert(turns, -&ri);
        coeffs[j].insert(-turns, ri);
        Self::trigonometric(&coeffs)
    }

    pub fn kind(&self) -> SegmentKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn eval_exact(&self, t: u32) -> Vec<PiPoly> {
        let subs = match self.kind {
            SegmentKind::Polynomial => [
                ChartPoly::constant(RING, GaussRational::from_int(t as i64)),
                ring_var(Z),
                ring_var(W),
                ring_var(PI),
            ],
            SegmentKind::Trigonometric => [
                ring_var(T),
                ChartPoly::one(RING),
                ChartPoly::one(RING),
                ring_var(PI),
            ],
        };
        self.coords
            .iter()
            .map(|x| PiPoly::from_axis(&x.compose(&subs).expect("ring arity"), PI).expect("pure pi value"))
            .collect()
    }

    pub fn start(&self) -> Vec<PiPoly> {
        self.eval_exact(0)
    }

    pub fn end(&self) -> Vec<PiPoly> {
        self.eval_exact(1)
    }

    /// The same curve run backwards.
    pub fn reversed(&self) -> Self {
        let subs = match self.kind {
            SegmentKind::Polynomial => [
                &ChartPoly::one(RING) - &ring_var(T),
                ring_var(Z),
                ring_var(W),
                ring_var(PI),
            ],
            SegmentKind::Trigonometric => [ring_var(T), ring_var(W), ring_var(Z), ring_var(PI)],
        };
        self.substitute(&subs)
    }

    fn substitute(&self, subs: &[ChartPoly; 4]) -> Self {
        Self {
            kind: self.kind,
            coords: self.coords.iter().map(|x| x.compose(subs).expect("ring arity")).collect(),
        }
    }

    /// `x'(t)` in the same ring.
    fn derivative(&self) -> Vec<ChartPoly> {
        match self.kind {
            SegmentKind::Polynomial => self.coords.iter().map(|x| x.diff(T).expect("ring axis")).collect(),
            SegmentKind::Trigonometric => {
                let two_pi_i = &lift(&PiPoly::pi()).scale(&GaussRational::from_int(2)) * &ChartPoly::constant(RING, GaussRational::i());
                self.coords
                    .iter()
                    .map(|x| {
                        let euler = x.map_coeffs(|m, c| c.scale_int(m[Z] as i64 - m[W] as i64));
                        &euler * &two_pi_i
                    })
                    .collect()
            }
        }
    }

    /// `∫_0^1 θ(x(t))(x'(t)) dt`.
    fn integrate(&self, theta: &PolyForm) -> PiPoly {
        let dx = self.derivative();
        let mut integrand = ChartPoly::zero(RING);
        for (a, d) in dx.iter().enumerate() {
            let c = theta.component(&[a]);
            if c.is_zero() || d.is_zero() {
                continue;
            }
            integrand.add_assign_poly(&(&c.compose(&self.coords).expect("segment dimension") * d));
        }
        let mut out = PiPoly::zero();
        for (m, c) in integrand.terms() {
            let keep = match self.kind {
                SegmentKind::Polynomial => Some(c * &GaussRational::from_frac(1, m[T] as i64 + 1)),
                SegmentKind::Trigonometric => (m[Z] == m[W]).then(|| c.clone()),
            };
            if let Some(v) = keep {
                out = &out + &PiPoly::term(v, m[PI]);
            }
        }
        out
    }

    fn eval_complex(p: &ChartPoly, t: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t);
        let vars = [Complex64::new(t, 0.0), z, z.conj(), Complex64::new(std::f64::consts::PI, 0.0)];
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in p.terms() {
            let (re, im) = c.to_f64_pair();
            let mut term = Complex64::new(re, im);
            for (v, &e) in vars.iter().zip(m) {
                term *= v.powu(e);
            }
            acc += term;
        }
        acc
    }

    /// Real point at local parameter `t`.
    pub fn point_f64(&self, t: f64) -> Vec<f64> {
        self.coords.iter().map(|x| Self::eval_complex(x, t).re).collect()
    }

    pub fn velocity_f64(&self, t: f64) -> Vec<f64> {
        self.derivative().iter().map(|x| Self::eval_complex(x, t).re).collect()
    }
}

/// A piecewise loop or path in the chart. Coordinates listed in
/// `angle_axes` are read modulo `2π`, which is how loops on a torus model
/// close.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopPath {
    dim: usize,
    segments: Vec<Segment>,
    angle_axes: Vec<usize>,
    closed: bool,
}

/// `a − b ∈ 2πℤ`.
fn differ_by_period(a: &PiPoly, b: &PiPoly) -> bool {
    let d = a - b;
    if d.is_zero() {
        return true;
    }
    if d.degree() != Some(1) || !d.coeff(0).is_zero() {
        return false;
    }
    let c = d.coeff(1);
    c.is_real() && (&c.re * &crate::algebra::Rational::new(1, 2)).is_integer()
}

impl LoopPath {
    pub fn new(dim: usize, segments: Vec<Segment>, angle_axes: Vec<usize>) -> Result<Self, BsError> {
        if segments.is_empty() {
            return Err(BsError::EmptyPath);
        }
        for s in &segments {
            if s.dim() != dim {
                return Err(BsError::DimensionMismatch {
                    left: dim,
                    right: s.dim(),
                });
            }
        }
        let matches = |a: &[PiPoly], b: &[PiPoly]| {
            (0..dim).all(|k| if angle_axes.contains(&k) { differ_by_period(&a[k], &b[k]) } else { a[k] == b[k] })
        };
        for (i, pair) in segments.windows(2).enumerate() {
            if !matches(&pair[0].end(), &pair[1].start()) {
                return Err(BsError::Discontinuous { segment: i + 1 });
            }
        }
        let closed = matches(&segments.last().expect("nonempty").end(), &segments[0].start());
        Ok(Self {
            dim,
            segments,
            angle_axes,
            closed,
        })
    }

    /// Closed polygon through `points`, returning to the first.
    pub fn polygon(points: &[Vec<PiPoly>]) -> Result<Self, BsError> {
        let dim = points.first().map(|p| p.len()).unwrap_or(0);
        let segments = (0..points.len())
            .map(|i| Segment::line(&points[i], &points[(i + 1) % points.len()]))
            .collect();
        Self::new(dim, segments, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn angle_axes(&self) -> &[usize] {
        &self.angle_axes
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> Vec<PiPoly> {
        self.segments[0].start()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Result<Self, BsError> {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Self::new(self.dim, segments, self.angle_axes.clone())
    }

    pub fn reversed(&self) -> Self {
        let segments = self.segments.iter().rev().map(Segment::reversed).collect();
        Self::new(self.dim, segments, self.angle_axes.clone()).expect("reversal keeps continuity")
    }

    /// Reparametrizes every polynomial segment by `t ↦ s(t)`, where `s` is a
    /// polynomial with `s(0) = 0`, `s(1) = 1`.
    pub fn reparametrized(&self, s: &[GaussRational]) -> Result<Self, BsError> {
        let mut poly = ChartPoly::zero(RING);
        for (j, c) in s.iter().enumerate() {
            let mut m = vec![0; RING];
            m[T] = j as u32;
            poly.add_term(m, c.clone());
        }
        let at = |v: i64| poly.eval(&[GaussRational::from_int(v), GaussRational::zero(), GaussRational::zero(), GaussRational::zero()]);
        if !at(0).is_zero() || !at(1).is_one() {
            return Err(BsError::BadReparametrization);
        }
        let subs = [poly, ring_var(Z), ring_var(W), ring_var(PI)];
        let segments = self
            .segments
            .iter()
            .map(|seg| match seg.kind {
                SegmentKind::Polynomial => seg.substitute(&subs),
                SegmentKind::Trigonometric => seg.clone(),
            })
            .collect();
        Self::new(self.dim, segments, self.angle_axes.clone())
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let m = self.segments.len();
        let scaled = t.clamp(0.0, 1.0) * m as f64;
        let i = (scaled.floor() as usize).min(m - 1);
        (i, scaled - i as f64)
    }

    /// Point at global parameter `t ∈ [0, 1]`, segments sharing it evenly.
    pub fn point_f64(&self, t: f64) -> Vec<f64> {
        let (i, s) = self.locate(t);
        self.segments[i].point_f64(s)
    }

    pub fn velocity_f64(&self, t: f64) -> Vec<f64> {
        let (i, s) = self.locate(t);
        self.segments[i].velocity_f64(s)
    }
}

/// `∮_γ θ` for a polynomial 1-form, exact in `Q(i)[π]`.
pub fn liouville_integral(path: &LoopPath, theta: &PolyForm) -> Result<PiPoly, BsError> {
    if theta.degree() != 1 {
        return Err(BsError::NotAOneForm { degree: theta.degree() });
    }
    if theta.dim() != path.dim() {
        return Err(BsError::DimensionMismatch {
            left: path.dim(),
            right: theta.dim(),
        });
    }
    Ok(path
        .segments
        .iter()
        .fold(PiPoly::zero(), |acc, s| &acc + &s.integrate(theta)))
}
