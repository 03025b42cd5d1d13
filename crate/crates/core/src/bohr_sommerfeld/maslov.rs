use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{BsError, LoopPath};

/// Largest phase step accepted between neighbouring samples.
const MAX_STEP: f64 = 0.25;
const BASE_SAMPLES: usize = 256;
const MAX_DEPTH: u32 = 40;
const SINGULAR: f64 = 1e-12;
/// Rounding guard on `turns`.
pub const RESIDUAL_LIMIT: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindingReport {
    pub index: i64,
    /// Accumulated phase over `2π`, before rounding.
    pub turns: f64,
    pub residual: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeReport {
    /// `(i/2π) ∮ tr(g⁻¹ dg)`.
    pub trace_integral: f64,
    pub rounded: i64,
    pub residual: f64,
    /// `−2 · rounded`, the value comparable with the `det²` winding.
    pub maslov: i64,
}

struct Phase {
    total: f64,
    samples: usize,
}

fn refine<F>(f: &F, a: f64, b: f64, ua: Complex64, ub: Complex64, depth: u32, acc: &mut Phase) -> Result<(), BsError>
where
    F: Fn(f64) -> Result<Complex64, BsError>,
{
    let step = (ub / ua).arg();
    if step.abs() <= MAX_STEP {
        acc.total += step;
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(BsError::NonConvergent { t: a });
    }
    let m = 0.5 * (a + b);
    let um = f(m)?;
    acc.samples += 1;
    refine(f, a, m, ua, um, depth + 1, acc)?;
    refine(f, m, b, um, ub, depth + 1, acc)
}

/// Continuous change of `arg u(t)` over `[0, 1]`, in turns.
fn accumulate<F>(f: &F, base: usize) -> Result<Phase, BsError>
where
    F: Fn(f64) -> Result<Complex64, BsError>,
{
    let mut acc = Phase { total: 0.0, samples: base + 1 };
    let mut prev = f(0.0)?;
    for i in 1..=base {
        let (a, b) = ((i - 1) as f64 / base as f64, i as f64 / base as f64);
        let next = f(b)?;
        refine(f, a, b, prev, next, 0, &mut acc)?;
        prev = next;
    }
    acc.total /= 2.0 * std::f64::consts::PI;
    Ok(acc)
}

/// Accumulates at two sampling densities and insists they agree.
fn winding<F>(f: &F) -> Result<(f64, i64, f64, usize), BsError>
where
    F: Fn(f64) -> Result<Complex64, BsError>,
{
    let coarse = accumulate(f, BASE_SAMPLES)?;
    let fine = accumulate(f, 2 * BASE_SAMPLES)?;
    let index = fine.total.round() as i64;
    let residual = (fine.total - index as f64).abs().max((coarse.total - fine.total).abs());
    if residual > RESIDUAL_LIMIT {
        return Err(BsError::ResidualTooLarge { residual });
    }
    Ok((fine.total, index, residual, fine.samples))
}

fn det(m: &DMatrix<Complex64>, t: f64) -> Result<Complex64, BsError> {
    let d = m.clone().determinant();
    if d.norm() < SINGULAR {
        return Err(BsError::SingularFrame { t });
    }
    Ok(d)
}

/// Maslov index of a closed path of Lagrangian frames: the degree of
/// `det²(X + iY) / |det(X + iY)|²`, where the frame is the `2n × n` matrix
/// with `X` on top.
pub fn maslov_winding<F: Fn(f64) -> DMatrix<f64>>(frame: F) -> Result<WindingReport, BsError> {
    let unit = |t: f64| {
        let m = frame(t);
        let n = m.ncols();
        if m.nrows() != 2 * n {
            return Err(BsError::DimensionMismatch {
                left: 2 * n,
                right: m.nrows(),
            });
        }
        let k = DMatrix::from_fn(n, n, |i, j| Complex64::new(m[(i, j)], m[(n + i, j)]));
        let d = det(&k, t)?;
        Ok((d * d) / d.norm_sqr())
    };
    let (turns, index, residual, samples) = winding(&unit)?;
    Ok(WindingReport {
        index,
        turns,
        residual,
        samples,
    })
}

/// `(i/2π) ∮ tr(g⁻¹ dg)` for a closed path of invertible matrices, computed
/// through `tr(g⁻¹ dg) = d log det g`.
pub fn maslov_from_gauge<F: Fn(f64) -> DMatrix<Complex64>>(g: F) -> Result<GaugeReport, BsError> {
    let phase = |t: f64| {
        let d = det(&g(t), t)?;
        Ok(d / d.norm())
    };
    let (turns, _, _, _) = winding(&phase)?;
    let trace_integral = -turns;
    let rounded = trace_integral.round() as i64;
    Ok(GaugeReport {
        trace_integral,
        rounded,
        residual: (trace_integral - rounded as f64).abs(),
        maslov: -2 * rounded,
    })
}

/// Tangent line frame of a planar loop, a path of Lagrangian subspaces of
/// the 2-dimensional chart.
pub fn tangent_frame(path: &LoopPath) -> Result<impl Fn(f64) -> DMatrix<f64> + '_, BsError> {
    if path.dim() != 2 {
        return Err(BsError::DimensionMismatch {
            left: 2,
            right: path.dim(),
        });
    }
    if !path.is_closed() {
        return Err(BsError::OpenPath);
    }
    Ok(move |t: f64| {
        let v = path.velocity_f64(t);
        DMatrix::from_column_slice(2, 1, &v)
    })
}
