//! Exact scalar and polynomial arithmetic.

mod forms;
mod gauss;
mod lambda;
pub mod matrix;
pub mod parse;
mod poly;
mod rational;

pub use forms::{sort_with_sign, PolyForm};
pub use gauss::{parse_rational, GaussRational};
pub use matrix::GaussMatrix;
pub use lambda::LambdaPoly;
pub use parse::{parse_chart_poly, parse_scalar, LiteralError};
pub use poly::{monomial_degree, ChartPoly, Monomial};
pub use rational::Rational;


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
}

/// All monomials in `dim` variables of total degree at most `max_deg`,
/// ordered by degree and then lexicographically.
pub fn monomials_up_to(dim: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let mut cur = vec![0u32; dim];
        fill_degree(dim, d, 0, &mut cur, &mut out);
    }
    out
}

fn fill_degree(dim: usize, remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if dim == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == dim - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_degree(dim, remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}
