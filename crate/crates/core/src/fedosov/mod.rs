//! The Fedosov construction on a chart: curvature, the connection form `γ`,
//! the lift `τ` of functions to flat sections, and the resulting star
//! product with its bidifferential coefficients.

mod bidiff;
mod curvature;
mod solve;
mod star;
mod tau;

pub use curvature::compute_curvature;
pub use bidiff::{extract_bidiff, BidiffTable};
pub use solve::{omega_factor, solve_gamma, FedosovSolution};
pub use star::{FormalProduct, StarProduct};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FedosovError {
    #[error("degree budget {budget} is too small; at least {needed} is required")]
    BudgetTooSmall { budget: u32, needed: u32 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("order {requested} exceeds the product's lambda order {available}")]
    OrderTooHigh { requested: u32, available: u32 },
}
