//! The formal Weyl bundle over a chart: fiber algebra, fiberwise products,
//! the Koszul differential δ with its homotopy δ⁻¹, and covariant derivatives.

mod covariant;
mod element;
mod form;
mod ordering;

pub use covariant::{Connection, PolyMatrix};
pub use element::{WeylElement, WeylKey};
pub use form::WeylForm;
pub use ordering::{OrderingMode, OrderingSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degree budget mismatch: {left} vs {right}")]
    BudgetMismatch { left: u32, right: u32 },
    #[error("form degree {degree} exceeds chart dimension {dim}")]
    FormDegree { degree: usize, dim: usize },
    #[error("form degree mismatch: {left} vs {right}")]
    FormDegreeMismatch { left: usize, right: usize },
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
}
