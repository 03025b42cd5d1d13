//! The differential Hochschild complex of the polynomial algebra: cochains,
//! coboundary, Gerstenhaber bracket, associativity obstructions and the
//! antisymmetrization map to 2-forms.

mod cochain;
mod hkr;

pub use cochain::{gerstenhaber_bracket, hochschild_b, MultiDiffOp};
pub use hkr::{
    associativity_residual, form_on_hamiltonians, hkr_antisymmetrize, lichnerowicz_split, star_cochains,
    LichnerowiczSplit, SplitCertificate,
};

use crate::fedosov::FedosovError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HochschildError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("order {requested} requested but only {available} coefficients supplied")]
    MissingOrder { requested: usize, available: usize },
    #[error("Poisson matrix is degenerate")]
    DegeneratePoisson,
    #[error("products already differ at order {order}: {witness}")]
    OrdersDisagree { order: u32, witness: String },
    #[error("difference at order {order} is not a Hochschild cocycle: {witness}")]
    NotCocycle { order: u32, witness: String },
    #[error("antisymmetrized difference is not closed: {witness}")]
    NotClosed { witness: String },
    #[error(transparent)]
    Product(#[from] FedosovError),
}
