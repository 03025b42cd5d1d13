//! Products adapted to the Lagrangian `L = {p = 0}`: the ideal scan, the
//! induced representation on functions on `L`, equivalences between
//! adapted products and holonomies of closed 1-forms on `L`.

mod equivalence;
mod holonomy;
mod ideal;
mod quotient;

pub use equivalence::{
    alpha_scale, alpha_vector_field, equivalence_step, EquivalenceCertificate, EquivalenceKind, EquivalenceMap,
    EquivalenceStep, TransportedProduct,
};
pub use holonomy::{formal_exp_i, holonomy_twist, HolonomyTwist};
pub use ideal::{verify_ideal_preservation, IdealVerdict, IdealWitness};
pub use quotient::{GeneratorNormalization, QuotientModule, GENERATOR_NORMALIZATION};

use crate::algebra::{AlgebraError, PolyForm};
use crate::bohr_sommerfeld::BsError;
use crate::fedosov::FedosovError;
use crate::hochschild::HochschildError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AdaptedError {
    #[error("product does not preserve the ideal of L: {witness}")]
    NotIdealPreserving { witness: String },
    #[error("{value} depends on the fiber coordinates")]
    NotOnLagrangian { value: String },
    #[error("adapted-inequivalent at order {order}: restriction to L is {obstruction}")]
    AdaptedInequivalent { order: u32, obstruction: PolyForm },
    #[error("equivalence generator at lambda^{power} is not a formal deformation of the identity")]
    NotFormal { power: u32 },
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Product(#[from] FedosovError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Path(#[from] BsError),
}

impl AdaptedError {
    fn into_product_error(self) -> FedosovError {
        match self {
            AdaptedError::Product(e) | AdaptedError::Hochschild(HochschildError::Product(e)) => e,
            AdaptedError::Hochschild(HochschildError::DimensionMismatch { left, right })
            | AdaptedError::Algebra(AlgebraError::DimensionMismatch { left, right }) => {
                FedosovError::DimensionMismatch { left, right }
            }
            other => panic!("unexpected error while transporting a product: {other}"),
        }
    }
}
