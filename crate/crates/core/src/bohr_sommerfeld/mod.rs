//! Action integrals over loops, Maslov indices and Bohr-Sommerfeld spectra.
//! Everything is exact except the Maslov winding, which accumulates a
//! floating-point phase and rounds it under a residual guard.

mod maslov;
mod path;
mod pi;
mod spectrum;

pub use maslov::{maslov_from_gauge, maslov_winding, tangent_frame, GaugeReport, WindingReport, RESIDUAL_LIMIT};
pub use path::{liouville_integral, LoopPath, Segment, SegmentKind};
pub use pi::PiPoly;
pub use spectrum::{bs_spectrum, ActionFamily, BsProblem, SpectralValue, DEFAULT_MASLOV_WEIGHT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("path has no segments")]
    EmptyPath,
    #[error("segment {segment} does not start where the previous one ends")]
    Discontinuous { segment: usize },
    #[error("path is not closed")]
    OpenPath,
    #[error("reparametrization must fix 0 and 1")]
    BadReparametrization,
    #[error("expected a 1-form, got degree {degree}")]
    NotAOneForm { degree: usize },
    #[error("1-form is not closed: d alpha = {witness}")]
    NotClosedForm { witness: String },
    #[error("frame is singular at t = {t}")]
    SingularFrame { t: f64 },
    #[error("phase refinement did not converge near t = {t}")]
    NonConvergent { t: f64 },
    #[error("winding residual {residual} exceeds the rounding guard")]
    ResidualTooLarge { residual: f64 },
    #[error("action is not strictly monotone in E")]
    NonMonotone,
    #[error("empty search window")]
    EmptyWindow,
    #[error("unsupported: {0}")]
    Unsupported(String),
}
