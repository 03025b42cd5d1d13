//! Exact symbolic workbench for Fedosov-type star products on symplectic
//! charts, their adaptedness to the Lagrangian subspace `{p = 0}`, the
//! induced quotient representations, and Bohr-Sommerfeld conditions.

pub mod adapted;
pub mod algebra;
pub mod bohr_sommerfeld;
pub mod fedosov;
pub mod geometry;
pub mod hochschild;
pub mod report;
pub mod weyl;
