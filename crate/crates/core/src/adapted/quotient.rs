use serde::Serialize;

use crate::algebra::{ChartPoly, LambdaPoly};
use crate::fedosov::FormalProduct;

use super::{verify_ideal_preservation, AdaptedError, IdealVerdict};

/// The representation of an ideal-preserving product on functions on
/// `L = {x_a = 0, a ∈ axes}`, `f • φ = (f ⋆ π*φ)|_L`. Functions on `L` are
/// chart polynomials independent of the `axes` coordinates, which doubles as
/// the section `π*`.
pub struct QuotientModule<'a, P: FormalProduct + ?Sized> {
    star: &'a P,
    axes: Vec<usize>,
    verdict: IdealVerdict,
}

/// How the fiber-linear generator `p_j` acts on `L`: the artifact's value and
/// the reference normalization `−2λ X`, with `ratio = ours / reference`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorNormalization {
    pub ours: &'static str,
    pub reference: &'static str,
    pub ratio: &'static str,
}

pub const GENERATOR_NORMALIZATION: GeneratorNormalization = GeneratorNormalization {
    ours: "p_j . phi = i*lambda*d(phi)/dq_j",
    reference: "p_j . phi = -2*lambda*d(phi)/dq_j",
    ratio: "-i/2",
};

impl<'a, P: FormalProduct + ?Sized> QuotientModule<'a, P> {
    /// Refuses products that fail the ideal scan at degree `d` and order `n`.
    pub fn new(star: &'a P, axes: &[usize], d: u32, n: u32) -> Result<Self, AdaptedError> {
        let verdict = verify_ideal_preservation(star, axes, d, n)?;
        if let Some(w) = &verdict.witness {
            return Err(AdaptedError::NotIdealPreserving { witness: w.to_string() });
        }
        Ok(Self {
            star,
            axes: axes.to_vec(),
            verdict,
        })
    }

    pub fn verdict(&self) -> &IdealVerdict {
        &self.verdict
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    fn check_on_l(&self, phi: &LambdaPoly) -> Result<(), AdaptedError> {
        for c in phi.coeffs() {
            if c.restrict(&self.axes).expect("axes in range") != *c {
                return Err(AdaptedError::NotOnLagrangian { value: c.to_string() });
            }
        }
        Ok(())
    }

    /// `f • φ` for λ-series `f` and `φ`.
    pub fn act(&self, f: &LambdaPoly, phi: &LambdaPoly) -> Result<LambdaPoly, AdaptedError> {
        self.check_on_l(phi)?;
        let p = self.star.product_series(f, phi)?;
        Ok(p.restrict(&self.axes).expect("axes in range"))
    }

    pub fn act_poly(&self, f: &ChartPoly, phi: &ChartPoly) -> Result<LambdaPoly, AdaptedError> {
        let n = self.star.order();
        self.act(&LambdaPoly::from_poly(f.clone(), n), &LambdaPoly::from_poly(phi.clone(), n))
    }

    /// Action of the coordinate `x_{axes[j]}`.
    pub fn generator_action(&self, j: usize, phi: &ChartPoly) -> Result<LambdaPoly, AdaptedError> {
        let x = ChartPoly::var(self.star.dim(), self.axes[j]);
        self.act_poly(&x, phi)
    }
}
