use serde::Serialize;

use crate::algebra::{GaussRational, PolyForm};
use crate::bohr_sommerfeld::{liouville_integral, BsError, LoopPath, PiPoly};

use super::AdaptedError;

/// Holonomy `exp(iλ ∮_γ α)` of the flat deformation of the trivial line
/// bundle by a closed 1-form `α`, as λ-coefficients up to `order`.
#[derive(Clone, Debug, Serialize)]
pub struct HolonomyTwist {
    #[serde(skip)]
    pub path: LoopPath,
    pub alpha: PolyForm,
    pub integral: PiPoly,
    /// `coefficients[k] = (i∮α)^k / k!`.
    pub coefficients: Vec<PiPoly>,
}

impl HolonomyTwist {
    pub fn order(&self) -> u32 {
        self.coefficients.len() as u32 - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().skip(1).all(PiPoly::is_zero)
    }

    /// Cauchy product of two holonomies truncated at the smaller order.
    pub fn times(&self, other: &Self) -> Vec<PiPoly> {
        let n = self.coefficients.len().min(other.coefficients.len());
        (0..n)
            .map(|k| {
                (0..=k).fold(PiPoly::zero(), |acc, j| {
                    &acc + &(&self.coefficients[j] * &other.coefficients[k - j])
                })
            })
            .collect()
    }
}

/// Formal exponential `exp(iλI)` up to `λ^order`.
pub fn formal_exp_i(integral: &PiPoly, order: u32) -> Vec<PiPoly> {
    let x = integral.scale(&GaussRational::i());
    let mut out = vec![PiPoly::one()];
    for k in 1..=order {
        let next = (&out[k as usize - 1] * &x).scale(&GaussRational::from_frac(1, k as i64));
        out.push(next);
    }
    out
}

pub fn holonomy_twist(path: &LoopPath, alpha: &PolyForm, order: u32) -> Result<HolonomyTwist, AdaptedError> {
    if alpha.degree() != 1 {
        return Err(BsError::NotAOneForm { degree: alpha.degree() }.into());
    }
    let d = alpha.d();
    if let Some((idx, c)) = d.components().next() {
        return Err(BsError::NotClosedForm {
            witness: format!("({c}) at {idx:?}"),
        }
        .into());
    }
    if !path.is_closed() {
        return Err(BsError::OpenPath.into());
    }
    let integral = liouville_integral(path, alpha)?;
    Ok(HolonomyTwist {
        path: path.clone(),
        alpha: alpha.clone(),
        coefficients: formal_exp_i(&integral, order),
        integral,
    })
}
