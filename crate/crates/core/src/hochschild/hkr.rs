use serde::Serialize;

use crate::algebra::matrix::{invert, transpose};
use crate::algebra::{ChartPoly, GaussMatrix, GaussRational, Monomial, PolyForm};
use crate::fedosov::{extract_bidiff, FormalProduct};

use super::{gerstenhaber_bracket, hochschild_b, HochschildError, MultiDiffOp};

fn unit(dim: usize, axis: usize) -> Monomial {
    let mut m = vec![0; dim];
    m[axis] = 1;
    m
}

/// `M^T A N` for constant `M, N` and a polynomial matrix `A`.
fn sandwich(m: &GaussMatrix, a: &[Vec<ChartPoly>], n: &GaussMatrix) -> Vec<Vec<ChartPoly>> {
    let d = a.len();
    let mt = transpose(m);
    let mut out = vec![vec![ChartPoly::zero(d); d]; d];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            for (k, ak) in a.iter().enumerate() {
                if mt[i][k].is_zero() {
                    continue;
                }
                for (l, akl) in ak.iter().enumerate() {
                    if akl.is_zero() || n[l][j].is_zero() {
                        continue;
                    }
                    slot.add_scaled(akl, &(&mt[i][k] * &n[l][j]));
                }
            }
        }
    }
    out
}

/// Antisymmetric first-order part of a 2-cochain, `a^{ij} = ½(c^{ij} − c^{ji})`
/// over the entries `c^{ij} ∂_i f ∂_j g`, turned into the 2-form
/// `β = (π^T)⁻¹ a π⁻¹`, so that `β(X_f, X_g) = a^{ij} ∂_i f ∂_j g` with
/// `X_f^a = π^{ai} ∂_i f`. Higher-order entries are discarded.
pub fn hkr_antisymmetrize(c: &MultiDiffOp, poisson: &GaussMatrix) -> Result<PolyForm, HochschildError> {
    let d = c.dim();
    if c.arity() != 2 {
        return Err(HochschildError::ArityMismatch {
            left: 2,
            right: c.arity(),
        });
    }
    if poisson.len() != d {
        return Err(HochschildError::DimensionMismatch {
            left: d,
            right: poisson.len(),
        });
    }
    let inv = invert(poisson).ok_or(HochschildError::DegeneratePoisson)?;
    let half = GaussRational::from_frac(1, 2);
    let mut a = vec![vec![ChartPoly::zero(d); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut e = c.coeff(&[unit(d, i), unit(d, j)]);
            e.sub_assign_poly(&c.coeff(&[unit(d, j), unit(d, i)]));
            a[i][j] = e.scale(&half);
        }
    }
    let m = sandwich(&inv, &a, &inv);
    let mut out = PolyForm::zero(d, 2);
    for (i, row) in m.iter().enumerate() {
        for (j, f) in row.iter().enumerate().skip(i + 1) {
            out.add_component(vec![i, j], f);
        }
    }
    Ok(out)
}

/// The bidifferential operator `(f, g) ↦ β(X_f, X_g)` of a 2-form.
pub fn form_on_hamiltonians(beta: &PolyForm, poisson: &GaussMatrix) -> MultiDiffOp {
    let d = beta.dim();
    let mat: Vec<Vec<ChartPoly>> = (0..d)
        .map(|i| (0..d).map(|j| beta.component(&[i, j])).collect())
        .collect();
    MultiDiffOp::from_bivector(&sandwich(poisson, &mat, poisson))
}

/// The order-`n` associativity obstruction
/// `−2b⋆_n + Σ_{i=1}^{n−1} [⋆_i, ⋆_{n−i}]`, which equals `Σ_{i=0}^n [⋆_i, ⋆_{n−i}]`
/// and vanishes iff `⋆` is associative at `λ^n`. `stars[i]` is `⋆_i`.
pub fn associativity_residual(stars: &[MultiDiffOp], n: usize) -> Result<MultiDiffOp, HochschildError> {
    if n >= stars.len() {
        return Err(HochschildError::MissingOrder {
            requested: n,
            available: stars.len(),
        });
    }
    let mut out = hochschild_b(&stars[n]).scale(&GaussRational::from_int(-2));
    for i in 1..n {
        out = out.try_add(&gerstenhaber_bracket(&stars[i], &stars[n - i])?)?;
    }
    Ok(out)
}

/// Coefficient tables `⋆_0, …, ⋆_n` of a formal product, each extracted from
/// monomial probes of order up to `max_order`.
pub fn star_cochains<P: FormalProduct + ?Sized>(
    product: &P,
    n: u32,
    max_order: u32,
) -> Result<Vec<MultiDiffOp>, HochschildError> {
    (0..=n)
        .map(|k| {
            let t = extract_bidiff(product, k, max_order)?;
            Ok(MultiDiffOp::from_bidiff(&t, product.dim()))
        })
        .collect()
}

/// Outcome of splitting the first differing order of two products into a
/// closed 2-form `dα` and a symmetric remainder.
#[derive(Clone, Debug, Serialize)]
pub struct LichnerowiczSplit {
    pub order: u32,
    /// The antisymmetrized difference `β`, closed by construction check.
    pub beta: PolyForm,
    /// Homotopy primitive with `dα = β`.
    pub alpha: PolyForm,
    #[serde(serialize_with = "ser_display")]
    pub difference: MultiDiffOp,
    pub certificate: SplitCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCertificate {
    /// `b(⋆'_k − ⋆_k) = 0`.
    pub difference_is_cocycle: bool,
    /// `dα = β` exactly.
    pub primitive_exact: bool,
    /// `⋆'_k − ⋆_k − dα(X·, X·)` antisymmetrizes to zero.
    pub remainder_symmetric: bool,
}

impl SplitCertificate {
    pub fn holds(&self) -> bool {
        self.difference_is_cocycle && self.primitive_exact && self.remainder_symmetric
    }
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Splits `⋆' − ⋆` at order `k`, given agreement below `k`, as
/// `bT + dα(X·, X·)` at the level of antisymmetrization.
pub fn lichnerowicz_split<A, B>(
    star: &A,
    star_prime: &B,
    k: u32,
    poisson: &GaussMatrix,
) -> Result<LichnerowiczSplit, HochschildError>
where
    A: FormalProduct + ?Sized,
    B: FormalProduct + ?Sized,
{
    if star.dim() != star_prime.dim() {
        return Err(HochschildError::DimensionMismatch {
            left: star.dim(),
            right: star_prime.dim(),
        });
    }
    let dim = star.dim();
    let max_order = k + 1;
    for j in 0..k {
        let a = MultiDiffOp::from_bidiff(&extract_bidiff(star, j, max_order)?, dim);
        let b = MultiDiffOp::from_bidiff(&extract_bidiff(star_prime, j, max_order)?, dim);
        let diff = b.try_sub(&a)?;
        if let Some((args, value)) = diff.witness() {
            return Err(HochschildError::OrdersDisagree {
                order: j,
                witness: format!("{} on monomials {args:?}", value),
            });
        }
    }
    let a = MultiDiffOp::from_bidiff(&extract_bidiff(star, k, max_order)?, dim);
    let b = MultiDiffOp::from_bidiff(&extract_bidiff(star_prime, k, max_order)?, dim);
    let difference = b.try_sub(&a)?;
    let bd = hochschild_b(&difference);
    if let Some((args, value)) = bd.witness() {
        return Err(HochschildError::NotCocycle {
            order: k,
            witness: format!("b(difference) = {value} on monomials {args:?}"),
        });
    }
    let beta = hkr_antisymmetrize(&difference, poisson)?;
    if let Some((idx, c)) = beta.d().components().next() {
        return Err(HochschildError::NotClosed {
            witness: format!("d beta has component ({c}) at {idx:?}"),
        });
    }
    let alpha = beta.radial_homotopy();
    let primitive_exact = alpha.d() == beta;
    let remainder = difference.try_sub(&form_on_hamiltonians(&alpha.d(), poisson))?;
    let remainder_symmetric = hkr_antisymmetrize(&remainder, poisson)?.is_zero();
    Ok(LichnerowiczSplit {
        order: k,
        beta,
        alpha,
        difference,
        certificate: SplitCertificate {
            difference_is_cocycle: true,
            primitive_exact,
            remainder_symmetric,
        },
    })
}
