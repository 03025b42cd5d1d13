use serde::Serialize;

use crate::algebra::{ChartPoly, GaussMatrix, GaussRational, LambdaPoly, Monomial, PolyForm};
use crate::fedosov::{extract_bidiff, FedosovError, FormalProduct};
use crate::hochschild::{hkr_antisymmetrize, hochschild_b, lichnerowicz_split, LichnerowiczSplit, MultiDiffOp};

use super::AdaptedError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceKind {
    /// `1 + c λ^m T`
    Linear,
    /// `exp(c λ^m T)`
    Exponential,
}

/// A formal equivalence `S = 1 + cλ^m T` or `exp(cλ^m T)` with `T` a
/// differential operator and `m ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceMap {
    order: u32,
    power: u32,
    scale: GaussRational,
    kind: EquivalenceKind,
    operator: MultiDiffOp,
}

/// The constant `c` in `S_α = 1 + c λ^{k−1} α.X`. With the product
/// conventions used here the first-order term of `[f, g]` carries `1/2i`, so
/// `c = 2i` rather than `1`.
pub fn alpha_scale() -> GaussRational {
    GaussRational::from_int(2) * GaussRational::i()
}

/// The derivation `f ↦ α(X_f) = α_a π^{ai} ∂_i f`.
pub fn alpha_vector_field(alpha: &PolyForm, poisson: &GaussMatrix) -> MultiDiffOp {
    let d = alpha.dim();
    let mut op = MultiDiffOp::zero(d, 1);
    for i in 0..d {
        let mut c = ChartPoly::zero(d);
        for (a, row) in poisson.iter().enumerate() {
            if !row[i].is_zero() {
                c.add_scaled(&alpha.component(&[a]), &row[i]);
            }
        }
        let mut m: Monomial = vec![0; d];
        m[i] = 1;
        op.add_term(vec![m], c);
    }
    op
}

impl EquivalenceMap {
    pub fn identity(dim: usize, order: u32) -> Self {
        Self {
            order,
            power: 1,
            scale: GaussRational::zero(),
            kind: EquivalenceKind::Linear,
            operator: MultiDiffOp::zero(dim, 1),
        }
    }

    /// `S_α = 1 + 2i λ^{k−1} α.X`, requiring `k ≥ 2`.
    pub fn from_alpha(alpha: &PolyForm, poisson: &GaussMatrix, k: u32) -> Result<Self, AdaptedError> {
        if k < 2 {
            return Err(AdaptedError::NotFormal { power: k.saturating_sub(1) });
        }
        Ok(Self {
            order: k,
            power: k - 1,
            scale: alpha_scale(),
            kind: EquivalenceKind::Linear,
            operator: alpha_vector_field(alpha, poisson),
        })
    }

    /// `exp(2i λ α.X)`.
    pub fn exponential(alpha: &PolyForm, poisson: &GaussMatrix) -> Self {
        Self {
            order: 2,
            power: 1,
            scale: alpha_scale(),
            kind: EquivalenceKind::Exponential,
            operator: alpha_vector_field(alpha, poisson),
        }
    }

    /// `1 + λ^k T'`.
    pub fn from_operator(t: MultiDiffOp, k: u32) -> Result<Self, AdaptedError> {
        if k == 0 {
            return Err(AdaptedError::NotFormal { power: 0 });
        }
        if t.arity() != 1 {
            return Err(AdaptedError::Hochschild(crate::hochschild::HochschildError::ArityMismatch {
                left: 1,
                right: t.arity(),
            }));
        }
        Ok(Self {
            order: k,
            power: k,
            scale: GaussRational::one(),
            kind: EquivalenceKind::Linear,
            operator: t,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn kind(&self) -> EquivalenceKind {
        self.kind
    }

    pub fn operator(&self) -> &MultiDiffOp {
        &self.operator
    }

    pub fn is_identity(&self) -> bool {
        self.scale.is_zero() || self.operator.is_zero()
    }

    fn apply_t(&self, f: &LambdaPoly) -> Result<LambdaPoly, AdaptedError> {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| self.operator.apply(std::slice::from_ref(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LambdaPoly::from_coeffs(f.dim(), f.order(), coeffs))
    }

    /// `Σ_j w_j (cλ^m T)^j f` truncated at the series order of `f`.
    fn series(&self, f: &LambdaPoly, weight: impl Fn(u32) -> GaussRational) -> Result<LambdaPoly, AdaptedError> {
        let mut out = f.clone();
        if self.is_identity() {
            return Ok(out);
        }
        let mut term = f.clone();
        let mut j = 1;
        while j * self.power <= f.order() {
            term = self.apply_t(&term)?.scale(&self.scale).shift(self.power);
            if term.is_zero() {
                break;
            }
            out = out.try_add(&term.scale(&weight(j)))?;
            j += 1;
        }
        Ok(out)
    }

    pub fn apply(&self, f: &LambdaPoly) -> Result<LambdaPoly, AdaptedError> {
        match self.kind {
            EquivalenceKind::Linear => self.series(f, |j| {
                if j == 1 {
                    GaussRational::one()
                } else {
                    GaussRational::zero()
                }
            }),
            EquivalenceKind::Exponential => self.series(f, inverse_factorial),
        }
    }

    pub fn apply_inverse(&self, f: &LambdaPoly) -> Result<LambdaPoly, AdaptedError> {
        let sign = |j: u32| if j % 2 == 0 { GaussRational::one() } else { GaussRational::from_int(-1) };
        match self.kind {
            EquivalenceKind::Linear => self.series(f, sign),
            EquivalenceKind::Exponential => self.series(f, |j| &sign(j) * &inverse_factorial(j)),
        }
    }

    /// The product `S(⋆)(f, g) = S⁻¹(Sf ⋆ Sg)`.
    pub fn transport<'a, P: FormalProduct + ?Sized>(&'a self, star: &'a P) -> TransportedProduct<'a, P> {
        TransportedProduct { star, map: self }
    }
}

fn inverse_factorial(j: u32) -> GaussRational {
    let f: i64 = (1..=j as i64).product();
    GaussRational::from_frac(1, f)
}

impl std::fmt::Display for EquivalenceMap {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(out, "id");
        }
        let gen = format!("({})*lambda^{}*[{}]", self.scale, self.power, self.operator);
        match self.kind {
            EquivalenceKind::Linear => write!(out, "1 + {gen}"),
            EquivalenceKind::Exponential => write!(out, "exp({gen})"),
        }
    }
}

impl Serialize for EquivalenceMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub struct TransportedProduct<'a, P: FormalProduct + ?Sized> {
    star: &'a P,
    map: &'a EquivalenceMap,
}

impl<P: FormalProduct + ?Sized> FormalProduct for TransportedProduct<'_, P> {
    fn dim(&self) -> usize {
        self.star.dim()
    }

    fn order(&self) -> u32 {
        self.star.order()
    }

    fn product(&self, f: &ChartPoly, g: &ChartPoly) -> Result<LambdaPoly, FedosovError> {
        let n = self.order();
        let lift = |p: &ChartPoly| {
            self.map
                .apply(&LambdaPoly::from_poly(p.clone(), n))
                .map_err(|e| e.into_product_error())
        };
        let prod = self.star.product_series(&lift(f)?, &lift(g)?)?;
        self.map.apply_inverse(&prod).map_err(|e| e.into_product_error())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceCertificate {
    /// `S(⋆')` and `⋆` agree below order `k`.
    pub lower_orders_agree: bool,
    /// `b(S(⋆')_k − ⋆_k) = 0`.
    pub residual_is_cocycle: bool,
    /// The antisymmetrization of `S(⋆')_k − ⋆_k` vanishes.
    pub residual_antisymmetric_zero: bool,
    /// `i*_L α = 0`.
    pub adapted: bool,
}

impl EquivalenceCertificate {
    pub fn holds(&self) -> bool {
        self.lower_orders_agree && self.residual_is_cocycle && self.residual_antisymmetric_zero && self.adapted
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceStep {
    pub order: u32,
    pub split: LichnerowiczSplit,
    pub map: EquivalenceMap,
    pub certificate: EquivalenceCertificate,
}

/// One inductive step: `⋆` and `⋆'` agree below `k`; finds `S_α` with
/// `i*_L α = 0` so that `S_α(⋆') − ⋆` at order `k` is symmetric, or reports
/// the restriction of `β` to `L` when it is nonzero.
pub fn equivalence_step<A, B>(
    star: &A,
    star_prime: &B,
    k: u32,
    poisson: &GaussMatrix,
    axes: &[usize],
) -> Result<EquivalenceStep, AdaptedError>
where
    A: FormalProduct + ?Sized,
    B: FormalProduct + ?Sized,
{
    let dim = star.dim();
    let split = lichnerowicz_split(star, star_prime, k, poisson)?;
    let restricted = split.beta.pullback_to_zero_set(axes);
    if !restricted.is_zero() {
        return Err(AdaptedError::AdaptedInequivalent {
            order: k,
            obstruction: restricted,
        });
    }
    let map = if split.alpha.is_zero() {
        EquivalenceMap::identity(dim, k)
    } else {
        EquivalenceMap::from_alpha(&split.alpha, poisson, k)?
    };
    let adapted = split.alpha.pullback_to_zero_set(axes).is_zero();
    let transported = map.transport(star_prime);
    let max_order = k + 1;
    let mut lower_orders_agree = true;
    for j in 0..k {
        let a = MultiDiffOp::from_bidiff(&extract_bidiff(star, j, max_order)?, dim);
        let b = MultiDiffOp::from_bidiff(&extract_bidiff(&transported, j, max_order)?, dim);
        lower_orders_agree &= b.try_sub(&a)?.is_zero();
    }
    let a = MultiDiffOp::from_bidiff(&extract_bidiff(star, k, max_order)?, dim);
    let b = MultiDiffOp::from_bidiff(&extract_bidiff(&transported, k, max_order)?, dim);
    let residual = b.try_sub(&a)?;
    let certificate = EquivalenceCertificate {
        lower_orders_agree,
        residual_is_cocycle: hochschild_b(&residual).is_zero(),
        residual_antisymmetric_zero: hkr_antisymmetrize(&residual, poisson)?.is_zero(),
        adapted,
    };
    Ok(EquivalenceStep {
        order: k,
        split,
        map,
        certificate,
    })
}
