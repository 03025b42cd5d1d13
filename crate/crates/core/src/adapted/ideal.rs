use serde::Serialize;

use crate::algebra::{monomials_up_to, ChartPoly, GaussRational, Monomial};
use crate::fedosov::{FedosovError, FormalProduct};

/// A product `f ⋆ g` with `g` in the vanishing ideal whose restriction to
/// `L` is nonzero at some λ-order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealWitness {
    pub f: ChartPoly,
    pub g: ChartPoly,
    pub order: u32,
    /// `(f ⋆ g)_order` restricted to `L`.
    pub value: ChartPoly,
}

impl std::fmt::Display for IdealWitness {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            out,
            "({}) * ({}) has lambda^{} part {} on L",
            self.f, self.g, self.order, self.value
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealVerdict {
    pub max_degree: u32,
    pub order: u32,
    pub pairs_checked: usize,
    pub witness: Option<IdealWitness>,
}

impl IdealVerdict {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Generators `p_j · h` of the ideal of `{x_a = 0, a ∈ axes}` with
/// `deg h ≤ d − 1`, deduplicated and sorted by degree.
fn ideal_monomials(dim: usize, axes: &[usize], d: u32) -> Vec<Monomial> {
    if d == 0 {
        return Vec::new();
    }
    let mut out: Vec<Monomial> = monomials_up_to(dim, d)
        .into_iter()
        .filter(|m| axes.iter().any(|&a| m[a] > 0))
        .collect();
    out.sort_by_key(|m| m.iter().sum::<u32>());
    out
}

/// Scans `(f ⋆ g)|_L` for monomials `f` of degree ≤ `d` and monomial ideal
/// elements `g` of degree ≤ `d`, at every λ-order up to `n` (clamped to the
/// product's order). The witness is the first failure in order of λ-power,
/// then total degree.
pub fn verify_ideal_preservation<P: FormalProduct + ?Sized>(
    star: &P,
    axes: &[usize],
    d: u32,
    n: u32,
) -> Result<IdealVerdict, FedosovError> {
    let dim = star.dim();
    let order = n.min(star.order());
    let fs = monomials_up_to(dim, d);
    let gs = ideal_monomials(dim, axes, d);
    let one = GaussRational::one();
    let mut best: Option<(u32, u32, IdealWitness)> = None;
    let mut pairs = 0;
    for g in &gs {
        for f in &fs {
            pairs += 1;
            let fp = ChartPoly::monomial(f.clone(), one.clone());
            let gp = ChartPoly::monomial(g.clone(), one.clone());
            let prod = star.product(&fp, &gp)?;
            for k in 0..=order {
                let value = prod.coeff(k).restrict(axes).expect("axes in range");
                if value.is_zero() {
                    continue;
                }
                let deg = f.iter().sum::<u32>() + g.iter().sum::<u32>();
                let better = match &best {
                    None => true,
                    Some((bk, bd, _)) => (k, deg) < (*bk, *bd),
                };
                if better {
                    best = Some((
                        k,
                        deg,
                        IdealWitness {
                            f: fp.clone(),
                            g: gp.clone(),
                            order: k,
                            value,
                        },
                    ));
                }
                break;
            }
        }
    }
    Ok(IdealVerdict {
        max_degree: d,
        order,
        pairs_checked: pairs,
        witness: best.map(|(_, _, w)| w),
    })
}
