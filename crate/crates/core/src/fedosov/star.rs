use std::collections::HashMap;
use std::sync::Mutex;

use crate::algebra::{ChartPoly, LambdaPoly, Monomial};
use crate::geometry::QuantizationSetup;
use crate::weyl::WeylElement;

use super::{solve_gamma, FedosovError, FedosovSolution};

/// A bilinear formal product of polynomials truncated at `λ^order`.
pub trait FormalProduct: Sync {
    fn dim(&self) -> usize;

    fn order(&self) -> u32;

    fn product(&self, f: &ChartPoly, g: &ChartPoly) -> Result<LambdaPoly, FedosovError>;

    /// Extension to λ-series, `(Σλ^a f_a) ⋆ (Σλ^b g_b) = Σ λ^{a+b} f_a ⋆ g_b`.
    fn product_series(&self, f: &LambdaPoly, g: &LambdaPoly) -> Result<LambdaPoly, FedosovError> {
        let order = self.order();
        let mut out = LambdaPoly::zero(self.dim(), order);
        for (a, fa) in f.coeffs().iter().enumerate() {
            if fa.is_zero() || a as u32 > order {
                continue;
            }
            for (b, gb) in g.coeffs().iter().enumerate() {
                if gb.is_zero() || (a + b) as u32 > order {
                    continue;
                }
                let p = self.product(fa, gb)?.shift((a + b) as u32);
                out = out.try_add(&p).expect("same shape");
            }
        }
        Ok(out)
    }

    /// The coefficient `⋆_k(f, g)`.
    fn coefficient(&self, k: u32, f: &ChartPoly, g: &ChartPoly) -> Result<ChartPoly, FedosovError> {
        if k > self.order() {
            return Err(FedosovError::OrderTooHigh {
                requested: k,
                available: self.order(),
            });
        }
        Ok(self.product(f, g)?.coeff(k).clone())
    }
}

fn check_dims(dim: usize, f: &ChartPoly, g: &ChartPoly) -> Result<(), FedosovError> {
    for p in [f, g] {
        if p.dim() != dim {
            return Err(FedosovError::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
    }
    Ok(())
}

/// Expands a bilinear map on monomials to polynomials.
fn bilinear<F>(dim: usize, order: u32, f: &ChartPoly, g: &ChartPoly, on_monomials: F) -> LambdaPoly
where
    F: Fn(&Monomial, &Monomial) -> LambdaPoly,
{
    let mut out = LambdaPoly::zero(dim, order);
    for (ma, ca) in f.terms() {
        for (mb, cb) in g.terms() {
            let p = on_monomials(ma, mb).scale(&(ca * cb));
            out = out.try_add(&p).expect("same shape");
        }
    }
    out
}

/// The Fedosov star product `f ⋆ g = σ(τ(f) ∗ τ(g))` truncated at `λ^N`.
///
/// Products are evaluated on monomials; lifts and monomial products are
/// cached, so repeated evaluations are cheap.
pub struct StarProduct {
    solution: FedosovSolution,
    order: u32,
    taus: Mutex<HashMap<Monomial, WeylElement>>,
    pairs: Mutex<HashMap<(Monomial, Monomial), LambdaPoly>>,
}

impl std::fmt::Debug for StarProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StarProduct")
            .field("order", &self.order)
            .field("budget", &self.solution.budget())
            .finish()
    }
}

impl StarProduct {
    /// Requires a budget of at least `2N` for λ-order `N`.
    pub fn new(solution: FedosovSolution) -> Result<Self, FedosovError> {
        let order = solution.lambda_order();
        if solution.budget() < 2 * order {
            return Err(FedosovError::BudgetTooSmall {
                budget: solution.budget(),
                needed: 2 * order,
            });
        }
        Ok(Self {
            solution,
            order,
            taus: Mutex::new(HashMap::new()),
            pairs: Mutex::new(HashMap::new()),
        })
    }

    /// Solves the Fedosov equation for `setup` and wraps the product.
    pub fn build(setup: &QuantizationSetup) -> Result<Self, FedosovError> {
        Self::new(solve_gamma(setup)?)
    }

    pub fn solution(&self) -> &FedosovSolution {
        &self.solution
    }

    pub fn setup(&self) -> &QuantizationSetup {
        self.solution.setup()
    }

    pub fn tau_monomial(&self, m: &Monomial) -> WeylElement {
        if let Some(t) = self.taus.lock().expect("cache lock").get(m) {
            return t.clone();
        }
        let t = self
            .solution
            .tau_poly(&ChartPoly::monomial(m.clone(), crate::algebra::GaussRational::one()));
        self.taus.lock().expect("cache lock").insert(m.clone(), t.clone());
        t
    }

    pub fn monomial_product(&self, a: &Monomial, b: &Monomial) -> LambdaPoly {
        let key = (a.clone(), b.clone());
        if let Some(p) = self.pairs.lock().expect("cache lock").get(&key) {
            return p.clone();
        }
        let ta = self.tau_monomial(a);
        let tb = self.tau_monomial(b);
        let p = self.setup().ordering().central_product(&ta, &tb, self.order);
        self.pairs.lock().expect("cache lock").insert(key, p.clone());
        p
    }
}

impl FormalProduct for StarProduct {
    fn dim(&self) -> usize {
        self.setup().dim()
    }

    fn order(&self) -> u32 {
        self.order
    }

    fn product(&self, f: &ChartPoly, g: &ChartPoly) -> Result<LambdaPoly, FedosovError> {
        check_dims(self.dim(), f, g)?;
        Ok(bilinear(self.dim(), self.order, f, g, |a, b| self.monomial_product(a, b)))
    }
}
