use crate::algebra::{ChartPoly, GaussRational, LambdaPoly};
use crate::weyl::{WeylElement, WeylForm};

use super::FedosovSolution;

impl FedosovSolution {
    /// `∇_F a = −δa + Da + (i/λ)[γ, a]`, at the budget of `a`.
    pub fn fedosov_derivative(&self, a: &WeylForm) -> WeylForm {
        let mut out = self.covariant_d(a);
        out.add_scaled_unchecked(&a.delta().expect("degree below dimension"), &GaussRational::from_int(-1));
        out.add_assign_unchecked(&self.ad_gamma(a, a.budget()));
        out
    }

    /// `∇_F⁻¹ α = −Σ_k (δ⁻¹(D + (i/λ) ad γ))^k δ⁻¹ α`, the solution `β` of
    /// `∇_F β = α` with `δ⁻¹β = 0` and `σ(β) = 0` for `∇_F`-closed `α` of
    /// positive form degree. Each term raises the degree, so the series
    /// stops within the budget.
    pub fn fedosov_inverse(&self, alpha: &WeylForm) -> WeylForm {
        let mut term = alpha.delta_inv().scale(&GaussRational::from_int(-1));
        let mut out = term.clone();
        for _ in 0..=alpha.budget() + 1 {
            let mut next = self.covariant_d(&term);
            next.add_assign_unchecked(&self.ad_gamma(&term, term.budget()));
            term = next.delta_inv();
            if term.is_zero() {
                break;
            }
            out.add_assign_unchecked(&term);
        }
        out
    }

    /// The flat lift `τ(f)` of a λ-free polynomial at the solution budget,
    /// built degree by degree from `τ = f + δ⁻¹(Dτ + (i/λ)[γ, τ])`.
    pub fn tau_poly(&self, f: &ChartPoly) -> WeylElement {
        let budget = self.budget();
        let ord = self.setup().ordering();
        let conn = self.setup().connection();
        let mut parts: Vec<WeylForm> = vec![WeylForm::from_element(WeylElement::from_poly(f.clone(), budget))];
        for deg in 1..=budget {
            let prev = &parts[deg as usize - 1];
            let mut rhs = conn.covariant_d(prev, ord).expect("dim ≥ 2");
            for a in 2..=deg + 1 {
                let c = deg + 1 - a;
                if c == 0 {
                    continue;
                }
                let Some(g) = self.gamma_part(a) else { continue };
                if g.is_zero() || parts[c as usize].is_zero() {
                    continue;
                }
                let t = g.commutator_tail(&parts[c as usize], ord, budget).expect("dims agree");
                rhs.add_scaled_unchecked(&t, &GaussRational::i());
            }
            parts.push(rhs.degree_part(deg - 1).delta_inv().degree_part(deg));
        }
        let mut out = WeylElement::zero(f.dim(), budget);
        for p in parts {
            out.add_assign_unchecked(&p.scalar());
        }
        out
    }

    /// `τ(Σ λ^k f_k) = Σ λ^k τ(f_k)`.
    pub fn tau(&self, f: &LambdaPoly) -> WeylElement {
        let mut out = WeylElement::zero(f.dim(), self.budget());
        for (k, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() || 2 * k as u32 > self.budget() {
                continue;
            }
            out.add_assign_unchecked(&self.tau_poly(c).shift_lambda(k as u32));
        }
        out
    }
}
