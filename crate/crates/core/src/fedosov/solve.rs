use crate::algebra::GaussRational;
use crate::geometry::QuantizationSetup;
use crate::weyl::{WeylElement, WeylForm, WeylKey};

use super::{compute_curvature, FedosovError};

/// Solution of the Fedosov equation
/// `δγ = Dγ + (i/λ) γ∗γ − R + 2i Ω` with normalization `δ⁻¹γ = s`.
///
/// `gamma` is kept to degree `budget + 1` so that the equation holds exactly
/// in every degree up to `budget`.
#[derive(Clone, Debug)]
pub struct FedosovSolution {
    setup: QuantizationSetup,
    budget: u32,
    gamma: WeylForm,
    gamma_parts: Vec<WeylForm>,
    curvature: WeylForm,
}

/// Scalar multiplying `Ω` in the Fedosov equation; with it the term `λ^k Ω_k`
/// shifts the star product at order `λ^{k+1}` by `Ω_k(X_f, X_g)`.
pub fn omega_factor() -> GaussRational {
    GaussRational::i().scale_int(2)
}

fn omega_term(setup: &QuantizationSetup, budget: u32) -> WeylForm {
    let d = setup.dim();
    let mut out = WeylForm::zero(d, budget, 2).expect("dim ≥ 2");
    for (&k, form) in setup.omega_series() {
        for (idx, c) in form.components() {
            let mut e = WeylElement::zero(d, budget);
            e.add_term(WeylKey::new(vec![0; d], k), c.scale(&omega_factor()));
            out.add_component(idx.clone(), &e);
        }
    }
    out
}

impl FedosovSolution {
    pub fn setup(&self) -> &QuantizationSetup {
        &self.setup
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn lambda_order(&self) -> u32 {
        self.setup.lambda_order()
    }

    /// `γ` to degree `budget + 1`.
    pub fn gamma(&self) -> &WeylForm {
        &self.gamma
    }

    /// Homogeneous part of `γ` of total degree `d` (zero past the budget).
    pub fn gamma_part(&self, d: u32) -> Option<&WeylForm> {
        self.gamma_parts.get(d as usize)
    }

    pub fn curvature(&self) -> &WeylForm {
        &self.curvature
    }

    /// `D` of the setup on forms.
    pub fn covariant_d(&self, form: &WeylForm) -> WeylForm {
        self.setup
            .connection()
            .covariant_d(form, self.setup.ordering())
            .expect("form degree below dimension")
    }

    /// `δγ − Dγ − (i/λ)γ∗γ + R − 2iΩ` on degrees `≤ budget`.
    pub fn residual(&self) -> WeylForm {
        let b = self.budget;
        let ord = self.setup.ordering();
        let mut res = self.gamma.delta().expect("dim ≥ 2").truncate(b);
        let dg = self.covariant_d(&self.gamma).truncate(b);
        res.add_scaled_unchecked(&dg, &GaussRational::from_int(-1));
        let gg = self.gamma.product_tail(&self.gamma, ord, b).expect("dims agree");
        res.add_scaled_unchecked(&gg, &(-GaussRational::i()));
        res.add_assign_unchecked(&self.curvature.truncate(b));
        res.add_scaled_unchecked(&omega_term(&self.setup, b), &GaussRational::from_int(-1));
        res
    }

    /// `δ⁻¹γ − s` on degrees `≤ budget + 1`.
    pub fn normalization_defect(&self) -> WeylForm {
        let b = self.budget + 1;
        let s = WeylForm::from_element(self.setup.s().truncate(b));
        self.gamma.delta_inv().try_sub(&s).expect("same shape")
    }

    /// `(i/λ)[γ, a]` with output budget `out_budget`.
    pub fn ad_gamma(&self, a: &WeylForm, out_budget: u32) -> WeylForm {
        self.gamma
            .commutator_tail(a, self.setup.ordering(), out_budget)
            .expect("dims agree")
            .scale(&GaussRational::i())
    }
}

/// Solves for `γ` degree by degree: the degree-`d` part is
/// `(δs)_d + δ⁻¹(Dγ + (i/λ)γ∗γ − R + 2iΩ)_{d−1}`, which only involves parts of
/// degree `< d`.
pub fn solve_gamma(setup: &QuantizationSetup) -> Result<FedosovSolution, FedosovError> {
    let budget = setup.budget();
    if budget < 3 {
        return Err(FedosovError::BudgetTooSmall { budget, needed: 3 });
    }
    let d = setup.dim();
    let b = budget + 1;
    let ord = setup.ordering();
    let curvature = compute_curvature(setup, b);
    let mut source = omega_term(setup, b);
    source.add_scaled_unchecked(&curvature, &GaussRational::from_int(-1));
    let delta_s = WeylForm::from_element(setup.s().truncate(b + 1))
        .delta()
        .expect("dim ≥ 2")
        .truncate(b)
        .embed(b);

    let mut parts: Vec<WeylForm> = vec![WeylForm::zero(d, b, 1).expect("dim ≥ 2"); b as usize + 1];
    for deg in 2..=b {
        let prev = &parts[deg as usize - 1];
        let mut rhs = setup
            .connection()
            .covariant_d(prev, ord)
            .expect("dim ≥ 2")
            .degree_part(deg - 1);
        for a in 2..deg {
            let c = deg + 1 - a;
            if c < 2 || c >= deg {
                continue;
            }
            let t = parts[a as usize]
                .product_tail(&parts[c as usize], ord, b)
                .expect("dims agree");
            rhs.add_scaled_unchecked(&t, &GaussRational::i());
        }
        rhs.add_assign_unchecked(&source.degree_part(deg - 1));
        let mut g = rhs.delta_inv().degree_part(deg);
        g.add_assign_unchecked(&delta_s.degree_part(deg));
        parts[deg as usize] = g;
    }
    let mut gamma = WeylForm::zero(d, b, 1).expect("dim ≥ 2");
    for p in &parts {
        gamma.add_assign_unchecked(p);
    }
    Ok(FedosovSolution {
        setup: setup.clone(),
        budget,
        gamma,
        gamma_parts: parts,
        curvature,
    })
}
