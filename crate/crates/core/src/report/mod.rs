//! Command orchestration and the machine-readable run report.

mod run;
mod text;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::adapted::{EquivalenceStep, IdealVerdict, GENERATOR_NORMALIZATION};
use crate::bohr_sommerfeld::{BsProblem, GaugeReport, PiPoly, SpectralValue, WindingReport};
use crate::fedosov::BidiffTable;
use crate::geometry::{AdaptednessReport, QuantizationSetup};
use crate::algebra::Rational;

pub use run::{run, Command, RunError, RunOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetupEcho {
    pub dim: usize,
    pub ordering: String,
    pub lambda_order: u32,
    pub budget: u32,
    /// 1-based.
    pub p_axes: Vec<usize>,
    pub omega: Vec<Vec<String>>,
    /// `l,j,k = Γ^l_{jk}`, 1-based.
    pub christoffel: Vec<String>,
    pub omega_series: BTreeMap<u32, String>,
    pub s: String,
}

impl SetupEcho {
    pub fn of(setup: &QuantizationSetup) -> Self {
        let raw = setup.raw();
        Self {
            dim: setup.dim(),
            ordering: match raw.ordering {
                crate::weyl::OrderingMode::Weyl => "weyl".into(),
                crate::weyl::OrderingMode::Standard => "standard".into(),
                crate::weyl::OrderingMode::Custom => "custom".into(),
            },
            lambda_order: setup.lambda_order(),
            budget: setup.budget(),
            p_axes: setup.p_axes().iter().map(|a| a + 1).collect(),
            omega: raw.omega.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect(),
            christoffel: raw
                .christoffel
                .iter()
                .map(|((l, j, k), c)| format!("{},{},{} = {c}", l + 1, j + 1, k + 1))
                .collect(),
            omega_series: raw.omega_series.iter().map(|(k, f)| (*k, f.to_string())).collect(),
            s: raw.s.to_string(),
        }
    }
}

/// Every fixed sign and normalization the numbers in a report depend on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub coordinates: &'static str,
    pub poisson: &'static str,
    pub fiber_product: &'static str,
    pub first_order: &'static str,
    pub fedosov_equation: &'static str,
    pub class_shift: &'static str,
    pub hochschild: &'static str,
    pub associativity_residual: &'static str,
    pub hkr: &'static str,
    pub equivalence: &'static str,
    pub generator_action: &'static str,
    pub generator_action_reference: &'static str,
    pub maslov_weight: &'static str,
    pub gauge_maslov: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    coordinates: "x1..x2n = (q1..qn, p1..pn); L = {p = 0} unless [lagrangian] says otherwise",
    poisson: "pi = -omega^{-1}, {q_i, p_i} = 1",
    fiber_product: "a*b = mu0 exp((lambda/2i) mu^{ij} d_xi_i (x) d_xi_j); weyl mu = pi, standard mu^{pq} = 2 pi^{pq}, mu^{qq} = pi^{qq}, mu^{.p} = 0",
    first_order: "star_1(f,g) - star_1(g,f) = (1/i){f,g}",
    fedosov_equation: "delta gamma = D gamma + (i/lambda) gamma*gamma - R + 2i Omega, delta^{-1} gamma = s",
    class_shift: "Omega -> Omega + lambda^k Omega_k changes star_{k+1} by Omega_k(X_f, X_g), X_f^a = pi^{ai} d_i f",
    hochschild: "b alternating sum; [C, C'] = C o C' - (-1)^{|C||C'|} C' o C",
    associativity_residual: "-2 b star_n + sum_{i=1}^{n-1} [star_i, star_{n-i}]",
    hkr: "beta(X_f, X_g) = antisymmetric first-order part of the cochain",
    equivalence: "S_alpha = 1 + 2i lambda^{k-1} alpha.X, alpha.X(f) = alpha(X_f)",
    generator_action: GENERATOR_NORMALIZATION.ours,
    generator_action_reference: GENERATOR_NORMALIZATION.reference,
    maslov_weight: "condition A(E)/(2 pi lambda) - c_mu mu + kappa in Z, default c_mu = 1/4",
    gauge_maslov: "(i/2pi) int tr(g^{-1} dg); maslov = -2 times that value",
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub problem: BsProblem,
    pub window: [Rational; 2],
    pub values: Vec<SpectralValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaslovReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<PiPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<WindingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub setup: Option<SetupEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adaptedness: Option<AdaptednessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal_scan: Option<IdealVerdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub star_coefficients: Vec<BidiffTable>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalence: Option<EquivalenceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maslov: Option<MaslovReport>,
    /// Wall-clock seconds per phase; only present when requested, so that
    /// reports are otherwise byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
    pub conventions: Conventions,
    pub passed: bool,
}

impl RunReport {
    pub(crate) fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            setup: None,
            adaptedness: None,
            ideal_scan: None,
            star_coefficients: Vec::new(),
            verdicts: Vec::new(),
            equivalence: None,
            spectrum: None,
            maslov: None,
            timing: None,
            conventions: CONVENTIONS,
            passed: true,
        }
    }

    pub(crate) fn push(&mut self, v: Verdict) {
        self.passed &= v.passed;
        self.verdicts.push(v);
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        text::render(self)
    }
}
