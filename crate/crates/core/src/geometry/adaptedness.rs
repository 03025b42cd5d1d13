use serde::Serialize;

use crate::weyl::{OrderingMode, OrderingSpec};

use super::QuantizationSetup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub label: &'static str,
    pub description: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Verdicts for the four adaptedness conditions on the construction data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdaptednessReport {
    pub conditions: Vec<ConditionVerdict>,
    /// True when every term of `s` has degree ≥ 4.
    pub s_in_w4: bool,
}

impl AdaptednessReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, label: &str) -> Option<&ConditionVerdict> {
        self.conditions.iter().find(|c| c.label == label)
    }
}

fn verdict(label: &'static str, description: &'static str, witness: Option<String>) -> ConditionVerdict {
    ConditionVerdict {
        label,
        description,
        passed: witness.is_none(),
        witness,
    }
}

/// Evaluates conditions i-iv; never fails, failures carry a witness.
pub fn check_adapted_data(setup: &QuantizationSetup) -> AdaptednessReport {
    let p = setup.p_axes();
    let q = setup.q_axes();
    let conn = setup.connection();

    // i: L totally geodesic, Γ^{p}_{jk}|_{p=0} = 0 for tangential j, k.
    let mut w1 = None;
    'i: for &l in p {
        for &j in &q {
            for &k in &q {
                let r = conn.symbol(l, j, k).restrict(p).expect("axes valid");
                if !r.is_zero() {
                    w1 = Some(format!("Gamma^{}_{{{},{}}}|_L = {r}", l + 1, j + 1, k + 1));
                    break 'i;
                }
            }
        }
    }

    // ii: tangential components of every Ω_k vanish on L.
    let mut w2 = None;
    'ii: for (order, form) in setup.omega_series() {
        let pulled = form.pullback_to_zero_set(p);
        let first = pulled.components().next().map(|(idx, c)| {
            format!("Omega_{order} restricted to L has ({c}) dx{}^dx{}", idx[0] + 1, idx[1] + 1)
        });
        if first.is_some() {
            w2 = first;
            break 'ii;
        }
    }

    // iii: every monomial of s carries a p-type fiber variable.
    let mut w3 = None;
    for (key, c) in setup.s().terms() {
        if p.iter().all(|&a| key.xi[a] == 0) {
            let mono: Vec<String> = key
                .xi
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(a, &e)| if e == 1 { format!("xi{}", a + 1) } else { format!("xi{}^{e}", a + 1) })
                .collect();
            w3 = Some(format!(
                "s contains ({c})*{}{} without a p-type fiber factor",
                mono.join("*"),
                if key.lambda > 0 { format!("*lambda^{}", key.lambda) } else { String::new() }
            ));
            break;
        }
    }

    // iv: fiber ordering equals the standard-ordered tensor.
    let mut w4 = None;
    let ord = setup.ordering();
    if ord.mode() != OrderingMode::Standard {
        let standard = OrderingSpec::standard(ord.poisson().to_vec(), p).expect("validated");
        'iv: for a in 0..setup.dim() {
            for b in 0..setup.dim() {
                if ord.mu()[a][b] != standard.mu()[a][b] {
                    w4 = Some(format!(
                        "ordering tensor mu^{{{},{}}} = {}, standard-ordered value is {}",
                        a + 1,
                        b + 1,
                        ord.mu()[a][b],
                        standard.mu()[a][b]
                    ));
                    break 'iv;
                }
            }
        }
    }

    AdaptednessReport {
        conditions: vec![
            verdict("i", "L is totally geodesic for the connection", w1),
            verdict("ii", "the deformed symplectic class restricts to zero on L", w2),
            verdict("iii", "s lies in the fiberwise vanishing ideal of TL", w3),
            verdict("iv", "the fiber product is standard ordered relative to L", w4),
        ],
        s_in_w4: setup.s_in_w4(),
    }
}
