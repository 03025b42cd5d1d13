use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::matrix::{invert, is_antisymmetric};
use crate::algebra::{ChartPoly, GaussMatrix, GaussRational, PolyForm};
use crate::weyl::{Connection, OrderingMode, OrderingSpec, WeylElement};

/// Budget used to hold the user-supplied normalization element `s` before
/// it is truncated to the working budget.
pub const S_BUDGET: u32 = 64;

/// Unvalidated construction data. Indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSetup {
    pub n: usize,
    /// Form matrix `ω_{ij}`, `ω = Σ_{i<j} ω_{ij} dx^i ∧ dx^j`.
    pub omega: GaussMatrix,
    /// `Γ^l_{jk}` keyed by `(l, j, k)`; absent entries are zero.
    pub christoffel: BTreeMap<(usize, usize, usize), ChartPoly>,
    /// `Ω_k` keyed by λ-power `k ≥ 1`.
    pub omega_series: BTreeMap<u32, PolyForm>,
    pub ordering: OrderingMode,
    pub s: WeylElement,
    pub p_axes: Vec<usize>,
    pub lambda_order: u32,
    /// Degree budget; defaults to `2·lambda_order + 2`.
    pub budget: Option<u32>,
}

/// Darboux form matrix on `(q_1..q_n, p_1..p_n)` with `ω = Σ dq_i ∧ dp_i`.
pub fn darboux_form(n: usize) -> GaussMatrix {
    let d = 2 * n;
    let mut m = vec![vec![GaussRational::zero(); d]; d];
    for i in 0..n {
        m[i][n + i] = GaussRational::one();
        m[n + i][i] = GaussRational::from_int(-1);
    }
    m
}

impl RawSetup {
    /// Flat Darboux data with `Γ = 0`, `Ω = 0`, `s = 0` and `L = {p = 0}`.
    pub fn flat(n: usize, ordering: OrderingMode, lambda_order: u32) -> Self {
        Self {
            n,
            omega: darboux_form(n),
            christoffel: BTreeMap::new(),
            omega_series: BTreeMap::new(),
            ordering,
            s: WeylElement::zero(2 * n, S_BUDGET),
            p_axes: (n..2 * n).collect(),
            lambda_order,
            budget: None,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }
}

/// One violated invariant; indices in messages are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Dimension(String),
    OmegaNotAntisymmetric { i: usize, j: usize },
    OmegaSingular,
    ChristoffelIndex { l: usize, j: usize, k: usize },
    Torsion { l: usize, j: usize, k: usize },
    NotSymplectic { i: usize, j: usize, k: usize },
    OmegaSeriesOrder { order: u32 },
    OmegaSeriesDegree { order: u32, degree: usize },
    NotClosed { order: u32, i: usize, j: usize, k: usize },
    Lagrangian(String),
    Ordering(String),
    SCentral,
    SLowDegree { degree: u32 },
    Budget { budget: u32, lambda_order: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension(m) => write!(f, "dimension: {m}"),
            Violation::OmegaNotAntisymmetric { i, j } => {
                write!(f, "omega is not antisymmetric at ({}, {})", i + 1, j + 1)
            }
            Violation::OmegaSingular => write!(f, "omega is degenerate"),
            Violation::ChristoffelIndex { l, j, k } => {
                write!(f, "christoffel index ({}, {}, {}) out of range", l + 1, j + 1, k + 1)
            }
            Violation::Torsion { l, j, k } => write!(
                f,
                "torsion: Gamma^{}_{{{},{}}} differs from Gamma^{}_{{{},{}}} at ({}, {}, {})",
                l + 1, j + 1, k + 1, l + 1, k + 1, j + 1, l + 1, j + 1, k + 1
            ),
            Violation::NotSymplectic { i, j, k } => write!(
                f,
                "connection is not symplectic: lowered Gamma_{{{},{},{}}} is not totally symmetric at ({}, {}, {})",
                i + 1, j + 1, k + 1, i + 1, j + 1, k + 1
            ),
            Violation::OmegaSeriesOrder { order } => {
                write!(f, "Omega series must start at lambda^1, got order {order}")
            }
            Violation::OmegaSeriesDegree { order, degree } => {
                write!(f, "Omega_{order} has form degree {degree}, expected 2")
            }
            Violation::NotClosed { order, i, j, k } => write!(
                f,
                "Omega_{order} is not closed: d Omega_{order} has nonzero component at ({}, {}, {})",
                i + 1, j + 1, k + 1
            ),
            Violation::Lagrangian(m) => write!(f, "lagrangian: {m}"),
            Violation::Ordering(m) => write!(f, "ordering: {m}"),
            Violation::SCentral => write!(f, "s has a nonzero central part"),
            Violation::SLowDegree { degree } => {
                write!(f, "s has a term of total degree {degree} < 3")
            }
            Violation::Budget { budget, lambda_order } => write!(
                f,
                "degree budget {budget} is below 2 * lambda_order = {}",
                2 * lambda_order
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid setup: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

/// Validated construction data with derived Poisson matrix, connection and
/// ordering tensor.
#[derive(Clone, Debug)]
pub struct QuantizationSetup {
    raw: RawSetup,
    poisson: GaussMatrix,
    connection: Connection,
    ordering: OrderingSpec,
    budget: u32,
    s_in_w4: bool,
}

impl PartialEq for QuantizationSetup {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw && self.budget == other.budget
    }
}

impl QuantizationSetup {
    pub fn raw(&self) -> &RawSetup {
        &self.raw
    }

    pub fn n(&self) -> usize {
        self.raw.n
    }

    pub fn dim(&self) -> usize {
        self.raw.dim()
    }

    pub fn omega(&self) -> &GaussMatrix {
        &self.raw.omega
    }

    /// `π^{ij}` with `{f, g} = π^{ij} ∂_i f ∂_j g`.
    pub fn poisson(&self) -> &GaussMatrix {
        &self.poisson
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn ordering(&self) -> &OrderingSpec {
        &self.ordering
    }

    pub fn omega_series(&self) -> &BTreeMap<u32, PolyForm> {
        &self.raw.omega_series
    }

    pub fn s(&self) -> &WeylElement {
        &self.raw.s
    }

    /// Whether every term of `s` has degree ≥ 4 (the stricter normalization);
    /// degree-3 terms are accepted and reported.
    pub fn s_in_w4(&self) -> bool {
        self.s_in_w4
    }

    pub fn p_axes(&self) -> &[usize] {
        &self.raw.p_axes
    }

    pub fn q_axes(&self) -> Vec<usize> {
        (0..self.dim()).filter(|a| !self.raw.p_axes.contains(a)).collect()
    }

    pub fn lambda_order(&self) -> u32 {
        self.raw.lambda_order
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    /// The same data with a different λ-order and budget, revalidated.
    pub fn with_truncation(&self, lambda_order: u32, budget: Option<u32>) -> Result<Self, ValidationError> {
        let mut raw = self.raw.clone();
        raw.lambda_order = lambda_order;
        raw.budget = budget;
        validate_setup(raw)
    }

    pub fn with_omega_series(&self, series: BTreeMap<u32, PolyForm>) -> Result<Self, ValidationError> {
        let mut raw = self.raw.clone();
        raw.omega_series = series;
        validate_setup(raw)
    }
}

/// Checks every invariant of the construction data exactly, collecting all
/// violations.
pub fn validate_setup(raw: RawSetup) -> Result<QuantizationSetup, ValidationError> {
    let mut v = Vec::new();
    let d = raw.dim();
    let fail = |v: Vec<Violation>| Err(ValidationError { violations: v });
    if raw.n == 0 {
        return fail(vec![Violation::Dimension("half-dimension must be positive".into())]);
    }
    if raw.omega.len() != d || raw.omega.iter().any(|r| r.len() != d) {
        return fail(vec![Violation::Dimension(format!("omega must be {d}x{d}"))]);
    }

    for i in 0..d {
        for j in i..d {
            if raw.omega[i][j] != -&raw.omega[j][i] {
                v.push(Violation::OmegaNotAntisymmetric { i, j });
            }
        }
    }
    let omega_inv = invert(&raw.omega);
    if omega_inv.is_none() {
        v.push(Violation::OmegaSingular);
    }

    let mut gamma = vec![vec![vec![ChartPoly::zero(d); d]; d]; d];
    for (&(l, j, k), c) in &raw.christoffel {
        if l >= d || j >= d || k >= d {
            v.push(Violation::ChristoffelIndex { l, j, k });
            continue;
        }
        if c.dim() != d {
            v.push(Violation::Dimension(format!(
                "christoffel ({}, {}, {}) has {} variables",
                l + 1,
                j + 1,
                k + 1,
                c.dim()
            )));
            continue;
        }
        gamma[l][j][k] = c.clone();
    }
    for l in 0..d {
        for j in 0..d {
            for k in j + 1..d {
                if gamma[l][j][k] != gamma[l][k][j] {
                    v.push(Violation::Torsion { l, j, k });
                }
            }
        }
    }
    // Γ_{ijk} = ω_{il} Γ^l_{jk} must be symmetric in (i, j).
    'sym: for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                let mut a = ChartPoly::zero(d);
                let mut b = ChartPoly::zero(d);
                for l in 0..d {
                    a.add_scaled(&gamma[l][j][k], &raw.omega[i][l]);
                    b.add_scaled(&gamma[l][i][k], &raw.omega[j][l]);
                }
                if a != b {
                    v.push(Violation::NotSymplectic { i, j, k });
                    break 'sym;
                }
            }
        }
    }

    for (&order, form) in &raw.omega_series {
        if order == 0 {
            v.push(Violation::OmegaSeriesOrder { order });
        }
        if form.degree() != 2 || form.dim() != d {
            v.push(Violation::OmegaSeriesDegree {
                order,
                degree: form.degree(),
            });
            continue;
        }
        if let Some((idx, _)) = form.d().components().next() {
            v.push(Violation::NotClosed {
                order,
                i: idx[0],
                j: idx[1],
                k: idx[2],
            });
        }
    }

    let mut p = raw.p_axes.clone();
    p.sort_unstable();
    p.dedup();
    if p.len() != raw.p_axes.len() || p.len() != raw.n || p.iter().any(|&a| a >= d) {
        v.push(Violation::Lagrangian(format!(
            "p-axes must be {} distinct axes in 1..{d}",
            raw.n
        )));
    } else {
        let q: Vec<usize> = (0..d).filter(|a| !p.contains(a)).collect();
        'lag: for &a in &q {
            for &b in &q {
                if !raw.omega[a][b].is_zero() {
                    v.push(Violation::Lagrangian(format!(
                        "omega pairs tangential axes {} and {}, so {{p = 0}} is not Lagrangian",
                        a + 1,
                        b + 1
                    )));
                    break 'lag;
                }
            }
        }
    }

    if raw.s.dim() != d {
        v.push(Violation::Dimension(format!("s has fiber dimension {}", raw.s.dim())));
    } else {
        if raw.s.terms().any(|(k, _)| k.is_central()) {
            v.push(Violation::SCentral);
        }
        if let Some(m) = raw.s.min_degree() {
            if m < 3 {
                v.push(Violation::SLowDegree { degree: m });
            }
        }
    }

    let budget = raw.budget.unwrap_or(2 * raw.lambda_order + 2);
    if budget < 2 * raw.lambda_order {
        v.push(Violation::Budget {
            budget,
            lambda_order: raw.lambda_order,
        });
    }

    let mut ordering = None;
    if let (Some(inv), true) = (&omega_inv, is_antisymmetric(&raw.omega)) {
        // π = −ω⁻¹ gives {q, p} = 1 for ω = dq ∧ dp.
        let poisson: GaussMatrix = inv.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let spec = match raw.ordering {
            OrderingMode::Weyl => Ok(OrderingSpec::weyl(poisson.clone())),
            OrderingMode::Standard => OrderingSpec::standard(poisson.clone(), &raw.p_axes),
            OrderingMode::Custom => Err(crate::weyl::WeylError::InvalidOrdering(
                "custom orderings are not supported in setups".into(),
            )),
        };
        match spec {
            Ok(s) => ordering = Some((poisson, s)),
            Err(e) => v.push(Violation::Ordering(e.to_string())),
        }
    }

    if !v.is_empty() {
        return fail(v);
    }
    let (poisson, ordering) = ordering.expect("no violations");
    let connection = Connection::new(d, gamma).expect("shapes checked");
    let s_in_w4 = raw.s.min_degree().is_none_or(|m| m >= 4);
    Ok(QuantizationSetup {
        raw,
        poisson,
        connection,
        ordering,
        budget,
        s_in_w4,
    })
}
