use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{monomial_degree, monomials_up_to, ChartPoly, GaussRational, Monomial};

use super::{FedosovError, FormalProduct};

/// `⋆_k(f, g) = Σ_{A,B} c_{AB} ∂^A f ∂^B g`, recovered from the values on
/// monomials with `|A|, |B| ≤ max_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidiffTable {
    pub k: u32,
    pub max_order: u32,
    pub entries: BTreeMap<(Monomial, Monomial), ChartPoly>,
}

#[derive(Serialize)]
struct EntryOut<'a> {
    left: &'a Monomial,
    right: &'a Monomial,
    coeff: String,
}

impl Serialize for BidiffTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<EntryOut> = self
            .entries
            .iter()
            .map(|((a, b), c)| EntryOut {
                left: a,
                right: b,
                coeff: c.to_string(),
            })
            .collect();
        let (l, r) = self.differential_orders();
        let mut st = s.serialize_struct("BidiffTable", 5)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("max_order", &self.max_order)?;
        st.serialize_field("order_left", &l)?;
        st.serialize_field("order_right", &r)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

fn factorial_ratio(a: &[u32], sub: &[u32]) -> Option<(GaussRational, Monomial)> {
    let mut c = 1i64;
    let mut rest = Vec::with_capacity(a.len());
    for (&x, &y) in a.iter().zip(sub) {
        if y > x {
            return None;
        }
        for t in 0..y {
            c *= (x - t) as i64;
        }
        rest.push(x - y);
    }
    Some((GaussRational::from_int(c), rest))
}

/// `∂^A` applied to a polynomial.
pub(crate) fn apply_derivative(f: &ChartPoly, a: &[u32]) -> ChartPoly {
    f.diff_multi(a).expect("dimension checked")
}

impl BidiffTable {
    /// Highest derivative orders in the left and right argument.
    pub fn differential_orders(&self) -> (u32, u32) {
        let l = self.entries.keys().map(|(a, _)| monomial_degree(a)).max().unwrap_or(0);
        let r = self.entries.keys().map(|(_, b)| monomial_degree(b)).max().unwrap_or(0);
        (l, r)
    }

    /// Differentiation order at most `k` in each argument, certified up to
    /// `max_order` (which must exceed `k` for the check to say anything).
    pub fn is_natural(&self) -> bool {
        let (l, r) = self.differential_orders();
        l <= self.k && r <= self.k
    }

    /// Entries violating the order bound.
    pub fn naturalness_violations(&self) -> Vec<(Monomial, Monomial)> {
        self.entries
            .keys()
            .filter(|(a, b)| monomial_degree(a) > self.k || monomial_degree(b) > self.k)
            .cloned()
            .collect()
    }

    pub fn apply(&self, f: &ChartPoly, g: &ChartPoly) -> ChartPoly {
        let mut out = ChartPoly::zero(f.dim());
        for ((a, b), c) in &self.entries {
            let df = apply_derivative(f, a);
            if df.is_zero() {
                continue;
            }
            let dg = apply_derivative(g, b);
            if dg.is_zero() {
                continue;
            }
            out.add_assign_poly(&(&(&df * &dg) * c));
        }
        out
    }
}

/// Triangular solve for the coefficients of `⋆_k` from its values on
/// monomial pairs: `c_{AB} A! B! = ⋆_k(x^A, x^B) − Σ_{(A',B') < (A,B)} c_{A'B'} ∂^{A'}x^A ∂^{B'}x^B`.
pub fn extract_bidiff<P: FormalProduct + ?Sized>(
    product: &P,
    k: u32,
    max_order: u32,
) -> Result<BidiffTable, FedosovError> {
    if k > product.order() {
        return Err(FedosovError::OrderTooHigh {
            requested: k,
            available: product.order(),
        });
    }
    let dim = product.dim();
    let monos = monomials_up_to(dim, max_order);
    let mut pairs: Vec<(&Monomial, &Monomial)> = monos.iter().flat_map(|a| monos.iter().map(move |b| (a, b))).collect();
    pairs.sort_by_key(|(a, b)| monomial_degree(a) + monomial_degree(b));
    let mut entries: BTreeMap<(Monomial, Monomial), ChartPoly> = BTreeMap::new();
    for (a, b) in pairs {
        let fa = ChartPoly::monomial(a.clone(), GaussRational::one());
        let fb = ChartPoly::monomial(b.clone(), GaussRational::one());
        let mut v = product.coefficient(k, &fa, &fb)?;
        for ((a2, b2), c) in &entries {
            let Some((ca, ra)) = factorial_ratio(a, a2) else { continue };
            let Some((cb, rb)) = factorial_ratio(b, b2) else { continue };
            let mut mono = ra;
            for (x, y) in mono.iter_mut().zip(&rb) {
                *x += y;
            }
            let t = c * &ChartPoly::monomial(mono, &ca * &cb);
            v.sub_assign_poly(&t);
        }
        if v.is_zero() {
            continue;
        }
        let (fa_fact, _) = factorial_ratio(a, a).expect("A ≤ A");
        let (fb_fact, _) = factorial_ratio(b, b).expect("B ≤ B");
        let norm = (&fa_fact * &fb_fact).inv().expect("nonzero factorials");
        entries.insert((a.clone(), b.clone()), v.scale(&norm));
    }
    Ok(BidiffTable { k, max_order, entries })
}
