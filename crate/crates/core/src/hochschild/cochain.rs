use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{monomial_degree, ChartPoly, GaussRational, Monomial};
use crate::fedosov::BidiffTable;

use super::HochschildError;

/// A multidifferential operator
/// `C(f_1, …, f_k) = Σ c_{I_1…I_k}(x) ∂^{I_1} f_1 ⋯ ∂^{I_k} f_k`
/// with polynomial coefficients. On the polynomial algebra the coefficient
/// table determines the operator, so table equality is operator equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDiffOp {
    dim: usize,
    arity: usize,
    terms: BTreeMap<Vec<Monomial>, ChartPoly>,
}

/// Splits the multi-index `idx` into `parts` ordered summands, with the
/// multinomial coefficient of the generalized Leibniz rule.
fn leibniz_splits(idx: &[u32], parts: usize) -> Vec<(Vec<Monomial>, i64)> {
    let mut out = vec![(vec![vec![0u32; idx.len()]; parts], 1i64)];
    for (axis, &e) in idx.iter().enumerate() {
        let mut next = Vec::new();
        for (split, c) in &out {
            compositions(e, parts, &mut |comp: &[u32]| {
                let mut s = split.clone();
                for (p, &v) in comp.iter().enumerate() {
                    s[p][axis] = v;
                }
                next.push((s, c * multinomial(e, comp)));
            });
        }
        out = next;
    }
    out
}

fn compositions(total: u32, parts: usize, f: &mut dyn FnMut(&[u32])) {
    fn rec(rem: u32, buf: &mut Vec<u32>, parts: usize, f: &mut dyn FnMut(&[u32])) {
        if buf.len() + 1 == parts {
            buf.push(rem);
            f(buf);
            buf.pop();
            return;
        }
        for v in 0..=rem {
            buf.push(v);
            rec(rem - v, buf, parts, f);
            buf.pop();
        }
    }
    rec(total, &mut Vec::with_capacity(parts), parts, f);
}

fn multinomial(total: u32, comp: &[u32]) -> i64 {
    let mut c = 1i64;
    let mut left = total;
    for &k in comp {
        // binom(left, k)
        let mut b = 1i64;
        for t in 0..k {
            b = b * (left - t) as i64 / (t + 1) as i64;
        }
        c *= b;
        left -= k;
    }
    c
}

fn add_mono(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl MultiDiffOp {
    pub fn zero(dim: usize, arity: usize) -> Self {
        Self {
            dim,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// The identity map as a 1-cochain.
    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zero(dim, 1);
        out.add_term(vec![vec![0; dim]], ChartPoly::one(dim));
        out
    }

    /// The pointwise product `μ₀(f, g) = fg`.
    pub fn pointwise_product(dim: usize) -> Self {
        let mut out = Self::zero(dim, 2);
        out.add_term(vec![vec![0; dim]; 2], ChartPoly::one(dim));
        out
    }

    /// The bivector operator `(f, g) ↦ P^{ij} ∂_i f ∂_j g`.
    pub fn from_bivector(p: &[Vec<ChartPoly>]) -> Self {
        let dim = p.len();
        let mut out = Self::zero(dim, 2);
        for (i, row) in p.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let mut a = vec![0; dim];
                let mut b = vec![0; dim];
                a[i] = 1;
                b[j] = 1;
                out.add_term(vec![a, b], c.clone());
            }
        }
        out
    }

    pub fn from_bidiff(table: &BidiffTable, dim: usize) -> Self {
        let mut out = Self::zero(dim, 2);
        for ((a, b), c) in &table.entries {
            out.add_term(vec![a.clone(), b.clone()], c.clone());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Hochschild degree `arity − 1`.
    pub fn degree(&self) -> usize {
        self.arity - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &ChartPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &[Monomial]) -> ChartPoly {
        self.terms.get(key).cloned().unwrap_or_else(|| ChartPoly::zero(self.dim))
    }

    pub fn add_term(&mut self, key: Vec<Monomial>, c: ChartPoly) {
        assert_eq!(key.len(), self.arity, "key arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_poly(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), HochschildError> {
        if self.dim != other.dim {
            return Err(HochschildError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.arity != other.arity {
            return Err(HochschildError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, HochschildError> {
        self.try_add_scaled(other, &GaussRational::one())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, HochschildError> {
        self.try_add_scaled(other, &GaussRational::from_int(-1))
    }

    pub fn try_add_scaled(&self, other: &Self, s: &GaussRational) -> Result<Self, HochschildError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.scale(s));
        }
        Ok(out)
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        let mut out = Self::zero(self.dim, self.arity);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale(s));
        }
        out
    }

    /// Highest derivative order falling on argument `slot`.
    pub fn order_in(&self, slot: usize) -> u32 {
        self.terms.keys().map(|k| monomial_degree(&k[slot])).max().unwrap_or(0)
    }

    /// Maximum over all slots of [`Self::order_in`].
    pub fn max_order(&self) -> u32 {
        (0..self.arity).map(|s| self.order_in(s)).max().unwrap_or(0)
    }

    pub fn apply(&self, args: &[ChartPoly]) -> Result<ChartPoly, HochschildError> {
        if args.len() != self.arity {
            return Err(HochschildError::ArityMismatch {
                left: self.arity,
                right: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| a.dim() != self.dim) {
            return Err(HochschildError::DimensionMismatch {
                left: self.dim,
                right: a.dim(),
            });
        }
        let mut cache: HashMap<(usize, &Monomial), ChartPoly> = HashMap::new();
        let mut out = ChartPoly::zero(self.dim);
        'terms: for (key, c) in &self.terms {
            let mut acc = c.clone();
            for (slot, idx) in key.iter().enumerate() {
                let d = cache
                    .entry((slot, idx))
                    .or_insert_with(|| args[slot].diff_multi(idx).expect("dimension checked"));
                if d.is_zero() {
                    continue 'terms;
                }
                acc = &acc * d;
            }
            out.add_assign_poly(&acc);
        }
        Ok(out)
    }

    /// A monomial argument tuple on which the operator is nonzero, with the
    /// value, or `None` for the zero operator. Evaluating on `x^{I_1}, …` for
    /// a key of minimal total order isolates that single coefficient.
    pub fn witness(&self) -> Option<(Vec<Monomial>, ChartPoly)> {
        let key = self
            .terms
            .keys()
            .min_by_key(|k| k.iter().map(|m| monomial_degree(m)).sum::<u32>())?;
        let args: Vec<ChartPoly> = key
            .iter()
            .map(|m| ChartPoly::monomial(m.clone(), GaussRational::one()))
            .collect();
        let v = self.apply(&args).expect("shapes match");
        Some((key.clone(), v))
    }

    /// Composition `C ∘_i C'`: `C'` inserted into slot `i` of `C`.
    fn insert(&self, slot: usize, inner: &Self) -> Self {
        let l = inner.arity;
        let mut out = Self::zero(self.dim, self.arity + l - 1);
        for (key, c) in &self.terms {
            let splits = leibniz_splits(&key[slot], l + 1);
            for (ikey, ic) in &inner.terms {
                for (parts, mult) in &splits {
                    let dc = ic.diff_multi(&parts[0]).expect("dimension checked");
                    if dc.is_zero() {
                        continue;
                    }
                    let mut nk = Vec::with_capacity(out.arity);
                    nk.extend(key[..slot].iter().cloned());
                    for (m, j) in ikey.iter().enumerate() {
                        nk.push(add_mono(j, &parts[m + 1]));
                    }
                    nk.extend(key[slot + 1..].iter().cloned());
                    out.add_term(nk, (&dc * c).scale(&GaussRational::from_int(*mult)));
                }
            }
        }
        out
    }

    /// Gerstenhaber insertion product
    /// `(C ∘ C')(f_0, …) = Σ_i (−1)^{i·|C'|} C(f_0, …, C'(f_i, …, f_{i+l}), …)`.
    pub fn compose(&self, inner: &Self) -> Result<Self, HochschildError> {
        if self.dim != inner.dim {
            return Err(HochschildError::DimensionMismatch {
                left: self.dim,
                right: inner.dim,
            });
        }
        let l = inner.degree();
        let mut out = Self::zero(self.dim, self.arity + inner.arity - 1);
        for i in 0..self.arity {
            let sign = if (i * l) % 2 == 0 { 1 } else { -1 };
            out = out.try_add_scaled(&self.insert(i, inner), &GaussRational::from_int(sign))?;
        }
        Ok(out)
    }
}

impl fmt::Display for MultiDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let slots: Vec<String> = k
                    .iter()
                    .map(|m| {
                        let d: Vec<String> = m
                            .iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(a, &e)| if e == 1 { format!("d{}", a + 1) } else { format!("d{}^{e}", a + 1) })
                            .collect();
                        if d.is_empty() {
                            "1".into()
                        } else {
                            d.join("")
                        }
                    })
                    .collect();
                format!("({c})[{}]", slots.join(" | "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Hochschild coboundary
/// `bC(f_0, …, f_n) = f_0 C(f_1, …) + Σ_i (−1)^{i+1} C(…, f_i f_{i+1}, …) + (−1)^{n+1} C(f_0, …, f_{n−1}) f_n`
/// for `C` of arity `n`.
pub fn hochschild_b(c: &MultiDiffOp) -> MultiDiffOp {
    let n = c.arity;
    let dim = c.dim;
    let zero = vec![0u32; dim];
    let mut out = MultiDiffOp::zero(dim, n + 1);
    for (key, coef) in &c.terms {
        let mut first = vec![zero.clone()];
        first.extend(key.iter().cloned());
        out.add_term(first, coef.clone());

        let mut last = key.clone();
        last.push(zero.clone());
        let s = if (n + 1) % 2 == 0 { 1 } else { -1 };
        out.add_term(last, coef.scale(&GaussRational::from_int(s)));

        for i in 0..n {
            let s = if (i + 1) % 2 == 0 { 1 } else { -1 };
            for (parts, mult) in leibniz_splits(&key[i], 2) {
                let mut nk = Vec::with_capacity(n + 1);
                nk.extend(key[..i].iter().cloned());
                nk.extend(parts);
                nk.extend(key[i + 1..].iter().cloned());
                out.add_term(nk, coef.scale(&GaussRational::from_int(s * mult)));
            }
        }
    }
    out
}

/// `[C, C'] = C ∘ C' − (−1)^{|C||C'|} C' ∘ C`.
pub fn gerstenhaber_bracket(a: &MultiDiffOp, b: &MultiDiffOp) -> Result<MultiDiffOp, HochschildError> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    let s = if (a.degree() * b.degree()) % 2 == 0 { -1 } else { 1 };
    ab.try_add_scaled(&ba, &GaussRational::from_int(s))
}
