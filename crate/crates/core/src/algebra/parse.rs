//! Polynomial literal grammar shared by config files and the CLI.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' integer]
//! atom   := integer ['/' integer] | 'i' | identifier | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Identifiers are resolved by the caller, e.g.
//! `x1..x_d` for chart polynomials or `xi1`, `lambda` for Weyl elements.
//! Example: `3/2*x1^2*x2 - i*x3`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{ChartPoly, GaussRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {col}: {msg}")]
pub struct LiteralError {
    pub col: usize,
    pub msg: String,
}

/// Polynomial in an arbitrary flat list of variables.
pub type FlatPoly = BTreeMap<Vec<u32>, GaussRational>;

fn add_into(acc: &mut FlatPoly, m: Vec<u32>, c: GaussRational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn mul_flat(a: &FlatPoly, b: &FlatPoly) -> FlatPoly {
    let mut out = FlatPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            add_into(&mut out, m, ca * cb);
        }
    }
    out
}

struct Parser<'a, F> {
    chars: Vec<(usize, char)>,
    pos: usize,
    nvars: usize,
    resolve: &'a F,
}

impl<'a, F: Fn(&str) -> Option<usize>> Parser<'a, F> {
    fn col(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0 + 1).unwrap_or_else(|| {
            self.chars.last().map(|c| c.0 + 2).unwrap_or(1)
        })
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LiteralError> {
        Err(LiteralError {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn constant(&self, c: GaussRational) -> FlatPoly {
        let mut p = FlatPoly::new();
        add_into(&mut p, vec![0; self.nvars], c);
        p
    }

    fn expr(&mut self) -> Result<FlatPoly, LiteralError> {
        let mut acc = FlatPoly::new();
        let mut sign = 1;
        match self.peek() {
            Some('+') => self.pos += 1,
            Some('-') => {
                sign = -1;
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            for (m, c) in t {
                add_into(&mut acc, m, c.scale_int(sign));
            }
            match self.peek() {
                Some('+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FlatPoly, LiteralError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = mul_flat(&acc, &f);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, LiteralError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        Ok(s.parse().expect("digits"))
    }

    fn factor(&mut self) -> Result<FlatPoly, LiteralError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= 64 => e,
                _ => return self.err("exponent too large"),
            };
            let mut acc = self.constant(GaussRational::one());
            for _ in 0..e {
                acc = mul_flat(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FlatPoly, LiteralError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let mut d = BigInt::from(1);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    d = self.integer()?;
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                }
                Ok(self.constant(GaussRational::real(Rational::from_bigints(n, d))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                if name == "i" {
                    return Ok(self.constant(GaussRational::i()));
                }
                match (self.resolve)(&name) {
                    Some(k) if k < self.nvars => {
                        let mut m = vec![0; self.nvars];
                        m[k] = 1;
                        let mut p = FlatPoly::new();
                        p.insert(m, GaussRational::one());
                        Ok(p)
                    }
                    _ => {
                        self.pos = start;
                        self.err(format!("unknown variable '{name}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `input` as a polynomial in `nvars` variables named by `resolve`.
pub fn parse_flat<F: Fn(&str) -> Option<usize>>(
    input: &str,
    nvars: usize,
    resolve: &F,
) -> Result<FlatPoly, LiteralError> {
    let chars: Vec<(usize, char)> = input
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut p = Parser {
        chars,
        pos: 0,
        nvars,
        resolve,
    };
    let out = p.expr()?;
    if p.pos != p.chars.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Resolves `x1..x_dim` to axes `0..dim`.
pub fn chart_var(dim: usize) -> impl Fn(&str) -> Option<usize> {
    move |name: &str| {
        let k: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=dim).contains(&k).then(|| k - 1)
    }
}

/// Parses a chart polynomial literal such as `3/2*x1^2*x2 - i*x3`.
pub fn parse_chart_poly(input: &str, dim: usize) -> Result<ChartPoly, LiteralError> {
    let flat = parse_flat(input, dim, &chart_var(dim))?;
    Ok(ChartPoly::from_terms(dim, flat))
}

/// Parses a scalar: rational `p/q` or Gaussian `p/q + r/s*i`.
pub fn parse_scalar(input: &str) -> Result<GaussRational, LiteralError> {
    let flat = parse_flat(input, 0, &|_: &str| None)?;
    Ok(flat.get(&Vec::new()).cloned().unwrap_or_default())
}
