//! Line-oriented configuration format.
//!
//! ```text
//! # comment
//! [chart]
//! dim = 4
//! [omega]
//! darboux                 # or entries `i,j = <scalar>` (antisymmetric partner implied)
//! [christoffel]
//! 3,1,1 = x1              # Γ^l_{jk} as `l,j,k = <poly>`, 1-based
//! [Omega]
//! 1: 1,2 = x3             # Ω_k as `k: i,j = <poly>`
//! [ordering]
//! standard                # or weyl
//! [s]
//! xi3^3 + lambda*xi1*xi3  # Weyl literal in x<k>, xi<k>, lambda; lines are summed
//! [lagrangian]
//! p-axes = 3,4
//! [truncation]
//! lambda_order = 3
//! budget = 8
//! ```
//!
//! The sections `[bs]`, `[maslov]`, `[adapted]` and `[verify]` hold
//! `key = value` lines interpreted by the commands that use them.
//! Polynomials use the literal grammar of [`crate::algebra::parse`].

use std::collections::BTreeMap;

use crate::algebra::parse::{chart_var, parse_flat};
use crate::algebra::{parse_chart_poly, parse_scalar, ChartPoly, GaussRational, PolyForm};
use crate::weyl::{OrderingMode, WeylElement, WeylKey};

use super::setup::{darboux_form, RawSetup, S_BUDGET};

pub const SECTIONS: &[&str] = &[
    "chart",
    "omega",
    "christoffel",
    "Omega",
    "ordering",
    "s",
    "lagrangian",
    "truncation",
    "bs",
    "maslov",
    "adapted",
    "verify",
];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigLine {
    pub line: usize,
    pub text: String,
}

/// A parsed config: the construction data plus the raw lines of every
/// section, for sections interpreted elsewhere.
#[derive(Clone, Debug)]
pub struct ConfigFile {
    pub setup: RawSetup,
    pub sections: BTreeMap<String, Vec<ConfigLine>>,
}

impl ConfigFile {
    pub fn has_section(&self, name: &str) -> bool {
        self.sections.contains_key(name)
    }

    pub fn section(&self, name: &str) -> &[ConfigLine] {
        self.sections.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `key = value` pairs of a section, in file order.
    pub fn key_values(&self, name: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
        self.section(name)
            .iter()
            .map(|l| match split_eq(&l.text) {
                Some((k, v)) => Ok((l.line, k, v)),
                None => err(l.line, format!("expected `key = value` in [{name}]")),
            })
            .collect()
    }

    /// Value of `key` in `section` with its line number.
    pub fn value(&self, section: &str, key: &str) -> Result<Option<(usize, String)>, ConfigError> {
        Ok(self
            .key_values(section)?
            .into_iter()
            .find(|(_, k, _)| k == key)
            .map(|(l, _, v)| (l, v)))
    }
}

fn split_eq(text: &str) -> Option<(String, String)> {
    let (k, v) = text.split_once('=')?;
    Some((k.trim().to_string(), v.trim().to_string()))
}

fn parse_indices(line: usize, s: &str, count: usize, dim: usize) -> Result<Vec<usize>, ConfigError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != count {
        return err(line, format!("expected {count} comma-separated indices, got `{s}`"));
    }
    parts
        .iter()
        .map(|p| match p.parse::<usize>() {
            Ok(k) if (1..=dim).contains(&k) => Ok(k - 1),
            _ => err(line, format!("index `{p}` must be an integer in 1..{dim}")),
        })
        .collect()
}

fn parse_u32(line: usize, s: &str) -> Result<u32, ConfigError> {
    s.trim()
        .parse()
        .or_else(|_| err(line, format!("expected a non-negative integer, got `{s}`")))
}

fn poly(line: usize, s: &str, dim: usize) -> Result<ChartPoly, ConfigError> {
    parse_chart_poly(s, dim).or_else(|e| err(line, format!("{e} in `{s}`")))
}

/// Parses a Weyl literal in `x1..x_d`, `xi1..xi_d` and `lambda`.
pub fn parse_weyl_literal(input: &str, dim: usize, budget: u32) -> Result<WeylElement, crate::algebra::LiteralError> {
    let base = chart_var(dim);
    let resolve = |name: &str| {
        if name == "lambda" {
            return Some(2 * dim);
        }
        if let Some(rest) = name.strip_prefix("xi") {
            let k: usize = rest.parse().ok()?;
            return (1..=dim).contains(&k).then(|| dim + k - 1);
        }
        base(name)
    };
    let flat = parse_flat(input, 2 * dim + 1, &resolve)?;
    let mut out = WeylElement::zero(dim, budget);
    for (m, c) in flat {
        let x = m[..dim].to_vec();
        let xi = m[dim..2 * dim].to_vec();
        out.add_term(WeylKey::new(xi, m[2 * dim]), ChartPoly::monomial(x, c));
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let mut sections: BTreeMap<String, Vec<ConfigLine>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return err(line, "unterminated section header");
            };
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return err(line, format!("unknown section [{name}]"));
            }
            if sections.contains_key(name) {
                return err(line, format!("duplicate section [{name}]"));
            }
            sections.insert(name.to_string(), Vec::new());
            current = Some(name.to_string());
            continue;
        }
        let Some(sec) = &current else {
            return err(line, "content before the first section header");
        };
        sections.get_mut(sec).expect("inserted").push(ConfigLine {
            line,
            text: body.to_string(),
        });
    }

    let lines = |name: &str| sections.get(name).cloned().unwrap_or_default();

    let mut dim = None;
    for l in lines("chart") {
        match split_eq(&l.text) {
            Some((k, v)) if k == "dim" => {
                let d = parse_u32(l.line, &v)? as usize;
                if d == 0 || d % 2 != 0 {
                    return err(l.line, "dim must be a positive even integer");
                }
                dim = Some(d);
            }
            _ => return err(l.line, "expected `dim = <even integer>` in [chart]"),
        }
    }
    let Some(dim) = dim else {
        return err(1, "missing [chart] dim");
    };
    let n = dim / 2;
    let mut setup = RawSetup::flat(n, OrderingMode::Weyl, 2);

    let omega_lines = lines("omega");
    if !omega_lines.is_empty() && !(omega_lines.len() == 1 && omega_lines[0].text == "darboux") {
        let mut m = vec![vec![None::<GaussRational>; dim]; dim];
        for l in &omega_lines {
            let Some((k, v)) = split_eq(&l.text) else {
                return err(l.line, "expected `darboux` or `i,j = <scalar>` in [omega]");
            };
            let idx = parse_indices(l.line, &k, 2, dim)?;
            let c = parse_scalar(&v).or_else(|e| err(l.line, format!("{e} in `{v}`")))?;
            let (i, j) = (idx[0], idx[1]);
            for (a, b, val) in [(i, j, c.clone()), (j, i, -&c)] {
                match &m[a][b] {
                    Some(old) if *old != val => {
                        return err(l.line, format!("conflicting omega entry ({}, {})", a + 1, b + 1))
                    }
                    _ => m[a][b] = Some(val),
                }
            }
        }
        setup.omega = m
            .into_iter()
            .map(|r| r.into_iter().map(Option::unwrap_or_default).collect())
            .collect();
    } else {
        setup.omega = darboux_form(n);
    }

    for l in lines("christoffel") {
        let Some((k, v)) = split_eq(&l.text) else {
            return err(l.line, "expected `l,j,k = <poly>` in [christoffel]");
        };
        let idx = parse_indices(l.line, &k, 3, dim)?;
        let key = (idx[0], idx[1], idx[2]);
        if setup.christoffel.contains_key(&key) {
            return err(l.line, format!("duplicate christoffel entry {k}"));
        }
        setup.christoffel.insert(key, poly(l.line, &v, dim)?);
    }

    for l in lines("Omega") {
        let Some((order, rest)) = l.text.split_once(':') else {
            return err(l.line, "expected `k: i,j = <poly>` in [Omega]");
        };
        let order = parse_u32(l.line, order)?;
        if order == 0 {
            return err(l.line, "Omega series starts at lambda^1");
        }
        let Some((k, v)) = split_eq(rest) else {
            return err(l.line, "expected `k: i,j = <poly>` in [Omega]");
        };
        let idx = parse_indices(l.line, &k, 2, dim)?;
        if idx[0] == idx[1] {
            return err(l.line, "Omega component needs distinct indices");
        }
        let f = poly(l.line, &v, dim)?;
        setup
            .omega_series
            .entry(order)
            .or_insert_with(|| PolyForm::zero(dim, 2))
            .add_component(idx, &f);
    }
    setup.omega_series.retain(|_, f| !f.is_zero());

    for l in lines("ordering") {
        setup.ordering = match l.text.as_str() {
            "weyl" => OrderingMode::Weyl,
            "standard" => OrderingMode::Standard,
            other => return err(l.line, format!("unknown ordering `{other}`")),
        };
    }

    for l in lines("s") {
        let s = parse_weyl_literal(&l.text, dim, S_BUDGET).or_else(|e| err(l.line, e.to_string()))?;
        setup.s.add_assign_unchecked(&s);
    }

    for l in lines("lagrangian") {
        match split_eq(&l.text) {
            Some((k, v)) if k == "p-axes" => {
                setup.p_axes = parse_indices(l.line, &v, v.split(',').count(), dim)?;
            }
            _ => return err(l.line, "expected `p-axes = i,j,...` in [lagrangian]"),
        }
    }

    for l in lines("truncation") {
        match split_eq(&l.text) {
            Some((k, v)) if k == "lambda_order" => setup.lambda_order = parse_u32(l.line, &v)?,
            Some((k, v)) if k == "budget" => setup.budget = Some(parse_u32(l.line, &v)?),
            _ => return err(l.line, "expected `lambda_order = N` or `budget = D` in [truncation]"),
        }
    }

    Ok(ConfigFile { setup, sections })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = "\
# cotangent model
[chart]
dim = 2
[ordering]
standard
[christoffel]
2,1,1 = x1
[s]
xi2^3 + lambda*xi1*xi2  # mixed
[truncation]
lambda_order = 3
";

    #[test]
    fn parses_sections() {
        let cfg = parse_config(CFG).unwrap();
        assert_eq!(cfg.setup.n, 1);
        assert_eq!(cfg.setup.ordering, OrderingMode::Standard);
        assert_eq!(cfg.setup.christoffel[&(1, 0, 0)], ChartPoly::var(2, 0));
        assert_eq!(cfg.setup.s.num_terms(), 2);
        assert_eq!(cfg.setup.lambda_order, 3);
        assert_eq!(cfg.setup.p_axes, vec![1]);
    }

    #[test]
    fn errors_cite_lines() {
        let bad = CFG.replace("2,1,1 = x1", "2,1,1 = y1");
        assert_eq!(parse_config(&bad).unwrap_err().line, 7);
        let bad = CFG.replace("[s]", "[nonsense]");
        assert_eq!(parse_config(&bad).unwrap_err().line, 8);
        assert!(parse_config("[chart]\ndim = 3\n").is_err());
    }
}
