//! Multilinear program instances and the native `.mlp` text format.
//!
//! An instance is a sum of monomials `coeff * prod_{j in vars} x_j`, minimized
//! over the unit box `[0,1]^n` or the binary cube `{0,1}^n`. Duplicate
//! monomials are merged at construction and zero coefficients dropped, so an
//! instance always holds distinct index sets in canonical order.
//!
//! Format (UTF-8, line oriented, `#` starts a comment):
//!
//! ```text
//! <n> <m> <unitbox|binary>
//! <coeff> <j1> <j2> ... <jd>     (m lines, 1-based strictly increasing)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    UnitBox,
    Binary,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::UnitBox => "unitbox",
            Domain::Binary => "binary",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub vars: IndexSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MlpInstance {
    n: usize,
    domain: Domain,
    monomials: Vec<Monomial>,
}

impl MlpInstance {
    /// Normalizing constructor: merges duplicate index sets, drops zero
    /// coefficients, orders monomials canonically.
    pub fn new(n: usize, domain: Domain, terms: Vec<(f64, IndexSet)>) -> Result<Self> {
        let mut merged: BTreeMap<IndexSet, f64> = BTreeMap::new();
        for (coeff, vars) in terms {
            if vars.max_index() >= n {
                return Err(Error::Construction {
                    msg: format!("index {} out of range for n = {}", vars.max_index() + 1, n),
                });
            }
            *merged.entry(vars).or_insert(0.0) += coeff;
        }
        let monomials = merged
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|(vars, coeff)| Monomial { coeff, vars })
            .collect();
        Ok(Self { n, domain, monomials })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn max_degree(&self) -> usize {
        self.monomials.iter().map(|m| m.vars.len()).max().unwrap_or(0)
    }

    /// Variables that occur in at least one monomial, ascending.
    pub fn used_variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.n];
        for m in &self.monomials {
            for j in m.vars.iter() {
                used[j] = true;
            }
        }
        (0..self.n).filter(|&j| used[j]).collect()
    }

    /// Magnitude of the trivial lower bound: eta = -sum_i min(0, alpha_i).
    /// Every RML bound lies in [-eta, 0].
    pub fn eta(&self) -> f64 {
        -self.monomials.iter().map(|m| m.coeff.min(0.0)).sum::<f64>()
    }

    /// Evaluates f at a point (used by the enumeration oracles).
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.monomials
            .iter()
            .map(|m| m.coeff * m.vars.iter().map(|j| x[j]).product::<f64>())
            .sum()
    }

    /// Parses the native text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .filter(|(_, l)| !l.trim().is_empty());

        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected header `<n> <m> <domain>`".into(),
            });
        }
        let n: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid variable count `{}`", fields[0]),
        })?;
        let m: usize = fields[1].parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid monomial count `{}`", fields[1]),
        })?;
        let domain = match fields[2] {
            "unitbox" => Domain::UnitBox,
            "binary" => Domain::Binary,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown domain `{other}` (expected unitbox|binary)"),
                })
            }
        };

        let mut terms = Vec::with_capacity(m);
        for _ in 0..m {
            let (line_no, body) = lines.next().ok_or(Error::Parse {
                line: text.lines().count() + 1,
                msg: format!("expected {m} monomial lines"),
            })?;
            terms.push(parse_monomial(line_no, &body, n)?);
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing content after the declared monomials".into(),
            });
        }
        Self::new(n, domain, terms).map_err(|e| match e {
            Error::Construction { msg } => Error::Parse { line: 0, msg },
            other => other,
        })
    }

    /// Renders the native text format; `parse(write(x)) == x` exactly.
    pub fn write(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {}",
            self.n,
            self.monomials.len(),
            self.domain.as_str()
        );
        for m in &self.monomials {
            let _ = writeln!(
                out,
                "{} {}",
                m.coeff,
                m.vars
                    .iter()
                    .map(|j| (j + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
        out
    }
}

fn strip_comment(line: &str) -> String {
    match line.find('#') {
        Some(pos) => line[..pos].to_string(),
        None => line.to_string(),
    }
}

fn parse_monomial(line_no: usize, body: &str, n: usize) -> Result<(f64, IndexSet)> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() < 2 {
        return Err(Error::Parse {
            line: line_no,
            msg: "expected `<coeff> <j1> ...`".into(),
        });
    }
    let coeff: f64 = fields[0].parse().map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("invalid coefficient `{}`", fields[0]),
    })?;
    let mut indices = Vec::with_capacity(fields.len() - 1);
    let mut prev: Option<usize> = None;
    for f in &fields[1..] {
        let j: usize = f.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid index `{f}`"),
        })?;
        if j == 0 || j > n {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("index {j} out of range [1, {n}]"),
            });
        }
        match prev {
            Some(p) if j <= p => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("indices must be strictly increasing, got {p} then {j}"),
                })
            }
            _ => prev = Some(j),
        }
        indices.push(j - 1);
    }
    let vars = IndexSet::new(indices).map_err(|e| Error::Parse {
        line: line_no,
        msg: e.to_string(),
    })?;
    Ok((coeff, vars))
}

/// The running example used throughout the tests:
/// f(x) = x1 x2 x3 - x2 x3 x4 - x1 x3 x4 over [0,1]^4.
pub fn example_instance() -> MlpInstance {
    MlpInstance::parse("4 3 unitbox\n1 1 2 3\n-1 2 3 4\n-1 1 3 4\n").expect("valid")
}
