//! Monotone 3-CNF formulas under exactly-one-in-three semantics.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A monotone 3-CNF formula. Clauses hold 1-based variable indices in
/// strictly increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFormula", into = "RawFormula")]
pub struct Formula1in3 {
    num_vars: usize,
    clauses: Vec<[usize; 3]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormula {
    num_vars: usize,
    clauses: Vec<[usize; 3]>,
}

impl TryFrom<RawFormula> for Formula1in3 {
    type Error = Error;

    fn try_from(raw: RawFormula) -> Result<Self> {
        Formula1in3::new(raw.num_vars, raw.clauses)
    }
}

impl From<Formula1in3> for RawFormula {
    fn from(f: Formula1in3) -> Self {
        RawFormula {
            num_vars: f.num_vars,
            clauses: f.clauses,
        }
    }
}

impl Formula1in3 {
    pub fn new(num_vars: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            if !(c[0] < c[1] && c[1] < c[2]) {
                return Err(Error::InvalidFormula(format!(
                    "clause {} ({} {} {}) is not strictly increasing",
                    j + 1,
                    c[0],
                    c[1],
                    c[2]
                )));
            }
            if c[0] == 0 || c[2] > num_vars {
                return Err(Error::InvalidFormula(format!(
                    "clause {} references a variable outside 1..={num_vars}",
                    j + 1
                )));
            }
        }
        Ok(Formula1in3 { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Parses the `p 1in3 n m` text format. Lines starting with `c` are
    /// comments; each clause line holds three 1-based indices in any order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            let Some((n, m)) = header else {
                if tokens.len() != 4 || tokens[0] != "p" || tokens[1] != "1in3" {
                    return Err(parse_err(line, "expected header `p 1in3 <vars> <clauses>`"));
                }
                header = Some((number(tokens[2], line)?, number(tokens[3], line)?));
                continue;
            };
            if clauses.len() == m {
                return Err(parse_err(
                    line,
                    format!("more than the declared {m} clauses"),
                ));
            }
            if tokens.len() != 3 {
                return Err(parse_err(line, "a clause has exactly three variables"));
            }
            let mut c = [0usize; 3];
            for (slot, tok) in c.iter_mut().zip(&tokens) {
                *slot = number(tok, line)?;
                if *slot == 0 || *slot > n {
                    return Err(parse_err(line, format!("variable {slot} outside 1..={n}")));
                }
            }
            c.sort_unstable();
            if c[0] == c[1] || c[1] == c[2] {
                return Err(parse_err(line, "repeated variable in clause"));
            }
            clauses.push(c);
        }
        let Some((n, m)) = header else {
            return Err(parse_err(text.lines().count().max(1), "missing header"));
        };
        if clauses.len() != m {
            return Err(parse_err(
                text.lines().count().max(1),
                format!("declared {m} clauses, found {}", clauses.len()),
            ));
        }
        Formula1in3::new(n, clauses)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p 1in3 {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            let _ = writeln!(out, "{} {} {}", c[0], c[1], c[2]);
        }
        out
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a non-negative integer")))
}

/// Truth values indexed from zero. For 1-in-3 formulas, index `i` holds `x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Assignment {
            values: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    /// Value of the 1-based variable `x_var`.
    pub fn var(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn bits(&self) -> Vec<u8> {
        self.values.iter().map(|&b| b as u8).collect()
    }

    /// Every clause has exactly one true variable.
    pub fn satisfies_1in3(&self, f: &Formula1in3) -> bool {
        self.values.len() == f.num_vars()
            && f.clauses()
                .iter()
                .all(|c| c.iter().filter(|&&x| self.var(x)).count() == 1)
    }
}
