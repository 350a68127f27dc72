//! Text and JSON formats for matrices, cone lists and run records.
//!
//! A matrix file holds the dimension `d` on its first significant line,
//! followed by `d` lines of `d` integers; each line is one generator.
//! Lines starting with `#` and blank lines are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::cone::{Sign, SignedCone};
use crate::decompose::{Stats, Strategy, StrategyConfig};
use crate::error::{Error, Result};
use crate::lattice::Norm;
use crate::linalg::IntMatrix;

/// Largest dimension accepted from a file.
pub const MAX_FILE_DIM: usize = 512;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_int(tok: &str, line: usize) -> Result<BigInt> {
    let digits = tok.strip_prefix(['-', '+']).unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("not an integer: {tok:?}")));
    }
    BigInt::from_str(tok).map_err(|e| parse_err(line, format!("{tok:?}: {e}")))
}

/// Parses a matrix file. Singularity is not checked here.
pub fn parse_matrix_file(text: &str) -> Result<IntMatrix> {
    let mut lines =
        text.lines().enumerate().map(|(n, l)| (n + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or_else(|| parse_err(0, "empty matrix file"))?;
    let d: usize = header.parse().map_err(|_| parse_err(first, format!("expected dimension, found {header:?}")))?;
    if d == 0 || d > MAX_FILE_DIM {
        return Err(parse_err(first, format!("dimension must lie in 1..={MAX_FILE_DIM}, found {d}")));
    }
    let mut generators = Vec::with_capacity(d);
    let mut last = first;
    for (n, l) in lines {
        if generators.len() == d {
            return Err(parse_err(n, format!("more than {d} generator lines")));
        }
        let row = l.split_whitespace().map(|t| parse_int(t, n)).collect::<Result<Vec<_>>>()?;
        if row.len() != d {
            return Err(parse_err(n, format!("expected {d} entries, found {}", row.len())));
        }
        generators.push(row);
        last = n;
    }
    if generators.len() != d {
        return Err(parse_err(last, format!("expected {d} generator lines, found {}", generators.len())));
    }
    IntMatrix::from_columns(generators)
}

/// Writes a square matrix in matrix-file form, one generator per line.
pub fn write_matrix_file(a: &IntMatrix) -> String {
    let mut out = format!("{}\n", a.cols());
    for c in a.columns() {
        let row: Vec<String> = c.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses `p/q` or `p` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (parse_int(p.trim(), 1)?, parse_int(q.trim(), 1)?),
        None => (parse_int(s, 1)?, BigInt::from(1)),
    };
    if q.is_zero() {
        return Err(parse_err(1, "zero denominator"));
    }
    Ok(BigRational::new(p, q))
}

fn to_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("integer literal is a JSON number")
}

fn from_number(n: &Number) -> Result<BigInt> {
    let s = n.to_string();
    let digits = s.strip_prefix('-').unwrap_or(&s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Json(format!("not an integer: {s}")));
    }
    BigInt::from_str(&s).map_err(|e| Error::Json(e.to_string()))
}

/// One entry of a cone list; `generators` holds one generator per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConePair {
    pub sign: i64,
    pub generators: Vec<Vec<Number>>,
}

impl ConePair {
    pub fn from_cone(c: &SignedCone) -> Self {
        ConePair {
            sign: c.sign.as_i64(),
            generators: c.generators.columns().map(|col| col.iter().map(to_number).collect()).collect(),
        }
    }

    pub fn to_cone(&self, dim: usize) -> Result<SignedCone> {
        let sign = Sign::from_i64(self.sign)
            .ok_or_else(|| Error::Json(format!("sign must be +1 or -1, found {}", self.sign)))?;
        if self.generators.len() != dim {
            return Err(Error::Json(format!("expected {dim} generators, found {}", self.generators.len())));
        }
        let mut cols = Vec::with_capacity(dim);
        for g in &self.generators {
            if g.len() != dim {
                return Err(Error::Json(format!("expected generators of length {dim}, found {}", g.len())));
            }
            cols.push(g.iter().map(from_number).collect::<Result<Vec<_>>>()?);
        }
        Ok(SignedCone { sign, generators: IntMatrix::from_columns(cols)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputIdentity {
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub adjust: bool,
    pub lll_delta: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cones: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget_ms: Option<u64>,
}

impl From<&StrategyConfig> for ConfigEcho {
    fn from(cfg: &StrategyConfig) -> Self {
        ConfigEcho {
            adjust: cfg.adjust,
            lll_delta: cfg.lll_delta.to_string(),
            max_cones: cfg.max_cones,
            max_depth: cfg.max_depth,
            time_budget_ms: cfg.time_budget.map(|t| t.as_millis() as u64),
        }
    }
}

/// The document written by a decomposition run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub input: InputIdentity,
    pub dim: usize,
    pub strategy: Strategy,
    pub norm: Norm,
    pub config: ConfigEcho,
    pub cone_count: u64,
    pub stats: Stats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_cone_pairs: Option<Vec<ConePair>>,
}

impl RunRecord {
    pub fn new(
        input: InputIdentity,
        dim: usize,
        cfg: &StrategyConfig,
        stats: Stats,
        cones: Option<&[SignedCone]>,
    ) -> Self {
        RunRecord {
            input,
            dim,
            strategy: cfg.strategy,
            norm: cfg.norm,
            config: cfg.into(),
            cone_count: stats.cones_emitted,
            stats,
            sign_cone_pairs: cones.map(|cs| cs.iter().map(ConePair::from_cone).collect()),
        }
    }

    /// Pretty-printed JSON with one cone per line.
    pub fn to_json(&self) -> String {
        let head = RunRecord {
            input: self.input.clone(),
            config: self.config.clone(),
            stats: self.stats.clone(),
            sign_cone_pairs: None,
            ..*self
        };
        let head = serde_json::to_string_pretty(&head).expect("run record serializes");
        let Some(pairs) = &self.sign_cone_pairs else { return head };
        let body = head.strip_suffix("\n}").expect("pretty JSON object");
        let lines: Vec<String> =
            pairs.iter().map(|p| format!("    {}", serde_json::to_string(p).expect("cone serializes"))).collect();
        if lines.is_empty() {
            format!("{body},\n  \"sign_cone_pairs\": []\n}}")
        } else {
            format!("{body},\n  \"sign_cone_pairs\": [\n{}\n  ]\n}}", lines.join(",\n"))
        }
    }
}

/// The part of a run record needed to rebuild its cone list; any other
/// fields are ignored.
#[derive(Deserialize)]
struct ConeList {
    dim: usize,
    sign_cone_pairs: Vec<ConePair>,
}

/// Parses a JSON cone list (a run record emitted with its cones) and
/// returns the dimension and the signed cones.
pub fn parse_cone_list(text: &str) -> Result<(usize, Vec<SignedCone>)> {
    let list: ConeList = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if list.dim == 0 || list.dim > MAX_FILE_DIM {
        return Err(Error::Json(format!("dimension must lie in 1..={MAX_FILE_DIM}, found {}", list.dim)));
    }
    let cones = list.sign_cone_pairs.iter().map(|p| p.to_cone(list.dim)).collect::<Result<Vec<_>>>()?;
    Ok((list.dim, cones))
}

/// Parses a complete run record.
pub fn parse_run_record(text: &str) -> Result<RunRecord> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}
