//! JSON documents for solution specs and structure data.
//!
//! Spec document:
//!
//! ```json
//! { "primes": [2, 5, 7],
//!   "generators": { "2": "1 - q + q^2", "5": "qint(5,3)/qint(5,1)", "7": "qint(7,3)/qint(7)" } }
//! ```
//!
//! Structure document, rationals written as `"a/b"` strings:
//!
//! ```json
//! { "primes": [2, 5, 7], "lambda": { "2": "1", "5": "1", "7": "1" }, "t0": "0",
//!   "terms": [ { "r": 1, "t": -1 }, { "r": 3, "t": 1 } ] }
//! ```
//!
//! Unknown fields are rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{format_expr, parse_rational_function, ExprError};
use crate::poly::Rational;
use crate::solutions::{SolutionError, SolutionSpec};
use crate::structure::{StructureData, StructureError};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("generator for prime {prime}: {source}")]
    Expr {
        prime: u64,
        #[source]
        source: ExprError,
    },
    #[error("field {field}: {value:?} is not a rational number")]
    BadRational { field: String, value: String },
    #[error(transparent)]
    Spec(#[from] SolutionError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub primes: Vec<u64>,
    pub generators: BTreeMap<u64, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub r: u64,
    pub t: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDocument {
    pub primes: Vec<u64>,
    pub lambda: BTreeMap<u64, String>,
    pub t0: String,
    pub terms: Vec<TermDocument>,
}

fn parse_rational(field: impl Into<String>, value: &str) -> Result<Rational, DocError> {
    Rational::from_str(value.trim()).map_err(|_| DocError::BadRational {
        field: field.into(),
        value: value.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_spec(spec: &SolutionSpec) -> Self {
        Self {
            primes: spec.primes().to_vec(),
            generators: spec.generators().iter().map(|(&p, h)| (p, format_expr(h))).collect(),
        }
    }

    pub fn to_spec(&self) -> Result<SolutionSpec, DocError> {
        let generators = self
            .generators
            .iter()
            .map(|(&prime, text)| {
                parse_rational_function(text)
                    .map(|f| (prime, f))
                    .map_err(|source| DocError::Expr { prime, source })
            })
            .collect::<Result<_, _>>()?;
        Ok(SolutionSpec::new(self.primes.clone(), generators)?)
    }
}

impl StructureDocument {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_structure(sd: &StructureData) -> Self {
        Self {
            primes: sd.primes().to_vec(),
            lambda: sd.lambda().iter().map(|(&p, l)| (p, l.to_string())).collect(),
            t0: sd.t0().to_string(),
            terms: sd.terms().iter().map(|(&r, &t)| TermDocument { r, t }).collect(),
        }
    }

    pub fn to_structure(&self) -> Result<StructureData, DocError> {
        let lambda = self
            .lambda
            .iter()
            .map(|(&p, v)| parse_rational(format!("lambda.{p}"), v).map(|l| (p, l)))
            .collect::<Result<_, _>>()?;
        let t0 = parse_rational("t0", &self.t0)?;
        let mut terms = BTreeMap::new();
        for term in &self.terms {
            *terms.entry(term.r).or_insert(0i64) += term.t;
        }
        Ok(StructureData::new(self.primes.clone(), lambda, t0, terms)?)
    }
}

pub fn read_spec(text: &str) -> Result<SolutionSpec, DocError> {
    SpecDocument::from_json(text)?.to_spec()
}

pub fn read_structure(text: &str) -> Result<StructureData, DocError> {
    StructureDocument::from_json(text)?.to_structure()
}
