//! Bigraded algebra presentations over the integers: exterior, polynomial,
//! divided-power, and Laurent generators with quotient relations,
//! normal-form arithmetic, and monomial-basis enumeration over a window.

mod basis;
mod element;
mod parse;
mod presentation;

pub use element::{Element, Monomial};
pub use parse::{parse_element, parse_presentation};
pub use presentation::{CellAlgebra, Presentation, Relation};

use crate::bidegree::Bidegree;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("infinite basis in bidegree {0}")]
    InfiniteBasis(Bidegree),
    #[error("cannot bound monomial enumeration: generator bidegrees mix signs")]
    EnumerationUnbounded,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unsupported relation shape: {0}")]
    UnsupportedRelation(String),
    #[error("coefficient modes differ")]
    ModeMismatch,
    #[error("invalid exponent {exp} for generator `{name}`")]
    BadExponent { name: String, exp: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// What a generator contributes to the algebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GeneratorKind {
    /// Square is zero; exponents 0 or 1.
    Exterior,
    /// Free commutative powers (strictly commutative regardless of degree).
    Polynomial,
    /// A whole family `g_i`, `i >= 1`, with `g_i * g_j = C(i+j, i) g_{i+j}`;
    /// the exponent stores the family index and `g_i` sits in bidegree
    /// `i * (p, q)`.
    DividedPower,
    /// Invertible generator; exponents range over all integers.
    Laurent,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeneratorKind::Exterior => "exterior",
            GeneratorKind::Polynomial => "polynomial",
            GeneratorKind::DividedPower => "divided-power",
            GeneratorKind::Laurent => "laurent",
        };
        write!(f, "{s}")
    }
}

/// A named algebra generator with its bidegree and kind.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub bidegree: Bidegree,
    pub kind: GeneratorKind,
}

impl Generator {
    pub fn new(name: impl Into<String>, bidegree: Bidegree, kind: GeneratorKind) -> Self {
        Generator {
            name: name.into(),
            bidegree,
            kind,
        }
    }

    pub fn exterior(name: impl Into<String>, p: i64, q: i64) -> Self {
        Generator::new(name, Bidegree::new(p, q), GeneratorKind::Exterior)
    }

    pub fn polynomial(name: impl Into<String>, p: i64, q: i64) -> Self {
        Generator::new(name, Bidegree::new(p, q), GeneratorKind::Polynomial)
    }

    pub fn divided_power(name: impl Into<String>, p: i64, q: i64) -> Self {
        Generator::new(name, Bidegree::new(p, q), GeneratorKind::DividedPower)
    }

    pub fn laurent(name: impl Into<String>, p: i64, q: i64) -> Self {
        Generator::new(name, Bidegree::new(p, q), GeneratorKind::Laurent)
    }

    /// Total degree `p + q`, the degree that drives Koszul signs.
    pub fn total_degree(&self) -> i64 {
        self.bidegree.total()
    }
}

/// Coefficient ring of a presentation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CoefficientMode {
    Integral,
    Rational,
}

impl fmt::Display for CoefficientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientMode::Integral => write!(f, "Z"),
            CoefficientMode::Rational => write!(f, "Q"),
        }
    }
}
