//! Exact computer algebra for sequences of rational functions satisfying the
//! quantum-integer multiplication law
//!
//! ```text
//! f_{mn}(q) = f_m(q) f_n(q^m)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: dense univariate polynomials over the rationals, quantum integers `[n]_{q^r}`.
//! - [`ratfunc`]: reduced rational functions and the `lambda * q^e * u / v` standard form.
//! - [`cyclotomic`]: `Phi_k`, `F_k = q^k - 1`, root-of-unity certification and the unique
//!   `prod F_u / prod F_v` multiset representation.
//! - [`solutions`]: solution sequences given by prime generators; synthesis and verification.
//! - [`structure`]: closed-form synthesis from `(lambda, t0, R, {t_r})` and the inverse
//!   decomposition.
//! - [`expr`] and [`doc`]: the textual expression language and the JSON documents used by
//!   the `qfe` command line tool.

pub mod arith;
pub mod cyclotomic;
pub mod doc;
pub mod expr;
pub mod poly;
pub mod ratfunc;
pub mod solutions;
pub mod structure;

pub use cyclotomic::{CycloFactorization, FMultisetPair};
pub use poly::{Polynomial, Rational};
pub use ratfunc::{RationalFunction, StandardForm};
pub use solutions::SolutionSpec;
pub use structure::StructureData;
