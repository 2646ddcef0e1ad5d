//! Exact λ-bracket engine for `r`-dimensional Lie conformal superalgebras,
//! Novikov conformal superalgebras and Gel'fand-Dorfman type structures.
//!
//! The algebraic layers are generic over the coefficient field
//! ([`scalar::Coeff`]); the aliases below fix it to exact rationals, which
//! is what the checkers, constructions and CLI use.

pub mod axioms;
pub mod classify;
pub mod construct;
pub mod error;
pub mod expr;
pub mod freemod;
pub mod io;
pub mod lambda;
pub mod liefun;
pub mod ring;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
pub use freemod::{GenId, Generator, Parity, ParityClass, Signature};
pub use lambda::{At, Family};
pub use ring::{Monomial, Var, VarClass};
pub use structure::{ShapeDecl, StructureKind};

/// Arbitrary-precision rationals, always in lowest terms.
pub type Rational = num_rational::BigRational;

pub type Poly = ring::Poly<Rational>;
pub type ModValue = freemod::ModValue<Rational>;
pub type ProductTable = lambda::ProductTable<Rational>;
pub type Structure = structure::Structure<Rational>;
pub type CheckReport = axioms::CheckReport<Rational>;
pub type FormalSum = liefun::FormalSum<Rational>;
