//! Finite-dimensional commutative algebras over exact fields, with the tools
//! needed to classify nilpotent ones through central extensions: identity
//! checks, second cohomology, annihilators, automorphism actions on cocycles,
//! orbit enumeration over finite fields and isomorphism search.

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod expr;
pub mod extensions;
pub mod field;
pub mod fingerprint;
pub mod identities;
pub mod iso;
pub mod linalg;
pub mod orbits;
pub mod poly;

pub use algebra::{Algebra, ParamAlgebra, Vector};
pub use error::{AlgebraError, CatalogError, FieldError, LinalgError, ParseError};
pub use field::{Field, FieldElement};
pub use linalg::{Matrix, SubspaceBasis};
pub use poly::ParamPoly;
