//! Minima of lattices of mixed signature.
//!
//! `mixsig` computes homogeneous and inhomogeneous minima of lattices in
//! `V = R^r + C^s`, builds the Minkowski lattices of number fields, searches
//! the diagonal unit-group flow for semi-well-rounded configurations, and
//! evaluates a family of explicit discriminant bounds on the Euclidean
//! minimum of a number field.
//!
//! See the `book/` directory for a guided tour; the chapters double as
//! doc-tests of this crate.

pub mod bounds;
pub mod catalog;
pub mod error;
pub mod field;
pub mod flow;
pub mod poly;
pub mod reduction;
pub mod sampling;
pub mod units;
pub mod mat;
pub mod minima;
pub mod real;
pub mod space;

pub use error::{Error, Result};
pub use real::{Precision, Real};
pub use space::{Lattice, Signature, Vector};
