//! Exact computation in simply connected nilpotent Lie groups and a recursive
//! small-divisor solver that splits smooth real cocycles over lattice actions on
//! nilmanifolds into a homomorphism plus a coboundary.

pub mod algebras;
pub mod cohomology;
pub mod lattices;
pub mod linalg;
pub mod lie;
pub mod mpoly;
pub mod scalar;
pub mod solver;
pub mod specfile;

pub use scalar::{Rational, Scalar};
