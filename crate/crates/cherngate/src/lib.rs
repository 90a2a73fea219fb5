//! Exact admissibility checking for candidate Chern classes of stable-rank
//! complex vector bundles.
//!
//! The engine evaluates integrality and congruence conditions for a tuple
//! (c1, ..., cn) of candidate Chern classes on a compact complex manifold,
//! exactly over the rationals. Supported targets:
//!
//! - low-dimensional manifolds (complex dimension 4 and 5) given by a finite
//!   presentation of their even cohomology ring,
//! - manifolds with torsion-free cohomology generated by degree 2,
//! - projective spaces,
//! - generalized flag manifolds G/P, through a Schubert-calculus backend
//!   (divided-difference operators and the desingularization pushforward).
//!
//! Everything is computed with arbitrary-precision rational arithmetic; there
//! is no floating point anywhere in the engine.

pub mod bgg;
pub mod bott_samelson;
pub mod char_classes;
pub mod cli;
pub mod error;
pub mod gate;
pub mod manifold;
pub mod poly;
pub mod rational;
pub mod root_system;
pub mod weyl;

pub use error::Error;
pub use rational::Rational;
