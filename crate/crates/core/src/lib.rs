//! Exact invariants of monomial ideals and toric plurisubharmonic models:
//! log canonical thresholds, jumping numbers, asymptotic (Fekete-limit)
//! invariants of graded and subadditive ideal sequences, Kiselman
//! numbers, polyhedral multiplier ideals, and a volume-asymptotics
//! experiment.
//!
//! All core arithmetic is exact rational; floating point appears only in
//! clearly-labelled numerical estimates (sampling, quadrature).

pub mod cache;
pub mod corpus;
pub mod doc;
pub mod error;
pub mod exponent;
pub mod ideal;
pub mod kiselman;
pub mod lct;
pub mod lp;
pub mod polyhedron;
pub mod rational;
pub mod sequences;
pub mod valuation;
pub mod volume;
pub mod witness;

pub use error::{CoreError, CoreResult};
pub use exponent::ExponentVector;
pub use ideal::MonomialIdeal;
pub use polyhedron::NewtonPolyhedron;
pub use rational::{Extended, Rational};
