//! Exact computation in finite-dimensional ordered vector spaces.
//!
//! The crate provides, over exact rationals: polyhedral and
//! lexicographic cones with their induced orders, the majorized
//! subspace E_M and its majorizing norm p_M, order-unit norms,
//! coherency decisions with substitution-checkable certificates in both
//! directions, operator norms of functionals on (E_M, p_M), a gallery
//! of named instances, and the exact LP machinery underneath.

pub mod cone;
pub mod coherence;
pub mod error;
pub mod functionals;
pub mod gallery;
pub mod lp;
pub mod majorize;
pub mod ratlin;
pub mod sampling;

pub use error::{Error, Result};
