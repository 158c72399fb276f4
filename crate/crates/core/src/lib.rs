//! Cyclic branched coverings of the 3-sphere along two-bridge links.
//!
//! The crate builds `M_{n,m}(p,q)` as an explicit loose triangulation with
//! `n(p-1)` tetrahedra from a Minkus polyhedral scheme, certifies it as a
//! closed orientable 3-manifold, computes homology and a triangular
//! presentation of the fundamental group, and evaluates the two-sided
//! complexity and volume estimates attached to the link.

pub mod arith;
pub mod bounds;
pub mod diagram;
mod dsu;
pub mod fundgroup;
pub mod minkus;
pub mod report;
pub mod snf;
pub mod triangulation;
pub mod verify;

pub use arith::{classify, ell, evaluate_cf, minimized_expansion, ContinuedFraction, LinkClass, SlopePair};
pub use triangulation::Triangulation;

