//! Finite group actions on Picard lattices of rational surfaces.
//!
//! The crate models del Pezzo surfaces of degree 1 to 7 and conic bundles
//! through their Picard lattices, generates the relevant finite isometry
//! groups, and computes the invariants used to decide minimality and
//! `H^1`-triviality: traces on `K^perp`, invariant ranks, orbits on
//! exceptional classes, cyclotomic characteristic polynomials and
//! `H^1(G, Pic X)`.

pub mod census;
pub mod cohomology;
pub mod error;
pub mod exactlin;
pub mod gaction;
pub mod picard;
pub mod weyl;

pub use error::{Error, Result};
