//! Finite groups of lattice isometries: reflections, closure enumeration,
//! orders by stabilizer chains, and subgroup machinery.

mod group;
mod isometry;
mod schreier;
mod subgroups;

pub use group::{generate, GroupDump, MatrixGroup, DEFAULT_ENUMERATION_CAP};
pub use isometry::{reflection, unimodular_inverse, Isometry};
pub use schreier::{generated_group_contains, group_order_orbit_stabilizer};
pub use subgroups::{subgroup_index_sets, subgroups_up_to, CayleyTable, SUBGROUP_SEARCH_LIMIT};

use std::sync::Arc;

use crate::error::Result;
use crate::picard::{roots, AnyLattice, DelPezzoLattice, LatticeVector};

/// One reflection per pair of opposite roots, in root order.
pub fn all_reflections(l: &DelPezzoLattice) -> Result<Vec<Isometry>> {
    let mut out: Vec<Isometry> = Vec::new();
    for r in roots(l).roots {
        // r and -r give the same reflection; keep the lexicographically larger
        if r > r.neg() {
            out.push(reflection(l, &r)?);
        }
    }
    Ok(out)
}

/// Simple roots `e_i - e_{i+1}` and, from three points on, `h - e_1 - e_2 - e_3`.
pub fn simple_roots(l: &DelPezzoLattice) -> Vec<LatticeVector> {
    let r = l.points();
    let mut out: Vec<LatticeVector> = (1..r).map(|i| l.e(i).sub(&l.e(i + 1))).collect();
    if r >= 3 {
        out.push(l.h().sub(&l.e(1)).sub(&l.e(2)).sub(&l.e(3)));
    }
    out
}

pub fn simple_reflections(l: &DelPezzoLattice) -> Result<Vec<Isometry>> {
    simple_roots(l).iter().map(|a| reflection(l, a)).collect()
}

/// The Weyl group of a del Pezzo lattice, fully enumerated.
pub fn weyl_group(l: &DelPezzoLattice, cap: usize) -> Result<MatrixGroup> {
    generate(
        Arc::new(AnyLattice::from(l.clone())),
        simple_reflections(l)?,
        cap,
    )
}
