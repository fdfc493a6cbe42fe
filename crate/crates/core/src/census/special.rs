use std::collections::BTreeMap;
use std::sync::Arc;

use super::{meta, CensusEntry};
use crate::error::Result;
use crate::exactlin::IntMatrix;
use crate::picard::{del_pezzo, AnyLattice, DelPezzoLattice, Lattice};
use crate::weyl::{generate, Isometry};

/// `x -> -x + c (x.K) K` with `c K^2 = 2`: minus one on `K^perp`, one on `K`.
fn central_involution(l: &DelPezzoLattice, c: i64) -> Result<Isometry> {
    let n = l.rank();
    let gk = l.gram.mul_vec(l.canonical.coords())?;
    let k = l.canonical.coords();
    let mut m = IntMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let v = c * gk[j] * k[i] - i64::from(i == j);
            m.set(i, j, v);
        }
    }
    Isometry::new(l, m)
}

pub fn geiser_isometry() -> Result<Isometry> {
    central_involution(&del_pezzo(2)?, 1)
}

pub fn bertini_isometry() -> Result<Isometry> {
    central_involution(&del_pezzo(1)?, 2)
}

fn involution_entry(id: &str, degree: i64, x: Isometry, note: &str) -> Result<CensusEntry> {
    let lattice = Arc::new(AnyLattice::from(del_pezzo(degree)?));
    let group = generate(lattice.clone(), vec![x], 2)?;
    let mut metadata = BTreeMap::new();
    meta(&mut metadata, "degree", degree);
    Ok(CensusEntry {
        id: id.into(),
        lattice,
        group,
        provenance: vec![note.into()],
        metadata,
    })
}

/// The central involution of the degree-2 Weyl group.
pub fn geiser() -> Result<CensusEntry> {
    involution_entry(
        "geiser",
        2,
        geiser_isometry()?,
        "involution acting as -1 on K-perp of the degree-2 lattice",
    )
}

/// The central involution of the degree-1 Weyl group.
pub fn bertini() -> Result<CensusEntry> {
    involution_entry(
        "bertini",
        1,
        bertini_isometry()?,
        "involution acting as -1 on K-perp of the degree-1 lattice",
    )
}

/// `nodes + 2 cusps = 12`.
pub fn node_cusp_validator(nodes: u64, cusps: u64) -> bool {
    nodes + 2 * cusps == 12
}
