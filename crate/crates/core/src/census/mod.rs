//! Named group actions on explicit lattices, and a registry of checkable
//! claims about them.

mod bundles;
mod claims;
mod quartic;
mod special;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use bundles::{
    binary_dihedral_bundle, cb_swap_isometry, fiber_action, iskovskikh_ambient, iskovskikh_bundle,
    parity_exhaustive, s4_bundle, switched_fibers, FiberAction, ParityReport,
};
pub use claims::{claim_ids, verify_all, ClaimResult, ClaimStatus, VerifyOptions};
pub use quartic::{quartic_a, quartic_a_in, quartic_minimal_group, quartic_minimal_group_in};
pub use special::{bertini, bertini_isometry, geiser, geiser_isometry, node_cusp_validator};

use crate::error::{Error, Result};
use crate::picard::AnyLattice;
use crate::weyl::{generate, Isometry, MatrixGroup};

/// A named group action together with what was found while building it.
#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub id: String,
    pub lattice: Arc<AnyLattice>,
    pub group: MatrixGroup,
    pub provenance: Vec<String>,
    pub metadata: BTreeMap<String, Value>,
}

/// Serialized form of a [`CensusEntry`]: the group is stored by generators
/// and order and rebuilt on import.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub schema: String,
    pub id: String,
    pub lattice: AnyLattice,
    pub generators: Vec<Isometry>,
    pub order: u64,
    pub provenance: Vec<String>,
    pub metadata: BTreeMap<String, Value>,
}

impl CensusEntry {
    pub fn to_record(&self) -> CensusRecord {
        CensusRecord {
            schema: "1".into(),
            id: self.id.clone(),
            lattice: self.lattice.as_ref().clone(),
            generators: self.group.generators().to_vec(),
            order: self.group.order(),
            provenance: self.provenance.clone(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("census records serialize")
    }

    /// Rebuilds an entry, regenerating the group and checking its order.
    pub fn from_record(rec: CensusRecord) -> Result<Self> {
        let lattice = Arc::new(rec.lattice.validated()?);
        let group = generate(lattice.clone(), rec.generators, rec.order as usize)?;
        if group.order() != rec.order {
            return Err(Error::Malformed(format!(
                "recorded order {} but generators give {}",
                rec.order,
                group.order()
            )));
        }
        Ok(CensusEntry {
            id: rec.id,
            lattice,
            group,
            provenance: rec.provenance,
            metadata: rec.metadata,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: CensusRecord =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_record(rec)
    }
}

/// Identifiers accepted by [`census_entry`], in listing order.
pub const CENSUS_IDS: &[&str] = &[
    "quartic-a",
    "quartic-minimal",
    "geiser",
    "bertini",
    "binary-dihedral-3",
    "binary-dihedral-5",
    "iskovskikh",
    "s4-bundle-g2",
    "s4-bundle-g5",
    "s4-bundle-g8",
];

/// Builds a census entry by identifier.
pub fn census_entry(id: &str) -> Result<CensusEntry> {
    match id {
        "quartic-a" => quartic_a(),
        "quartic-minimal" => quartic_minimal_group(),
        "geiser" => geiser(),
        "bertini" => bertini(),
        "binary-dihedral-3" => binary_dihedral_bundle(3),
        "binary-dihedral-5" => binary_dihedral_bundle(5),
        "iskovskikh" => iskovskikh_bundle(),
        "s4-bundle-g2" => s4_bundle(2),
        "s4-bundle-g5" => s4_bundle(5),
        "s4-bundle-g8" => s4_bundle(8),
        other => Err(Error::InvalidParameter(format!("unknown census id {other}"))),
    }
}

/// Entries whose construction is gated behind the heavy flag.
pub fn is_heavy_entry(id: &str) -> bool {
    matches!(id, "s4-bundle-g5" | "s4-bundle-g8")
}

fn meta<T: Serialize>(m: &mut BTreeMap<String, Value>, key: &str, v: T) {
    m.insert(key.to_string(), serde_json::to_value(v).expect("metadata serializes"));
}
