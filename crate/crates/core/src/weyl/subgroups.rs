use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::group::MatrixGroup;
use crate::error::{Error, Result};

/// Largest parent order for which the subgroup search is complete.
pub const SUBGROUP_SEARCH_LIMIT: usize = 2000;

/// Multiplication table of an enumerated group, on element indices.
pub struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    identity: u32,
}

impl CayleyTable {
    pub fn new(g: &MatrixGroup) -> Result<Self> {
        let els = g.elements()?;
        let n = els.len();
        if n > SUBGROUP_SEARCH_LIMIT {
            return Err(Error::TooLarge {
                what: "a multiplication table",
                order: n,
                limit: SUBGROUP_SEARCH_LIMIT,
            });
        }
        let rows: Vec<Vec<u32>> = els
            .par_iter()
            .map(|a| {
                els.iter()
                    .map(|b| {
                        let p = a.compose(b)?;
                        g.index_of(&p)
                            .map(|i| i as u32)
                            .ok_or_else(|| Error::Inconsistent("product escaped group".into()))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?;
        let identity = g.index_of(&g.identity()).expect("identity present") as u32;
        Ok(CayleyTable {
            n,
            mul: rows.concat(),
            identity,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    /// Closure of `base` (already a subgroup, sorted) together with `extra`;
    /// `None` once the closure grows past `limit`.
    fn close_with(&self, base: &[u32], base_gens: &[u32], extra: u32, limit: usize) -> Option<Vec<u32>> {
        let mut member = vec![false; self.n];
        let mut elements: Vec<u32> = base.to_vec();
        for &x in base {
            member[x as usize] = true;
        }
        let gens: Vec<u32> = base_gens.iter().copied().chain(std::iter::once(extra)).collect();
        let mut k = 0;
        while k < elements.len() {
            let x = elements[k];
            for &g in &gens {
                let y = self.mul(x, g);
                if !member[y as usize] {
                    member[y as usize] = true;
                    elements.push(y);
                    if elements.len() > limit {
                        return None;
                    }
                }
            }
            k += 1;
        }
        elements.sort_unstable();
        Some(elements)
    }
}

/// Every subgroup of order at most `max_order`, as sorted index lists with
/// generator indices, ordered by (order, elements).
pub fn subgroup_index_sets(
    table: &CayleyTable,
    max_order: usize,
) -> Vec<(Vec<u32>, Vec<u32>)> {
    let trivial = vec![table.identity()];
    let mut seen: FxHashSet<Vec<u32>> = FxHashSet::default();
    seen.insert(trivial.clone());
    let mut all = vec![(trivial, Vec::new())];
    // each pass extends the subgroups found in the previous pass by one element
    let mut start = 0;
    while start < all.len() {
        let end = all.len();
        let found: Vec<Vec<(Vec<u32>, Vec<u32>)>> = all[start..end]
            .par_iter()
            .map(|(h, gens)| {
                let mut member = vec![false; table.len()];
                for &x in h {
                    member[x as usize] = true;
                }
                let mut local: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
                let mut local_seen: FxHashSet<Vec<u32>> = FxHashSet::default();
                for x in 0..table.len() as u32 {
                    if member[x as usize] {
                        continue;
                    }
                    if let Some(k) = table.close_with(h, gens, x, max_order) {
                        if local_seen.insert(k.clone()) {
                            let mut g2 = gens.clone();
                            g2.push(x);
                            local.push((k, g2));
                        }
                    }
                }
                local
            })
            .collect();
        for (k, g) in found.into_iter().flatten() {
            if seen.insert(k.clone()) {
                all.push((k, g));
            }
        }
        start = end;
    }
    all.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    all
}

/// All subgroups of order at most `max_order`, deduplicated as sets.
pub fn subgroups_up_to(g: &MatrixGroup, max_order: usize) -> Result<Vec<MatrixGroup>> {
    let table = CayleyTable::new(g)?;
    let els = g.elements()?;
    subgroup_index_sets(&table, max_order)
        .into_par_iter()
        .map(|(members, gens)| {
            let elements = members.iter().map(|&i| els[i as usize].clone()).collect();
            let sub = g.subgroup_from_elements(elements)?;
            // keep the generators that discovered it when they are fewer
            let found: Vec<_> = gens.iter().map(|&i| els[i as usize].clone()).collect();
            Ok(if found.len() < sub.generators().len() {
                sub.with_generators(found)
            } else {
                sub
            })
        })
        .collect()
}
