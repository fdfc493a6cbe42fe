use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{meta, CensusEntry};
use crate::error::{Error, Result};
use crate::gaction::trace_on_q;
use crate::picard::del_pezzo;
use crate::weyl::{weyl_group, CayleyTable, MatrixGroup, DEFAULT_ENUMERATION_CAP};

fn w_d5() -> Result<MatrixGroup> {
    weyl_group(&del_pezzo(4)?, DEFAULT_ENUMERATION_CAP)
}

/// The abelian normal subgroup of order 16 in the degree-4 Weyl group.
pub fn quartic_a() -> Result<CensusEntry> {
    quartic_a_in(&w_d5()?)
}

pub fn quartic_a_in(w: &MatrixGroup) -> Result<CensusEntry> {
    let lattice = w.lattice().clone();
    let normal = w.normal_subgroups(16)?;
    if normal.len() != 1 {
        return Err(Error::SearchFailed(format!(
            "expected one normal subgroup of order 16, found {}",
            normal.len()
        )));
    }
    let a = normal.into_iter().next().unwrap();
    let els = a.elements()?;
    let traces: Vec<i64> = els
        .iter()
        .map(|x| trace_on_q(lattice.as_ref(), x))
        .collect::<Result<_>>()?;
    let taus: Vec<usize> = (0..els.len()).filter(|&i| traces[i] == -3).collect();
    if taus.len() != 5 {
        return Err(Error::SearchFailed(format!(
            "expected five elements of trace -3, found {}",
            taus.len()
        )));
    }
    let gens: Vec<_> = taus[..4].iter().map(|&i| els[i].clone()).collect();
    let a = a.with_generators(gens);
    let mut metadata = BTreeMap::new();
    meta(&mut metadata, "tau_indices", &taus);
    let mut multiset: BTreeMap<i64, usize> = BTreeMap::new();
    for t in &traces {
        *multiset.entry(*t).or_insert(0) += 1;
    }
    meta(&mut metadata, "trace_multiset", &multiset);
    Ok(CensusEntry {
        id: "quartic-a".into(),
        lattice,
        group: a,
        provenance: vec![
            "abelian normal subgroup of order 16 in W(D5)".into(),
            "five involutions of trace -3 with product the identity".into(),
        ],
        metadata,
    })
}

/// Order-12 subgroups `<x, y>` of W(D5) with `x^3 = y^4 = 1`,
/// `y x y^-1 = x^-1`, `y^2` in the order-16 normal subgroup with trace 1,
/// no element of trace -3, and invariant rank 1.
pub fn quartic_minimal_group() -> Result<CensusEntry> {
    let w = w_d5()?;
    let a = quartic_a_in(&w)?;
    quartic_minimal_group_in(&w, &a.group)
}

pub fn quartic_minimal_group_in(w: &MatrixGroup, a: &MatrixGroup) -> Result<CensusEntry> {
    let lattice = w.lattice().clone();
    let l = lattice.as_ref();
    let els = w.elements()?;
    let n = els.len();
    let table = CayleyTable::new(w)?;
    let id = table.identity();
    let traces: Vec<i64> = els
        .par_iter()
        .map(|x| trace_on_q(l, x))
        .collect::<Result<_>>()?;
    let orders: Vec<u32> = (0..n as u32)
        .map(|i| {
            let mut k = 1;
            let mut y = i;
            while y != id {
                y = table.mul(y, i);
                k += 1;
            }
            k
        })
        .collect();
    let mut inverse = vec![0u32; n];
    for i in 0..n as u32 {
        inverse[i as usize] = (0..n as u32).find(|&j| table.mul(i, j) == id).unwrap();
    }
    let in_a: Vec<bool> = els.iter().map(|x| a.contains(x)).collect();

    let xs: Vec<u32> = (0..n as u32).filter(|&i| orders[i as usize] == 3).collect();
    let ys: Vec<u32> = (0..n as u32)
        .filter(|&i| {
            let sq = table.mul(i, i) as usize;
            orders[i as usize] == 4 && in_a[sq] && traces[sq] == 1
        })
        .collect();

    let found: Vec<(Vec<u32>, (u32, u32))> = xs
        .par_iter()
        .flat_map_iter(|&x| {
            let mut local = Vec::new();
            for &y in &ys {
                let conj = table.mul(table.mul(y, x), inverse[y as usize]);
                if conj != inverse[x as usize] {
                    continue;
                }
                let Some(h) = close(&table, &[x, y], 12) else {
                    continue;
                };
                if h.len() != 12 || h.iter().any(|&g| traces[g as usize] == -3) {
                    continue;
                }
                let full_trace: i64 = h.iter().map(|&g| traces[g as usize] + 1).sum();
                if full_trace != 12 {
                    continue;
                }
                local.push((h, (x, y)));
            }
            local
        })
        .collect();
    // first generating pair seen for each subgroup
    let mut subgroups: BTreeMap<Vec<u32>, (u32, u32)> = BTreeMap::new();
    for (h, pair) in found {
        subgroups
            .entry(h)
            .and_modify(|p| *p = (*p).min(pair))
            .or_insert(pair);
    }
    let Some((rep, (x, y))) = subgroups.iter().next().map(|(h, p)| (h.clone(), *p)) else {
        return Err(Error::SearchFailed(
            "no order-12 subgroup of W(D5) meets the constraints".into(),
        ));
    };

    // conjugacy classes of the found subgroups under W(D5)
    let keys: Vec<&Vec<u32>> = subgroups.keys().collect();
    let canon: BTreeSet<Vec<u32>> = keys
        .par_iter()
        .map(|h| {
            (0..n as u32)
                .map(|g| {
                    let mut c: Vec<u32> = h
                        .iter()
                        .map(|&v| table.mul(table.mul(g, v), inverse[g as usize]))
                        .collect();
                    c.sort_unstable();
                    c
                })
                .min()
                .unwrap()
        })
        .collect();

    let group = w
        .subgroup_from_indices(&rep.iter().map(|&i| i as usize).collect::<Vec<_>>())?
        .with_generators(vec![els[x as usize].clone(), els[y as usize].clone()]);
    let mut metadata = BTreeMap::new();
    meta(&mut metadata, "subgroups_found", subgroups.len());
    meta(&mut metadata, "conjugacy_classes_found", canon.len());
    meta(
        &mut metadata,
        "generator_orders",
        [orders[x as usize], orders[y as usize]],
    );
    Ok(CensusEntry {
        id: "quartic-minimal".into(),
        lattice,
        group,
        provenance: vec![
            "order-12 subgroup Z/3 x| Z/4 of W(D5) with invariant rank 1".into(),
            "line orbits of sizes 4 and 12".into(),
        ],
        metadata,
    })
}

/// Closure of `gens` inside a Cayley table; `None` past `limit` elements.
fn close(table: &CayleyTable, gens: &[u32], limit: usize) -> Option<Vec<u32>> {
    let mut seen = vec![table.identity()];
    let mut k = 0;
    while k < seen.len() {
        for &g in gens {
            let y = table.mul(seen[k], g);
            if !seen.contains(&y) {
                seen.push(y);
                if seen.len() > limit {
                    return None;
                }
            }
        }
        k += 1;
    }
    seen.sort_unstable();
    Some(seen)
}
