use std::collections::BTreeMap;
use std::sync::OnceLock;

use picact::census::{census_entry, CensusEntry};
use picact::cohomology::{h1, h1_cyclic, H1Result};
use picact::gaction::{cyclo_power, cyclo_profile, invariant_rank_by_kernel};
use picact::picard::{del_pezzo, Lattice};
use picact::weyl::{subgroups_up_to, weyl_group, MatrixGroup, DEFAULT_ENUMERATION_CAP};
use proptest::prelude::*;

fn entry(id: &str) -> CensusEntry {
    census_entry(id).unwrap()
}

/// Number of subsets of the group closed under multiplication and containing
/// the identity, by exhaustive bitmask search.
fn brute_force_subgroup_count(g: &MatrixGroup) -> usize {
    let els = g.elements().unwrap();
    let n = els.len();
    assert!(n <= 16);
    let table: Vec<Vec<usize>> = els
        .iter()
        .map(|a| els.iter().map(|b| g.index_of(&a.compose(b).unwrap()).unwrap()).collect())
        .collect();
    let id = g.index_of(&g.identity()).unwrap();
    (0u32..1 << n)
        .filter(|&mask| {
            mask & (1 << id) != 0
                && (0..n).filter(|&i| mask & (1 << i) != 0).all(|i| {
                    (0..n)
                        .filter(|&j| mask & (1 << j) != 0)
                        .all(|j| mask & (1 << table[i][j]) != 0)
                })
        })
        .count()
}

#[test]
fn subgroups_of_elementary_abelian_16() {
    let a = entry("quartic-a").group;
    let found = subgroups_up_to(&a, 16).unwrap().len();
    assert_eq!(found, brute_force_subgroup_count(&a));
    assert_eq!(found, 67);
}

#[test]
fn subgroups_of_minimal_quartic_group() {
    let g = entry("quartic-minimal").group;
    let found = subgroups_up_to(&g, 12).unwrap().len();
    assert_eq!(found, brute_force_subgroup_count(&g));
    assert_eq!(found, 8);
}

fn exponent(g: &MatrixGroup) -> u64 {
    g.element_orders()
        .unwrap()
        .keys()
        .fold(1, |acc, &o| acc / num_gcd(acc, o) * o)
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn prime_powers(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut n, mut p) = (n, 2);
    while n > 1 {
        let mut q = 1;
        while n % p == 0 {
            n /= p;
            q *= p;
        }
        if q > 1 {
            out.push(q);
        }
        p += 1;
    }
    out
}

/// `|(M/qM)^G|` by enumerating all residues mod `q`.
fn fixed_residues(g: &MatrixGroup, q: u64) -> u64 {
    let q = q as i64;
    let gens: Vec<Vec<Vec<i64>>> = g.generators().iter().map(|x| x.matrix().to_rows()).collect();
    let n = g.lattice().rank();
    let total = (q as u64).pow(n as u32);
    let mut count = 0;
    let mut v = vec![0i64; n];
    for idx in 0..total {
        let mut t = idx;
        for c in v.iter_mut() {
            *c = (t % q as u64) as i64;
            t /= q as u64;
        }
        let fixed = gens.iter().all(|m| {
            m.iter().enumerate().all(|(i, row)| {
                let s: i64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                (s - v[i]).rem_euclid(q) == 0
            })
        });
        if fixed {
            count += 1;
        }
    }
    count
}

/// From `0 -> M^G -> M^G -> (M/qM)^G -> H^1[q] -> 0`:
/// `|H^1[q]| = |(M/qM)^G| / q^rank(M^G)`.
fn assert_h1_oracle(g: &MatrixGroup, r: &H1Result) {
    let rank = invariant_rank_by_kernel(g).unwrap() as u32;
    let e = exponent(g);
    let mut order = 1u128;
    for q in prime_powers(e) {
        let fixed = fixed_residues(g, q);
        let torsion = fixed / q.pow(rank);
        assert_eq!(fixed % q.pow(rank), 0);
        let expected: u64 = r
            .invariant_factors
            .iter()
            .map(|&d| num_gcd(d as u64, q))
            .product();
        assert_eq!(torsion, expected, "H^1[{q}] for a group of order {}", g.order());
        order *= torsion as u128;
    }
    assert_eq!(order, r.order());
}

#[test]
fn h1_matches_residue_oracle() {
    for id in [
        "quartic-a",
        "quartic-minimal",
        "geiser",
        "bertini",
        "binary-dihedral-3",
        "iskovskikh",
        "s4-bundle-g2",
    ] {
        let g = entry(id).group;
        let r = h1(&g).unwrap();
        assert_h1_oracle(&g, &r);
    }
}

#[test]
fn h1_matches_residue_oracle_on_subgroups() {
    let g = entry("quartic-a").group;
    for h in subgroups_up_to(&g, 16).unwrap() {
        assert_h1_oracle(&h, &h1(&h).unwrap());
    }
}

#[test]
fn h1_cyclic_matches_general_on_census_elements() {
    for id in ["quartic-minimal", "binary-dihedral-5", "s4-bundle-g2"] {
        let e = entry(id);
        for x in e.group.elements().unwrap() {
            let n = x.order().unwrap();
            let c = picact::weyl::generate(e.lattice.clone(), vec![x.clone()], n as usize).unwrap();
            assert_eq!(h1_cyclic(x, n).unwrap(), h1(&c).unwrap());
        }
    }
}

fn weyl_groups() -> &'static [MatrixGroup; 2] {
    static G: OnceLock<[MatrixGroup; 2]> = OnceLock::new();
    G.get_or_init(|| {
        [4, 3].map(|d| weyl_group(&del_pezzo(d).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn power_map_commutes(which in 0usize..2, idx in 0usize..51840, k in 1u64..40) {
        let g = &weyl_groups()[which];
        let x = &g.elements().unwrap()[idx % g.order() as usize];
        let l = g.lattice().as_ref();
        let lhs = cyclo_power(&cyclo_profile(l, x).unwrap(), k).unwrap();
        let rhs = cyclo_profile(l, &x.pow(k).unwrap()).unwrap();
        prop_assert_eq!(lhs.factors, rhs.factors);
    }
}

#[test]
fn element_orders_of_small_weyl_groups() {
    let [d5, _] = weyl_groups();
    let orders: BTreeMap<u64, usize> = d5.element_orders().unwrap();
    assert_eq!(orders.values().sum::<usize>(), 1920);
    assert_eq!(orders.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6, 8, 12]);
}
