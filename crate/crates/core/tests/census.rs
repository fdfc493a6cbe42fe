use picact::census::{
    census_entry, cb_swap_isometry, fiber_action, parity_exhaustive, switched_fibers, CensusEntry,
    CENSUS_IDS,
};
use picact::picard::{conic_bundle, Lattice, LatticeVector};

#[test]
fn json_round_trip() {
    for id in CENSUS_IDS.iter().filter(|id| !picact::census::is_heavy_entry(id)) {
        let e = census_entry(id).unwrap();
        let back = CensusEntry::from_json(&e.to_json()).unwrap();
        assert_eq!(back.id, e.id);
        assert_eq!(back.group.order(), e.group.order());
        assert_eq!(back.lattice, e.lattice);
        assert_eq!(back.metadata, e.metadata);
        let mut a = e.group.elements().unwrap().to_vec();
        let mut b = back.group.elements().unwrap().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn tampered_record_rejected() {
    let e = census_entry("geiser").unwrap();
    let mut rec = e.to_record();
    rec.order = 3;
    let s = serde_json::to_string(&rec).unwrap();
    assert!(CensusEntry::from_json(&s).is_err());
    assert!(CensusEntry::from_json("{}").is_err());
}

#[test]
fn construction_is_deterministic() {
    for id in ["binary-dihedral-3", "iskovskikh", "quartic-minimal"] {
        assert_eq!(census_entry(id).unwrap().to_json(), census_entry(id).unwrap().to_json());
    }
}

/// Is there an image `s'` of the section, in a box, such that
/// `f -> f`, `e_i -> e_i` or `f - e_i` (for `i` in the swap set), `s -> s'`
/// preserves the form and `K`?
fn section_image_exists(m: usize, e: i64, swap: &[bool]) -> bool {
    let l = conic_bundle(m as i64, e).unwrap();
    let n = l.rank();
    let f = l.fiber();
    let images: Vec<LatticeVector> = (1..=m)
        .map(|i| if swap[i - 1] { f.sub(&l.e(i)) } else { l.e(i) })
        .collect();
    let s = l.section();
    let k = l.canonical().clone();
    let s_sq = l.square(&s).unwrap();
    let range = -4i64..=4;
    let mut coords = vec![*range.start(); n];
    coords[1] = 1;
    loop {
        let cand = LatticeVector::new(coords.clone());
        let ok = l.pairing(&cand, &f).unwrap() == 1
            && l.square(&cand).unwrap() == s_sq
            && images.iter().all(|x| l.pairing(&cand, x).unwrap() == 0);
        if ok {
            let mut img = vec![0i64; n];
            for (j, &c) in k.coords().iter().enumerate() {
                let col = match j {
                    0 => f.clone(),
                    1 => cand.clone(),
                    _ => images[j - 2].clone(),
                };
                for (t, v) in col.coords().iter().enumerate() {
                    img[t] += c * v;
                }
            }
            if img == k.coords() {
                return true;
            }
        }
        let mut i = 0;
        while i < n {
            if i == 1 {
                i += 1;
                continue;
            }
            if coords[i] < *range.end() {
                coords[i] += 1;
                break;
            }
            coords[i] = *range.start();
            i += 1;
        }
        if i == n {
            return false;
        }
    }
}

#[test]
fn parity_by_box_search() {
    for m in 1..=4usize {
        for e in 0..=2i64 {
            for mask in 0u32..1 << m {
                let swap: Vec<bool> = (0..m).map(|i| mask & (1 << i) != 0).collect();
                let odd = mask.count_ones() % 2 == 1;
                assert_eq!(section_image_exists(m, e, &swap), !odd, "m={m} e={e} mask={mask:b}");
            }
        }
    }
    let r = parity_exhaustive(4, 2).unwrap();
    assert_eq!(r.odd_realized, 0);
    assert_eq!(r.even_failures, 0);
}

#[test]
fn swap_isometry_round_trip() {
    let l = conic_bundle(4, 2).unwrap();
    let x = cb_swap_isometry(&l, &[2, 1, 4, 3], &[1, 3]).unwrap();
    let a = fiber_action(&l, &x).unwrap();
    assert_eq!(a.perm, vec![2, 1, 4, 3]);
    assert_eq!(a.swaps, vec![1, 3]);
    assert!(switched_fibers(&a).is_empty());
    let y = cb_swap_isometry(&l, &[1, 2, 4, 3], &[1, 2]).unwrap();
    assert_eq!(switched_fibers(&fiber_action(&l, &y).unwrap()), vec![1, 2]);
    assert!(cb_swap_isometry(&l, &[1, 2, 3, 4], &[2]).is_err());
    assert!(cb_swap_isometry(&l, &[1, 1, 3, 4], &[]).is_err());
}

#[test]
fn binary_dihedral_metadata() {
    for (n, schedules) in [(3u64, 8u64), (5, 32)] {
        let e = census_entry(&format!("binary-dihedral-{n}")).unwrap();
        assert_eq!(e.group.order(), 4 * n);
        assert_eq!(e.metadata["valid_schedules"].as_array().map(|a| a.len() as u64), Some(schedules));
        let orders = e.group.element_orders().unwrap();
        assert_eq!(orders.get(&2), Some(&1));
    }
}
