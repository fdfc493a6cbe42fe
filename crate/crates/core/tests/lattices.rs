use std::collections::BTreeSet;

use picact::picard::{
    conic_bundle, del_pezzo, exceptional_classes, roots, second_section, Lattice, LatticeVector,
};
use picact::weyl::{
    generate, group_order_orbit_stabilizer, simple_reflections, weyl_group,
    DEFAULT_ENUMERATION_CAP,
};
use rayon::prelude::*;

/// Classes `d h - sum a_i e_i` in a fixed box, filtered by square and `K`-degree,
/// using the blowup form `diag(1, -1, ..., -1)` and `K = -3h + sum e_i` directly.
fn box_search(degree: i64, square: i64, k_dot: i64) -> BTreeSet<Vec<i64>> {
    let r = (9 - degree) as usize;
    let mut out = BTreeSet::new();
    let mut a = vec![-3i64; r];
    for d in -4i64..=4 {
        a.iter_mut().for_each(|x| *x = -3);
        loop {
            let sq = d * d - a.iter().map(|x| x * x).sum::<i64>();
            let kd = -3 * d + a.iter().sum::<i64>();
            if sq == square && kd == k_dot {
                let mut v = vec![d];
                v.extend(a.iter().map(|x| -x));
                out.insert(v);
            }
            let mut i = 0;
            while i < r && a[i] == 3 {
                a[i] = -3;
                i += 1;
            }
            if i == r {
                break;
            }
            a[i] += 1;
        }
    }
    out
}

#[test]
fn roots_and_lines_match_box_search() {
    for degree in 3..=7 {
        let l = del_pezzo(degree).unwrap();
        let rs: BTreeSet<Vec<i64>> = roots(&l).roots.iter().map(|v| v.coords().to_vec()).collect();
        let ls: BTreeSet<Vec<i64>> = exceptional_classes(&l)
            .classes
            .iter()
            .map(|v| v.coords().to_vec())
            .collect();
        assert_eq!(rs, box_search(degree, -2, 0), "roots in degree {degree}");
        assert_eq!(ls, box_search(degree, -1, -1), "lines in degree {degree}");
    }
}

#[test]
fn roots_and_lines_are_exact() {
    for degree in 1..=7 {
        let l = del_pezzo(degree).unwrap();
        let k = l.canonical().clone();
        assert_eq!(l.square(&k).unwrap(), degree);
        for a in &roots(&l).roots {
            assert_eq!(l.square(a).unwrap(), -2);
            assert_eq!(l.pairing(a, &k).unwrap(), 0);
        }
        for x in &exceptional_classes(&l).classes {
            assert_eq!(l.square(x).unwrap(), -1);
            assert_eq!(l.pairing(x, &k).unwrap(), -1);
        }
    }
}

#[test]
fn class_lists_are_sorted() {
    for degree in 1..=7 {
        let l = del_pezzo(degree).unwrap();
        let c = exceptional_classes(&l).classes;
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn each_cubic_line_meets_ten_others() {
    let l = del_pezzo(3).unwrap();
    let lines = exceptional_classes(&l).classes;
    for x in &lines {
        let meeting = lines
            .iter()
            .filter(|y| *y != x && l.pairing(x, y).unwrap() == 1)
            .count();
        assert_eq!(meeting, 10);
    }
}

#[test]
fn weyl_elements_permute_lines() {
    for degree in [4, 3] {
        let l = del_pezzo(degree).unwrap();
        let g = weyl_group(&l, DEFAULT_ENUMERATION_CAP).unwrap();
        let lines = exceptional_classes(&l);
        let ok = g.elements().unwrap().par_iter().all(|x| {
            let images: BTreeSet<LatticeVector> =
                lines.classes.iter().map(|c| x.apply(c).unwrap()).collect();
            images.len() == lines.len() && images.iter().all(|y| lines.position(y).is_some())
        });
        assert!(ok, "degree {degree}");
    }
}

#[test]
fn enumeration_agrees_with_orbit_stabilizer() {
    for degree in 3..=7 {
        let l = del_pezzo(degree).unwrap();
        let gens = simple_reflections(&l).unwrap();
        let any = picact::picard::AnyLattice::from(l);
        let counted = group_order_orbit_stabilizer(&any, &gens).unwrap();
        let g = generate(any, gens, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(g.order(), counted, "degree {degree}");
    }
}

#[test]
fn conic_bundle_invariants() {
    for m in 0..=6 {
        for e in 0..=3 {
            let l = conic_bundle(m, e).unwrap();
            assert_eq!(l.square(l.canonical()).unwrap(), 8 - m);
            let f = l.fiber();
            let s = l.section();
            assert_eq!(l.square(&f).unwrap(), 0);
            assert_eq!(l.pairing(&f, &s).unwrap(), 1);
            for i in 1..=m as usize {
                let (a, b) = l.components(i);
                assert_eq!(l.square(&a).unwrap(), -1);
                assert_eq!(l.square(&b).unwrap(), -1);
                assert_eq!(l.pairing(&a, &b).unwrap(), 1);
                assert_eq!(a.add(&b), f);
            }
            if m == 2 * e {
                let c2 = second_section(&l).unwrap();
                assert_eq!(l.pairing(&c2, &s).unwrap(), 0);
                assert_eq!(l.square(&c2).unwrap(), l.square(&s).unwrap());
            } else {
                assert!(second_section(&l).is_err());
            }
        }
    }
}

#[test]
fn out_of_range_degrees_rejected() {
    assert!(del_pezzo(0).is_err());
    assert!(del_pezzo(8).is_err());
    assert!(del_pezzo(9).is_err());
}
