use picact::exactlin::{
    char_poly, gcd, hermite_normal_form, pivot_columns, rank, smith_normal_form, IntMatrix,
};
use proptest::prelude::*;

/// Cofactor expansion, for small matrices only.
fn det_cofactor(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det_cofactor(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all k-by-k minors, for k = 1..=min(rows, cols).
fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (m.len(), m[0].len());
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0;
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let minor: Vec<Vec<i64>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = gcd(g, det_cofactor(&minor));
                }
            }
            g
        })
        .collect()
}

/// Rank over Q by elimination on rationals kept as i128 numerators.
fn rational_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (rows, cols) = (a.len(), a[0].len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let (x, y) = (a[r][c], a[i][c]);
                for j in 0..cols {
                    a[i][j] = a[i][j] * x - a[r][j] * y;
                }
                let g = a[i].iter().fold(0i128, |g, &v| {
                    let (mut p, mut q) = (g.abs(), v.abs());
                    while q != 0 {
                        (p, q) = (q, p % q);
                    }
                    p
                });
                if g > 1 {
                    a[i].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)
    })
}

fn square_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..=4, n), n))
}

proptest! {
    #[test]
    fn smith_matches_minors(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let snf = smith_normal_form(&m).unwrap();
        let dk = determinantal_divisors(&rows);
        let mut prod = 1i64;
        for (k, &d) in dk.iter().enumerate() {
            let s = snf.invariants[k];
            if d == 0 {
                prop_assert_eq!(s, 0);
            } else {
                prop_assert_eq!(prod * s, d);
                prod *= s;
            }
        }
    }

    #[test]
    fn smith_reconstructs(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let snf = smith_normal_form(&m).unwrap();
        let d = snf.left_transform.mul(&m).unwrap().mul(&snf.right_transform).unwrap();
        prop_assert_eq!(d, snf.diagonal_matrix());
        prop_assert_eq!(snf.left_transform.determinant().unwrap().abs(), 1);
        prop_assert_eq!(snf.right_transform.determinant().unwrap().abs(), 1);
        for w in snf.invariants.windows(2) {
            prop_assert!(w[0] >= 0 && w[1] >= 0);
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
    }

    #[test]
    fn ranks_agree(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let expected = rational_rank(&rows);
        prop_assert_eq!(rank(&m).unwrap(), expected);
        prop_assert_eq!(smith_normal_form(&m).unwrap().rank(), expected);
    }

    #[test]
    fn hermite_is_row_equivalent(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let (h, u) = hermite_normal_form(&m).unwrap();
        prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
        prop_assert_eq!(u.determinant().unwrap().abs(), 1);
        prop_assert_eq!(pivot_columns(&h).len(), rational_rank(&rows));
    }

    #[test]
    fn bareiss_matches_cofactor(rows in square_matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(m.determinant().unwrap(), det_cofactor(&rows));
    }

    #[test]
    fn char_poly_evaluates_to_det(rows in square_matrix(), t in -3i64..=3) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let p = char_poly(&m).unwrap();
        let n = rows.len();
        let shifted: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { t - rows[i][j] } else { -rows[i][j] }).collect())
            .collect();
        prop_assert_eq!(p.eval(t).unwrap(), det_cofactor(&shifted));
    }
}

#[test]
fn known_smith_forms() {
    let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).unwrap();
    assert_eq!(smith_normal_form(&m).unwrap().invariants, vec![2, 6, 12]);
    let z = IntMatrix::zeros(2, 3);
    assert_eq!(smith_normal_form(&z).unwrap().invariants, vec![0, 0]);
}
