//! Hermite and Smith normal forms, integer kernels, and quotients of lattices.
//!
//! Every routine works on `i64` with checked arithmetic. Elimination steps
//! combine two rows (or columns) through the extended gcd, so each step is a
//! unimodular 2x2 transform and the tracked transforms stay exact.

use serde::{Deserialize, Serialize};

use super::matrix::{mul, sub, IntMatrix};
use crate::error::{Error, Result};

/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

/// Unimodular 2x2 coefficients `(p, q, r, s)` sending `(a, b)` to `(gcd, 0)`.
fn gcd_step(a: i64, b: i64) -> (i64, i64, i64, i64) {
    if a != 0 && b % a == 0 {
        return (1, 0, -(b / a), 1);
    }
    let (g, x, y) = ext_gcd(a, b);
    (x, y, -(b / g), a / g)
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * m = H`, `U`
/// unimodular, pivots positive and the entries above each pivot reduced
/// into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pivot_row = 0;
    for c in 0..h.cols() {
        if pivot_row == h.rows() {
            break;
        }
        for i in pivot_row + 1..h.rows() {
            let b = h.get(i, c);
            if b == 0 {
                continue;
            }
            let a = h.get(pivot_row, c);
            let coeffs = if a == 0 {
                (0, 1, 1, 0)
            } else {
                gcd_step(a, b)
            };
            h.combine_rows(pivot_row, i, coeffs)?;
            u.combine_rows(pivot_row, i, coeffs)?;
        }
        let p = h.get(pivot_row, c);
        if p == 0 {
            continue;
        }
        if p < 0 {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h.get(pivot_row, c);
        for k in 0..pivot_row {
            let q = h.get(k, c).div_euclid(p);
            if q != 0 {
                h.add_row_multiple(k, pivot_row, -q)?;
                u.add_row_multiple(k, pivot_row, -q)?;
            }
        }
        pivot_row += 1;
    }
    Ok((h, u))
}

/// Column index of the first nonzero entry of each nonzero row of an
/// echelon matrix.
pub fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows())
        .filter_map(|i| h.row(i).iter().position(|&x| x != 0))
        .collect()
}

pub fn rank(m: &IntMatrix) -> Result<usize> {
    let (h, _) = hermite_normal_form(m)?;
    Ok(pivot_columns(&h).len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, length `min(rows, cols)`,
    /// nonzero entries first.
    pub invariants: Vec<i64>,
    pub left_transform: IntMatrix,
    pub right_transform: IntMatrix,
}

impl SmithForm {
    /// The diagonal matrix `left * original * right`.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left_transform.rows(), self.right_transform.cols());
        for (i, &x) in self.invariants.iter().enumerate() {
            d.set(i, i, x);
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.invariants.iter().filter(|&&x| x != 0).count()
    }

    /// Invariant factors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<i64> {
        self.invariants.iter().copied().filter(|&x| x > 1).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            for i in t + 1..rows {
                let b = a.get(i, t);
                if b != 0 {
                    let coeffs = gcd_step(a.get(t, t), b);
                    a.combine_rows(t, i, coeffs)?;
                    left.combine_rows(t, i, coeffs)?;
                }
            }
            for j in t + 1..cols {
                let b = a.get(t, j);
                if b != 0 {
                    let coeffs = gcd_step(a.get(t, t), b);
                    a.combine_cols(t, j, coeffs)?;
                    right.combine_cols(t, j, coeffs)?;
                }
            }
            if (t + 1..rows).any(|i| a.get(i, t) != 0) {
                continue;
            }
            let p = a.get(t, t);
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a.get(i, j) % p != 0);
            match offender {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, 1)?;
                    left.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if a.get(t, t) < 0 {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    let invariants = (0..n).map(|i| a.get(i, i)).collect();
    Ok(SmithForm {
        invariants,
        left_transform: left,
        right_transform: right,
    })
}

/// Saturated basis (as rows) of `{x : m * x = 0}`, reduced to Hermite form.
pub fn kernel_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.cols();
    if m.rows() == 0 {
        return Ok(IntMatrix::identity(n));
    }
    let (h, u) = hermite_normal_form(&m.transpose())?;
    let r = pivot_columns(&h).len();
    let rows: Vec<Vec<i64>> = (r..n).map(|i| u.row(i).to_vec()).collect();
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(0, n));
    }
    let k = IntMatrix::from_rows(&rows)?;
    Ok(hermite_normal_form(&k)?.0)
}

/// Coordinates of each row of `vectors` in the basis given by the rows of
/// `basis` (which must be linearly independent). Errors if some vector is
/// not an integral combination.
pub fn coordinates_in_basis(basis: &IntMatrix, vectors: &IntMatrix) -> Result<IntMatrix> {
    if basis.cols() != vectors.cols() {
        return Err(Error::Dimension("basis and vectors differ in length".into()));
    }
    let (h, u) = hermite_normal_form(basis)?;
    let pivots = pivot_columns(&h);
    if pivots.len() != basis.rows() {
        return Err(Error::Inconsistent("basis rows are dependent".into()));
    }
    let k = basis.rows();
    let mut coords = IntMatrix::zeros(vectors.rows(), k);
    for v in 0..vectors.rows() {
        let mut rest = vectors.row(v).to_vec();
        let mut y = vec![0i64; k];
        for (i, &c) in pivots.iter().enumerate() {
            let p = h.get(i, c);
            if rest[c] % p != 0 {
                return Err(Error::Inconsistent("vector not in the lattice".into()));
            }
            let q = rest[c] / p;
            y[i] = q;
            if q != 0 {
                for (j, r) in rest.iter_mut().enumerate() {
                    *r = sub(*r, mul(q, h.get(i, j))?)?;
                }
            }
        }
        if rest.iter().any(|&x| x != 0) {
            return Err(Error::Inconsistent("vector not in the span".into()));
        }
        // y * H = v and H = U * basis, so the coordinates are y * U.
        for j in 0..k {
            let mut acc = 0i64;
            for (i, &yi) in y.iter().enumerate() {
                acc = super::matrix::add(acc, mul(yi, u.get(i, j))?)?;
            }
            coords.set(v, j, acc);
        }
    }
    Ok(coords)
}

/// Structure of `span(basis) / span(generators)`: returns the torsion
/// invariant factors and the free rank.
pub fn quotient_structure(basis: &IntMatrix, generators: &IntMatrix) -> Result<(Vec<i64>, usize)> {
    let k = basis.rows();
    if generators.rows() == 0 {
        return Ok((Vec::new(), k));
    }
    let coords = coordinates_in_basis(basis, generators)?;
    let snf = smith_normal_form(&coords)?;
    Ok((snf.torsion(), k - snf.rank()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn hnf_of_identity_and_zero() {
        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id).unwrap(), (id.clone(), id));
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(
            hermite_normal_form(&z).unwrap(),
            (z.clone(), IntMatrix::identity(2))
        );
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&a).unwrap(), h);
        assert_eq!(u.determinant().unwrap().abs(), 1);
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(
            smith_normal_form(&IntMatrix::identity(3)).unwrap().invariants,
            vec![1, 1, 1]
        );
        assert_eq!(
            smith_normal_form(&IntMatrix::diagonal(&[2, 2]))
                .unwrap()
                .invariants,
            vec![2, 2]
        );
        let s = smith_normal_form(&m(&[&[2, 4], &[6, 8]])).unwrap();
        assert_eq!(s.invariants, vec![2, 4]);
        let s = smith_normal_form(&IntMatrix::diagonal(&[6, 4])).unwrap();
        assert_eq!(s.invariants, vec![2, 12]);
    }

    #[test]
    fn snf_rectangular_with_zero_rows() {
        let a = m(&[&[0, 0, 0], &[0, 3, 0]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.invariants, vec![3, 0]);
        let recon = s
            .left_transform
            .mul(&a)
            .unwrap()
            .mul(&s.right_transform)
            .unwrap();
        assert_eq!(recon, s.diagonal_matrix());
    }

    #[test]
    fn kernel_trivial_cases() {
        assert_eq!(kernel_basis(&IntMatrix::identity(4)).unwrap().rows(), 0);
        assert_eq!(kernel_basis(&IntMatrix::zeros(2, 3)).unwrap().rows(), 3);
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let a = m(&[&[1, 1, 1]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.rows(), 2);
        for i in 0..2 {
            assert_eq!(k.row(i).iter().sum::<i64>(), 0);
        }
        // the sublattice spanned by (1,-1,0),(0,1,-1) is the full kernel
        let target = m(&[&[1, -1, 0], &[0, 1, -1]]);
        let (tors, free) = quotient_structure(&k, &target).unwrap();
        assert!(tors.is_empty());
        assert_eq!(free, 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 4y = 0 has kernel spanned by (2, 1), not (4, 2)
        let k = kernel_basis(&m(&[&[2, -4]])).unwrap();
        assert_eq!(k, m(&[&[2, 1]]));
    }

    #[test]
    fn quotient_of_index_two() {
        let basis = IntMatrix::identity(2);
        let gens = m(&[&[2, 0], &[0, 1]]);
        assert_eq!(quotient_structure(&basis, &gens).unwrap(), (vec![2], 0));
    }

    #[test]
    fn coordinates_reject_outside_vectors() {
        let basis = m(&[&[2, 0]]);
        assert!(coordinates_in_basis(&basis, &m(&[&[1, 0]])).is_err());
        assert_eq!(
            coordinates_in_basis(&basis, &m(&[&[-4, 0]])).unwrap(),
            m(&[&[-2]])
        );
    }

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(12, 18), (-12, 18), (0, 5), (7, 0), (-3, -9)] {
            let (g, x, y) = ext_gcd(a, b);
            assert!(g >= 0);
            assert_eq!(a * x + b * y, g);
        }
    }
}
