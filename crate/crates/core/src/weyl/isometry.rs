use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{hermite_normal_form, IntMatrix};
use crate::picard::{DelPezzoLattice, Lattice, LatticeVector};

/// A lattice isometry fixing the canonical class, acting on coordinate
/// columns: the image of basis vector `j` is column `j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Isometry {
    matrix: IntMatrix,
}

impl Isometry {
    /// Wraps `matrix` after checking `M^T G M = G` and `M K = K`.
    pub fn new<L: Lattice + ?Sized>(l: &L, matrix: IntMatrix) -> Result<Self> {
        let n = l.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::NotAnIsometry(format!(
                "{}x{} matrix on a rank-{n} lattice",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let g = l.gram();
        if matrix.transpose().mul(g)?.mul(&matrix)? != *g {
            return Err(Error::NotAnIsometry("intersection form not preserved".into()));
        }
        let k = l.canonical();
        if matrix.mul_vec(k.coords())? != k.coords() {
            return Err(Error::NotAnIsometry("canonical class not fixed".into()));
        }
        Ok(Isometry { matrix })
    }

    /// Skips validation; for products of already validated isometries.
    pub(crate) fn from_trusted(matrix: IntMatrix) -> Self {
        Isometry { matrix }
    }

    pub fn identity(rank: usize) -> Self {
        Isometry {
            matrix: IntMatrix::identity(rank),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Flattened coordinate tuple; the canonical key for hashing and sorting.
    pub fn key(&self) -> &[i64] {
        self.matrix.as_flat()
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        Ok(Isometry {
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        Ok(LatticeVector(self.matrix.mul_vec(v.coords())?))
    }

    pub fn pow(&self, k: u64) -> Result<Isometry> {
        let mut acc = Isometry::identity(self.rank());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative order; errors past `limit`.
    pub fn order_bounded(&self, limit: u64) -> Result<u64> {
        let mut x = self.clone();
        for k in 1..=limit {
            if x.is_identity() {
                return Ok(k);
            }
            x = x.compose(self)?;
        }
        Err(Error::Inconsistent(format!("element order exceeds {limit}")))
    }

    pub fn order(&self) -> Result<u64> {
        self.order_bounded(10_000)
    }

    /// Inverse through the form: `M^{-1} = G^{-1} M^T G`.
    pub fn inverse_with(&self, gram: &IntMatrix, gram_inverse: &IntMatrix) -> Result<Isometry> {
        Ok(Isometry {
            matrix: gram_inverse.mul(&self.matrix.transpose())?.mul(gram)?,
        })
    }

    pub fn trace(&self) -> Result<i64> {
        self.matrix.trace()
    }

    /// Whether the matrix only permutes basis vectors.
    pub fn is_permutation(&self) -> bool {
        let n = self.rank();
        (0..n).all(|j| {
            let col = self.matrix.column(j);
            col.iter().filter(|&&x| x == 1).count() == 1 && col.iter().all(|&x| x == 0 || x == 1)
        })
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry{:?}", self.matrix.to_rows())
    }
}

/// Inverse of a unimodular Gram matrix: its Hermite form is the identity, so
/// the tracked transform is the inverse.
pub fn unimodular_inverse(g: &IntMatrix) -> Result<IntMatrix> {
    let (h, u) = hermite_normal_form(g)?;
    if !h.is_identity() {
        return Err(Error::Inconsistent("form is not unimodular".into()));
    }
    Ok(u)
}

/// The reflection `x -> x + (x.a) a` in a root `a` (`a^2 = -2`, `a.K = 0`).
pub fn reflection(l: &DelPezzoLattice, root: &LatticeVector) -> Result<Isometry> {
    if l.square(root)? != -2 || l.pairing(root, &l.canonical)? != 0 {
        return Err(Error::NotARoot(format!("{root:?}")));
    }
    Ok(Isometry::from_trusted(reflection_matrix(l, root)?))
}

pub(crate) fn reflection_matrix<L: Lattice + ?Sized>(
    l: &L,
    root: &LatticeVector,
) -> Result<IntMatrix> {
    let n = l.rank();
    let ga = l.gram().mul_vec(root.coords())?;
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, m.get(i, j) + root.coords()[i] * ga[j]);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{del_pezzo, roots};

    #[test]
    fn transposition_reflection() {
        let l = del_pezzo(4).unwrap();
        let a = l.e(1).sub(&l.e(2));
        let r = reflection(&l, &a).unwrap();
        assert!(r.is_permutation());
        assert_eq!(r.apply(&l.e(1)).unwrap(), l.e(2));
        assert_eq!(r.apply(&l.e(2)).unwrap(), l.e(1));
        assert_eq!(r.apply(&l.h()).unwrap(), l.h());
    }

    #[test]
    fn quadratic_reflection_on_h() {
        let l = del_pezzo(4).unwrap();
        let a = l.class(1, &[1, 1, 1, 0, 0]);
        let r = reflection(&l, &a).unwrap();
        assert_eq!(r.apply(&l.h()).unwrap(), l.class(2, &[1, 1, 1, 0, 0]));
        assert_eq!(r.apply(&l.e(1)).unwrap(), l.class(1, &[0, 1, 1, 0, 0]));
    }

    #[test]
    fn every_d5_reflection_is_an_involutive_isometry() {
        let l = del_pezzo(4).unwrap();
        for a in roots(&l).roots {
            let r = reflection(&l, &a).unwrap();
            assert!(Isometry::new(&l, r.matrix().clone()).is_ok());
            assert!(r.compose(&r).unwrap().is_identity());
        }
    }

    #[test]
    fn rejects_non_roots() {
        let l = del_pezzo(4).unwrap();
        assert!(reflection(&l, &l.e(1)).is_err());
        assert!(Isometry::new(&l, IntMatrix::identity(5)).is_err());
        assert!(Isometry::new(&l, IntMatrix::diagonal(&[1, -1, 1, 1, 1, 1])).is_err());
    }

    #[test]
    fn inverse_through_form() {
        let l = del_pezzo(3).unwrap();
        let rs = roots(&l).roots;
        let x = reflection(&l, &rs[0])
            .unwrap()
            .compose(&reflection(&l, &rs[5]).unwrap())
            .unwrap();
        let gi = unimodular_inverse(&l.gram).unwrap();
        let xi = x.inverse_with(&l.gram, &gi).unwrap();
        assert!(x.compose(&xi).unwrap().is_identity());
    }
}
