//! Picard lattices of del Pezzo surfaces and conic bundles.
//!
//! A del Pezzo surface of degree `d` is modelled as the blowup of `9 - d`
//! points: basis `h, e_1, ..., e_r` with form `diag(1, -1, ..., -1)` and
//! canonical class `-3h + sum e_i`. A conic bundle with `m` degenerate fibers
//! uses the basis `f, s, e_1, ..., e_m` of a blown-up Hirzebruch surface.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{dot, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|x| k * x).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Common surface of every lattice model: a Gram matrix and a canonical class.
pub trait Lattice {
    fn gram(&self) -> &IntMatrix;
    fn canonical(&self) -> &LatticeVector;
    /// Short stable identifier, e.g. `dp4` or `cb4e2`.
    fn id(&self) -> String;

    fn rank(&self) -> usize {
        self.gram().rows()
    }

    fn pairing(&self, x: &LatticeVector, y: &LatticeVector) -> Result<i64> {
        let n = self.rank();
        if x.len() != n || y.len() != n {
            return Err(Error::Dimension(format!(
                "vectors of length {} and {} on a rank-{n} lattice",
                x.len(),
                y.len()
            )));
        }
        dot(x.coords(), &self.gram().mul_vec(y.coords())?)
    }

    fn square(&self, x: &LatticeVector) -> Result<i64> {
        self.pairing(x, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    E8,
    E7,
    E6,
    D5,
    A4,
    A1xA2,
    A1,
}

impl RootType {
    pub fn for_degree(degree: i64) -> Option<RootType> {
        Some(match degree {
            1 => RootType::E8,
            2 => RootType::E7,
            3 => RootType::E6,
            4 => RootType::D5,
            5 => RootType::A4,
            6 => RootType::A1xA2,
            7 => RootType::A1,
            _ => return None,
        })
    }

    pub fn root_count(self) -> usize {
        match self {
            RootType::E8 => 240,
            RootType::E7 => 126,
            RootType::E6 => 72,
            RootType::D5 => 40,
            RootType::A4 => 20,
            RootType::A1xA2 => 8,
            RootType::A1 => 2,
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootType::E8 => "E8",
            RootType::E7 => "E7",
            RootType::E6 => "E6",
            RootType::D5 => "D5",
            RootType::A4 => "A4",
            RootType::A1xA2 => "A1xA2",
            RootType::A1 => "A1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelPezzoLattice {
    pub degree: i64,
    pub gram: IntMatrix,
    pub canonical: LatticeVector,
}

impl Lattice for DelPezzoLattice {
    fn gram(&self) -> &IntMatrix {
        &self.gram
    }
    fn canonical(&self) -> &LatticeVector {
        &self.canonical
    }
    fn id(&self) -> String {
        format!("dp{}", self.degree)
    }
}

/// Picard lattice of a del Pezzo surface of the given degree (1..=7).
pub fn del_pezzo(degree: i64) -> Result<DelPezzoLattice> {
    if !(1..=7).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    let r = (9 - degree) as usize;
    let mut diag = vec![-1; r + 1];
    diag[0] = 1;
    let mut k = vec![1; r + 1];
    k[0] = -3;
    Ok(DelPezzoLattice {
        degree,
        gram: IntMatrix::diagonal(&diag),
        canonical: LatticeVector(k),
    })
}

impl DelPezzoLattice {
    /// Number of blown-up points.
    pub fn points(&self) -> usize {
        (9 - self.degree) as usize
    }

    /// `d*h - sum a_i e_i` in coordinates.
    pub fn class(&self, d: i64, a: &[i64]) -> LatticeVector {
        assert_eq!(a.len(), self.points());
        let mut v = Vec::with_capacity(a.len() + 1);
        v.push(d);
        v.extend(a.iter().map(|x| -x));
        LatticeVector(v)
    }

    pub fn h(&self) -> LatticeVector {
        LatticeVector::basis(self.rank(), 0)
    }

    /// The exceptional class `e_i`, 1-based as in the blowup model.
    pub fn e(&self, i: usize) -> LatticeVector {
        assert!(i >= 1 && i <= self.points());
        LatticeVector::basis(self.rank(), i)
    }

    /// All `x` with `x^2 = square` and `x.K = k_dot`, sorted lexicographically.
    ///
    /// Writing `x = d h - sum a_i e_i`, the constraints read
    /// `sum a_i^2 = d^2 - square` and `sum a_i = 3d + k_dot`; Cauchy-Schwarz
    /// gives `(3d + k_dot)^2 <= r (d^2 - square)`, which bounds `d` because
    /// `r <= 8 < 9`.
    pub fn classes_with(&self, square: i64, k_dot: i64) -> Vec<LatticeVector> {
        let r = self.points() as i64;
        let admissible = |d: i64| {
            let budget = d * d - square;
            let sum = 3 * d + k_dot;
            budget >= 0 && sum * sum <= r * budget
        };
        // (9 - r) d^2 + 6 k d + k^2 + r*square <= 0 has bounded solutions
        let mut bound = 0i64;
        while (bound..bound + 64).any(|d| admissible(d) || admissible(-d)) {
            bound += 64;
        }
        let mut out = Vec::new();
        let mut a = vec![0i64; r as usize];
        for d in -bound..=bound {
            if !admissible(d) {
                continue;
            }
            fill_coefficients(&mut a, 0, d * d - square, 3 * d + k_dot, &mut |a| {
                out.push(self.class(d, a));
            });
        }
        out.sort();
        out
    }
}

/// Enumerates integer tuples `a[pos..]` with the given sum of squares and sum.
fn fill_coefficients(
    a: &mut [i64],
    pos: usize,
    squares: i64,
    sum: i64,
    emit: &mut dyn FnMut(&[i64]),
) {
    let left = (a.len() - pos) as i64;
    if left == 0 {
        if squares == 0 && sum == 0 {
            emit(a);
        }
        return;
    }
    if squares < 0 || sum * sum > left * squares {
        return;
    }
    let lim = (squares as f64).sqrt() as i64 + 1;
    for v in -lim..=lim {
        let sq = v * v;
        if sq > squares {
            continue;
        }
        a[pos] = v;
        fill_coefficients(a, pos + 1, squares - sq, sum - v, emit);
    }
    a[pos] = 0;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub roots: Vec<LatticeVector>,
    pub type_label: RootType,
}

/// All vectors with `x^2 = -2` and `x.K = 0`.
pub fn roots(l: &DelPezzoLattice) -> RootSystem {
    RootSystem {
        roots: l.classes_with(-2, 0),
        type_label: RootType::for_degree(l.degree).expect("degree validated at construction"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub classes: Vec<LatticeVector>,
}

impl ExceptionalSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn position(&self, x: &LatticeVector) -> Option<usize> {
        self.classes.binary_search(x).ok()
    }
}

/// All vectors with `x^2 = -1` and `x.K = -1`.
pub fn exceptional_classes(l: &DelPezzoLattice) -> ExceptionalSet {
    ExceptionalSet {
        classes: l.classes_with(-1, -1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicBundleLattice {
    #[serde(rename = "m")]
    pub fiber_count: usize,
    #[serde(rename = "e")]
    pub section_param: i64,
    pub gram: IntMatrix,
    pub canonical: LatticeVector,
}

impl Lattice for ConicBundleLattice {
    fn gram(&self) -> &IntMatrix {
        &self.gram
    }
    fn canonical(&self) -> &LatticeVector {
        &self.canonical
    }
    fn id(&self) -> String {
        format!("cb{}e{}", self.fiber_count, self.section_param)
    }
}

/// Conic bundle with `m` degenerate fibers over a Hirzebruch surface whose
/// negative section has square `-e`.
pub fn conic_bundle(m: i64, e: i64) -> Result<ConicBundleLattice> {
    if m < 0 || e < 0 {
        return Err(Error::InvalidParameter(format!(
            "conic bundle needs m >= 0 and e >= 0, got m={m}, e={e}"
        )));
    }
    let n = m as usize + 2;
    let mut gram = IntMatrix::zeros(n, n);
    gram.set(0, 1, 1);
    gram.set(1, 0, 1);
    gram.set(1, 1, -e);
    for i in 2..n {
        gram.set(i, i, -1);
    }
    let mut k = vec![1; n];
    k[0] = -(2 + e);
    k[1] = -2;
    Ok(ConicBundleLattice {
        fiber_count: m as usize,
        section_param: e,
        gram,
        canonical: LatticeVector(k),
    })
}

impl ConicBundleLattice {
    pub fn fiber(&self) -> LatticeVector {
        LatticeVector::basis(self.rank(), 0)
    }

    pub fn section(&self) -> LatticeVector {
        LatticeVector::basis(self.rank(), 1)
    }

    /// Component `e_i` of the `i`-th degenerate fiber, 1-based.
    pub fn e(&self, i: usize) -> LatticeVector {
        assert!(i >= 1 && i <= self.fiber_count);
        LatticeVector::basis(self.rank(), i + 1)
    }

    /// The two components `e_i` and `f - e_i` of fiber `i`.
    pub fn components(&self, i: usize) -> (LatticeVector, LatticeVector) {
        let e = self.e(i);
        (e.clone(), self.fiber().sub(&e))
    }
}

/// The section `s + e f - sum e_i`, disjoint from `s`; only defined when
/// `m = 2e`.
pub fn second_section(l: &ConicBundleLattice) -> Result<LatticeVector> {
    if l.fiber_count as i64 != 2 * l.section_param {
        return Err(Error::InvalidParameter(format!(
            "second section needs m = 2e, got m={}, e={}",
            l.fiber_count, l.section_param
        )));
    }
    let mut v = vec![-1; l.rank()];
    v[0] = l.section_param;
    v[1] = 1;
    Ok(LatticeVector(v))
}

/// Either lattice model, for code that is generic over the surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnyLattice {
    DelPezzo(DelPezzoLattice),
    ConicBundle(ConicBundleLattice),
}

impl AnyLattice {
    pub fn as_del_pezzo(&self) -> Option<&DelPezzoLattice> {
        match self {
            AnyLattice::DelPezzo(l) => Some(l),
            AnyLattice::ConicBundle(_) => None,
        }
    }

    pub fn as_conic_bundle(&self) -> Option<&ConicBundleLattice> {
        match self {
            AnyLattice::ConicBundle(l) => Some(l),
            AnyLattice::DelPezzo(_) => None,
        }
    }

    /// Rebuilds from parameters and checks the stored data against them.
    pub fn validated(self) -> Result<Self> {
        let fresh = match &self {
            AnyLattice::DelPezzo(l) => AnyLattice::DelPezzo(del_pezzo(l.degree)?),
            AnyLattice::ConicBundle(l) => {
                AnyLattice::ConicBundle(conic_bundle(l.fiber_count as i64, l.section_param)?)
            }
        };
        if fresh != self {
            return Err(Error::Malformed(
                "lattice data does not match its parameters".into(),
            ));
        }
        Ok(self)
    }
}

impl Lattice for AnyLattice {
    fn gram(&self) -> &IntMatrix {
        match self {
            AnyLattice::DelPezzo(l) => l.gram(),
            AnyLattice::ConicBundle(l) => l.gram(),
        }
    }
    fn canonical(&self) -> &LatticeVector {
        match self {
            AnyLattice::DelPezzo(l) => l.canonical(),
            AnyLattice::ConicBundle(l) => l.canonical(),
        }
    }
    fn id(&self) -> String {
        match self {
            AnyLattice::DelPezzo(l) => l.id(),
            AnyLattice::ConicBundle(l) => l.id(),
        }
    }
}

impl From<DelPezzoLattice> for AnyLattice {
    fn from(l: DelPezzoLattice) -> Self {
        AnyLattice::DelPezzo(l)
    }
}

impl From<ConicBundleLattice> for AnyLattice {
    fn from(l: ConicBundleLattice) -> Self {
        AnyLattice::ConicBundle(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_square_is_degree() {
        for d in 1..=7 {
            let l = del_pezzo(d).unwrap();
            assert_eq!(l.rank() as i64, 10 - d);
            assert_eq!(l.square(&l.canonical).unwrap(), d);
        }
        assert_eq!(del_pezzo(0), Err(Error::DegreeOutOfRange(0)));
        assert_eq!(del_pezzo(8), Err(Error::DegreeOutOfRange(8)));
    }

    #[test]
    fn quartic_lattice_shape() {
        let l = del_pezzo(4).unwrap();
        assert_eq!(l.rank(), 6);
        assert_eq!(l.canonical.coords(), &[-3, 1, 1, 1, 1, 1]);
        let line = l.class(1, &[1, 1, 0, 0, 0]);
        assert_eq!(l.square(&line).unwrap(), -1);
        assert_eq!(l.pairing(&l.e(1), &l.e(2)).unwrap(), 0);
    }

    #[test]
    fn pairing_checks_dimensions() {
        let l = del_pezzo(3).unwrap();
        assert_eq!(l.pairing(&l.canonical, &l.canonical).unwrap(), 3);
        assert!(l.pairing(&LatticeVector::zero(3), &l.canonical).is_err());
    }

    #[test]
    fn small_degree_counts() {
        let l = del_pezzo(6).unwrap();
        let r = roots(&l);
        assert_eq!(r.roots.len(), 8);
        assert_eq!(r.type_label, RootType::A1xA2);
        assert_eq!(exceptional_classes(&l).len(), 6);
        let l7 = del_pezzo(7).unwrap();
        assert_eq!(roots(&l7).roots.len(), 2);
        assert_eq!(exceptional_classes(&l7).len(), 3);
    }

    #[test]
    fn conic_bundle_basics() {
        let l = conic_bundle(4, 2).unwrap();
        assert_eq!(l.rank(), 6);
        assert_eq!(l.square(&l.canonical).unwrap(), 4);
        let c2 = second_section(&l).unwrap();
        assert_eq!(c2.coords(), &[2, 1, -1, -1, -1, -1]);
        assert_eq!(l.square(&c2).unwrap(), -2);
        assert_eq!(l.square(&l.section()).unwrap(), -2);
        assert_eq!(l.pairing(&c2, &l.section()).unwrap(), 0);
        for i in 1..=4 {
            let (a, b) = l.components(i);
            assert_eq!(l.square(&a).unwrap(), -1);
            assert_eq!(l.square(&b).unwrap(), -1);
            assert_eq!(l.pairing(&a, &b).unwrap(), 1);
            assert_eq!(l.pairing(&c2, &a).unwrap(), 1);
            assert_eq!(l.pairing(&c2, &b).unwrap(), 0);
        }
        let l0 = conic_bundle(0, 0).unwrap();
        assert_eq!(l0.rank(), 2);
        assert_eq!(l0.square(&l0.canonical).unwrap(), 8);
        assert!(conic_bundle(-1, 0).is_err());
        assert!(conic_bundle(1, -2).is_err());
    }

    #[test]
    fn second_section_requires_m_equal_2e() {
        let l = conic_bundle(2, 1).unwrap();
        let c2 = second_section(&l).unwrap();
        assert_eq!(l.square(&c2).unwrap(), -1);
        assert_eq!(l.pairing(&c2, &l.section()).unwrap(), 0);
        assert!(second_section(&conic_bundle(4, 1).unwrap()).is_err());
        for g in 1..=4i64 {
            let l = conic_bundle(2 * g + 2, g + 1).unwrap();
            let c2 = second_section(&l).unwrap();
            assert_eq!(l.square(&c2).unwrap(), -(g + 1));
            assert_eq!(l.square(&l.section()).unwrap(), -(g + 1));
        }
    }

    #[test]
    fn lattice_json_fields() {
        let v = serde_json::to_value(AnyLattice::from(conic_bundle(2, 1).unwrap())).unwrap();
        assert_eq!(v["kind"], "conic_bundle");
        assert_eq!(v["m"], 2);
        assert_eq!(v["e"], 1);
        let back: AnyLattice = serde_json::from_value(v).unwrap();
        assert!(back.validated().is_ok());
    }
}
