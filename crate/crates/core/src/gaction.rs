//! Invariants of a group action on a lattice: traces on `K^perp`, Lefschetz
//! predictions, invariant rank, orbits on exceptional classes and
//! cyclotomic profiles of characteristic polynomials.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{
    char_poly, cyclo_factorize, divisors, euler_phi, gcd, kernel_basis, CycloFactorization,
    IntMatrix, IntPolynomial,
};
use crate::picard::{exceptional_classes, AnyLattice, ExceptionalSet, Lattice, LatticeVector};
use crate::weyl::{Isometry, MatrixGroup};

fn check_fixes_canonical<L: Lattice + ?Sized>(l: &L, x: &Isometry) -> Result<()> {
    if x.apply(l.canonical())? != *l.canonical() {
        return Err(Error::NotAnIsometry("canonical class not fixed".into()));
    }
    Ok(())
}

/// Trace on `K^perp`: the full trace minus the eigenvalue 1 on `K`.
pub fn trace_on_q<L: Lattice + ?Sized>(l: &L, x: &Isometry) -> Result<i64> {
    check_fixes_canonical(l, x)?;
    Ok(x.trace()? - 1)
}

/// Euler number of the fixed locus predicted by the Lefschetz formula.
pub fn predicted_euler<L: Lattice + ?Sized>(l: &L, x: &Isometry) -> Result<i64> {
    Ok(trace_on_q(l, x)? + 3)
}

/// Rank of the invariant sublattice, computed by the character formula and
/// by the integer kernel of the stacked `g - 1`; the two must agree.
pub fn invariant_rank(g: &MatrixGroup) -> Result<usize> {
    let by_character = invariant_rank_by_character(g)?;
    let by_kernel = invariant_rank_by_kernel(g)?;
    if by_character != by_kernel {
        return Err(Error::Inconsistent(format!(
            "invariant rank: character formula gives {by_character}, kernel gives {by_kernel}"
        )));
    }
    Ok(by_kernel)
}

pub fn invariant_rank_by_character(g: &MatrixGroup) -> Result<usize> {
    let total: i64 = g
        .elements()?
        .par_iter()
        .map(Isometry::trace)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let n = g.order() as i64;
    if total % n != 0 {
        return Err(Error::Inconsistent(format!(
            "trace sum {total} not divisible by group order {n}"
        )));
    }
    Ok((total / n) as usize)
}

pub fn invariant_rank_by_kernel(g: &MatrixGroup) -> Result<usize> {
    Ok(invariant_basis(g)?.rows())
}

/// Saturated basis of the invariant sublattice, as rows.
pub fn invariant_basis(g: &MatrixGroup) -> Result<IntMatrix> {
    let n = g.lattice().rank();
    let mut stacked = IntMatrix::zeros(0, n);
    for x in g.generators() {
        stacked = stacked.vstack(&x.matrix().sub(&IntMatrix::identity(n))?)?;
    }
    kernel_basis(&stacked)
}

/// Classes of square -1 with `x.K = -1` that the lattice model treats as
/// exceptional: lines on a del Pezzo lattice, fiber components on a conic
/// bundle.
pub fn exceptional_set(l: &AnyLattice) -> ExceptionalSet {
    match l {
        AnyLattice::DelPezzo(dp) => exceptional_classes(dp),
        AnyLattice::ConicBundle(cb) => {
            let mut classes: Vec<LatticeVector> = (1..=cb.fiber_count)
                .flat_map(|i| {
                    let (a, b) = cb.components(i);
                    [a, b]
                })
                .collect();
            classes.sort();
            ExceptionalSet { classes }
        }
    }
}

/// Partition of `classes` into orbits, each sorted, ordered by smallest member.
pub fn orbits_on(g: &MatrixGroup, classes: &ExceptionalSet) -> Result<Vec<Vec<LatticeVector>>> {
    let set: FxHashSet<&LatticeVector> = classes.classes.iter().collect();
    let mut assigned: FxHashSet<LatticeVector> = FxHashSet::default();
    let mut orbits = Vec::new();
    for c in &classes.classes {
        if assigned.contains(c) {
            continue;
        }
        let mut orbit = vec![c.clone()];
        assigned.insert(c.clone());
        let mut k = 0;
        while k < orbit.len() {
            for x in g.generators() {
                let y = x.apply(&orbit[k])?;
                if !set.contains(&y) {
                    return Err(Error::NotClosed);
                }
                if assigned.insert(y.clone()) {
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort();
        orbits.push(orbit);
    }
    orbits.sort();
    Ok(orbits)
}

pub fn orbit_sizes(g: &MatrixGroup, classes: &ExceptionalSet) -> Result<Vec<usize>> {
    let mut sizes: Vec<usize> = orbits_on(g, classes)?.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    Ok(sizes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divisibility {
    /// Invariant rank one and every orbit size divisible by the degree.
    Holds,
    /// Invariant rank one but some orbit size is not divisible.
    Fails,
    /// Rank is not one, or the degree has no such rule.
    NotApplicable,
}

/// For a minimal action (invariant rank one) on a degree-4 or degree-5 del
/// Pezzo lattice, every orbit on the lines has size divisible by the degree.
pub fn minimality_divisibility_check(g: &MatrixGroup) -> Result<Divisibility> {
    let Some(dp) = g.lattice().as_del_pezzo() else {
        return Ok(Divisibility::NotApplicable);
    };
    if !matches!(dp.degree, 4 | 5) {
        return Ok(Divisibility::NotApplicable);
    }
    if invariant_rank(g)? != 1 {
        return Ok(Divisibility::NotApplicable);
    }
    let d = dp.degree as usize;
    let sizes = orbit_sizes(g, &exceptional_classes(dp))?;
    Ok(if sizes.iter().all(|s| s % d == 0) {
        Divisibility::Holds
    } else {
        Divisibility::Fails
    })
}

/// Characteristic polynomial on `K^perp`, i.e. `det(t - x) / (t - 1)`.
pub fn char_poly_on_q<L: Lattice + ?Sized>(l: &L, x: &Isometry) -> Result<IntPolynomial> {
    check_fixes_canonical(l, x)?;
    let full = char_poly(x.matrix())?;
    let (q, r) = full.div_rem_monic(&IntPolynomial::linear(1))?;
    if !r.is_zero() {
        return Err(Error::Inconsistent("1 is not an eigenvalue".into()));
    }
    Ok(q)
}

/// Cyclotomic factorization of the characteristic polynomial on `K^perp`,
/// over the indices dividing the order of `x`.
pub fn cyclo_profile<L: Lattice + ?Sized>(l: &L, x: &Isometry) -> Result<CycloFactorization> {
    let chi = char_poly_on_q(l, x)?;
    let ord = x.order()?;
    let f = cyclo_factorize(&chi, &divisors(ord))?;
    if !f.is_complete() {
        return Err(Error::Inconsistent(format!(
            "characteristic polynomial {chi} of a finite-order isometry has a non-cyclotomic part"
        )));
    }
    Ok(f)
}

/// Profile of `x^k` from the profile of `x`: a primitive `d`-th root of unity
/// raised to the `k` is a primitive `d / gcd(d, k)`-th root, so
/// `Phi_d^m` becomes `Phi_{d'}^{m phi(d) / phi(d')}`.
pub fn cyclo_power(f: &CycloFactorization, k: u64) -> Result<CycloFactorization> {
    if !f.is_complete() || k == 0 {
        return Err(Error::InvalidParameter(
            "power map needs a complete factorization and k >= 1".into(),
        ));
    }
    let mut out: BTreeMap<u64, u32> = BTreeMap::new();
    for (&d, &m) in &f.factors {
        let d2 = d / gcd(d as i64, k as i64) as u64;
        let mult = u64::from(m) * euler_phi(d) / euler_phi(d2);
        *out.entry(d2).or_insert(0) += mult as u32;
    }
    Ok(CycloFactorization {
        factors: out,
        remainder: IntPolynomial::one(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementReport {
    pub index: usize,
    pub order: u64,
    pub trace_on_q: i64,
    pub predicted_euler: i64,
    pub cyclotomic_profile: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionReport {
    pub schema: String,
    pub lattice: String,
    pub group_order: u64,
    pub per_element: Vec<ElementReport>,
    pub invariant_rank: usize,
    pub orbit_sizes: Vec<usize>,
}

pub fn action_report(g: &MatrixGroup) -> Result<ActionReport> {
    let l = g.lattice().as_ref();
    let per_element = g
        .elements()?
        .par_iter()
        .enumerate()
        .map(|(index, x)| {
            let t = trace_on_q(l, x)?;
            Ok(ElementReport {
                index,
                order: x.order()?,
                trace_on_q: t,
                predicted_euler: t + 3,
                cyclotomic_profile: cyclo_profile(l, x)?.label(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let invariant_rank = invariant_rank(g)?;
    let orbit_sizes = orbit_sizes(g, &exceptional_set(l))?;
    debug_assert_eq!(orbit_sizes.iter().sum::<usize>(), exceptional_set(l).len());
    Ok(ActionReport {
        schema: "1".into(),
        lattice: l.id(),
        group_order: g.order(),
        per_element,
        invariant_rank,
        orbit_sizes,
    })
}

impl ActionReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,order,trace_on_q,predicted_euler,cyclotomic_profile\n");
        for e in &self.per_element {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.index, e.order, e.trace_on_q, e.predicted_euler, e.cyclotomic_profile
            ));
        }
        out
    }

    /// Trace on `K^perp` -> number of elements.
    pub fn trace_multiset(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for e in &self.per_element {
            *m.entry(e.trace_on_q).or_insert(0) += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::cyclotomic;
    use crate::picard::del_pezzo;
    use crate::weyl::{generate, reflection};
    use std::sync::Arc;

    #[test]
    fn identity_traces() {
        let l = del_pezzo(4).unwrap();
        let id = Isometry::identity(6);
        assert_eq!(trace_on_q(&l, &id).unwrap(), 5);
        assert_eq!(predicted_euler(&l, &id).unwrap(), 8);
        let p = cyclo_profile(&l, &id).unwrap();
        assert_eq!(p.factors, BTreeMap::from([(1, 5)]));
    }

    #[test]
    fn trivial_group_rank_and_orbits() {
        let l = del_pezzo(4).unwrap();
        let g = MatrixGroup::trivial(Arc::new(AnyLattice::from(l.clone()))).unwrap();
        assert_eq!(invariant_rank(&g).unwrap(), 6);
        let sizes = orbit_sizes(&g, &exceptional_classes(&l)).unwrap();
        assert_eq!(sizes, vec![1; 16]);
        assert_eq!(
            minimality_divisibility_check(&g).unwrap(),
            Divisibility::NotApplicable
        );
    }

    #[test]
    fn single_reflection_rank() {
        let l = del_pezzo(4).unwrap();
        let r = reflection(&l, &l.e(1).sub(&l.e(2))).unwrap();
        let g = generate(Arc::new(AnyLattice::from(l.clone())), vec![r.clone()], 10).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(invariant_rank(&g).unwrap(), 5);
        assert_eq!(trace_on_q(&l, &r).unwrap(), 3);
    }

    #[test]
    fn power_map_examples() {
        // Phi4^u Phi2^v Phi1^w squared is Phi2^{2u} Phi1^{v+w}
        for (u, v, w) in [(1, 2, 3), (2, 0, 3), (3, 1, 0)] {
            let f = CycloFactorization::from_factors([(4, u), (2, v), (1, w)]);
            let sq = cyclo_power(&f, 2).unwrap();
            assert_eq!(
                sq,
                CycloFactorization::from_factors([(2, 2 * u), (1, v + w)])
            );
        }
        let f = CycloFactorization::from_factors([(5, 1), (3, 1), (1, 1)]);
        assert_eq!(
            cyclo_power(&f, 5).unwrap(),
            CycloFactorization::from_factors([(3, 1), (1, 5)])
        );
        assert_eq!(cyclo_power(&f, 1).unwrap(), f);
        let incomplete = CycloFactorization {
            factors: BTreeMap::new(),
            remainder: cyclotomic(7).mul(&IntPolynomial::new(vec![2, 1])).unwrap(),
        };
        assert!(cyclo_power(&incomplete, 2).is_err());
    }
}
