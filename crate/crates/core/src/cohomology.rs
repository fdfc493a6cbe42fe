//! `H^1(G, M)` for a finite group of lattice isometries acting on the
//! ambient lattice `M`.

use std::fmt;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, quotient_structure, rank, IntMatrix};
use crate::picard::{AnyLattice, Lattice, LatticeVector};
use crate::weyl::{subgroups_up_to, Isometry, MatrixGroup, SUBGROUP_SEARCH_LIMIT};

/// Default bound on `|G| * rank` for the general cocycle computation.
pub const DEFAULT_H1_SIZE_BOUND: usize = 5000;

/// A finite abelian group by its invariant factors; empty means trivial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct H1Result {
    pub invariant_factors: Vec<i64>,
}

impl H1Result {
    pub fn trivial() -> Self {
        H1Result {
            invariant_factors: Vec::new(),
        }
    }

    fn from_torsion(mut factors: Vec<i64>) -> Self {
        factors.retain(|&d| d > 1);
        H1Result {
            invariant_factors: factors,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    /// `(Z/p)^k` with `k` returned, if the group is elementary abelian for `p`.
    pub fn elementary_rank(&self, p: i64) -> Option<usize> {
        self.invariant_factors
            .iter()
            .all(|&d| d == p)
            .then_some(self.invariant_factors.len())
    }

    fn check_annihilated_by(&self, n: u64) -> Result<()> {
        for &d in &self.invariant_factors {
            if n % d as u64 != 0 {
                return Err(Error::Inconsistent(format!(
                    "invariant factor {d} does not divide the group order {n}"
                )));
            }
        }
        for w in self.invariant_factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Inconsistent("invariant factors out of order".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for H1Result {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let mut runs: Vec<(i64, usize)> = Vec::new();
        for &d in &self.invariant_factors {
            match runs.last_mut() {
                Some((x, k)) if *x == d => *k += 1,
                _ => runs.push((d, 1)),
            }
        }
        let parts: Vec<String> = runs
            .iter()
            .map(|&(d, k)| {
                if k == 1 {
                    format!("Z/{d}")
                } else {
                    format!("(Z/{d})^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `H^1` of the cyclic group generated by `x`, as `ker N / im(x - 1)` with
/// `N` the norm `1 + x + ... + x^{n-1}`. `n` must be the exact order.
pub fn h1_cyclic(x: &Isometry, n: u64) -> Result<H1Result> {
    if n == 0 || x.order_bounded(n)? != n {
        return Err(Error::WrongOrder(n as usize));
    }
    let r = x.rank();
    let id = IntMatrix::identity(r);
    let mut norm = IntMatrix::zeros(r, r);
    let mut power = id.clone();
    for _ in 0..n {
        norm = norm.add(&power)?;
        power = power.mul(x.matrix())?;
    }
    let kernel = kernel_basis(&norm)?;
    // columns of x - 1 span its image
    let image = x.matrix().sub(&id)?.transpose();
    let (torsion, free) = quotient_structure(&kernel, &image)?;
    if free != 0 {
        return Err(Error::Inconsistent("cyclic H^1 has positive rank".into()));
    }
    let h = H1Result::from_torsion(torsion);
    h.check_annihilated_by(n)?;
    Ok(h)
}

/// `H^1(G, M)` with the default size bound.
pub fn h1(g: &MatrixGroup) -> Result<H1Result> {
    h1_bounded(g, DEFAULT_H1_SIZE_BOUND)
}

/// `H^1(G, M) = Z^1 / B^1`. A cocycle is fixed by its values on the
/// generators: along a breadth-first spanning tree of the Cayley graph,
/// `f(g s) = f(g) + g f(s)` defines `f` on every element, and the remaining
/// edges give the linear conditions cutting out `Z^1`.
pub fn h1_bounded(g: &MatrixGroup, bound: usize) -> Result<H1Result> {
    let r = g.lattice().rank();
    let size = g.order() as usize * r;
    if size > bound {
        return Err(Error::TooLarge {
            what: "a cocycle system",
            order: size,
            limit: bound,
        });
    }
    let els = g.elements()?;
    let gens: Vec<Isometry> = g
        .generators()
        .iter()
        .filter(|s| !s.is_identity())
        .cloned()
        .collect();
    if gens.is_empty() {
        return Ok(H1Result::trivial());
    }
    let k = gens.len();
    let vars = r * k;
    let gen_idx: Vec<usize> = gens
        .iter()
        .map(|s| {
            g.index_of(s)
                .ok_or_else(|| Error::Inconsistent("generator outside the group".into()))
        })
        .collect::<Result<_>>()?;
    let n = els.len();
    let mul_idx = |a: usize, b: usize| -> Result<usize> {
        g.index_of(&els[a].compose(&els[b])?)
            .ok_or_else(|| Error::Inconsistent("product escaped group".into()))
    };

    // f(g) = A_g * p, p the stacked generator values
    let mut coeff: Vec<Option<IntMatrix>> = vec![None; n];
    let root = g
        .index_of(&g.identity())
        .ok_or_else(|| Error::Inconsistent("identity missing".into()))?;
    coeff[root] = Some(IntMatrix::zeros(r, vars));
    let mut queue = vec![root];
    let mut extra_edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut q = 0;
    while q < queue.len() {
        let a = queue[q];
        for (j, &s) in gen_idx.iter().enumerate() {
            let b = mul_idx(a, s)?;
            let step = edge_value(coeff[a].as_ref().unwrap(), els[a].matrix(), j, r)?;
            if coeff[b].is_none() {
                coeff[b] = Some(step);
                queue.push(b);
            } else {
                extra_edges.push((a, j, b));
            }
        }
        q += 1;
    }
    if queue.len() != n {
        return Err(Error::Inconsistent("generators do not generate the group".into()));
    }

    let rows: Vec<Vec<Vec<i64>>> = extra_edges
        .par_iter()
        .map(|&(a, j, b)| {
            let lhs = coeff[b].as_ref().unwrap();
            let rhs = edge_value(coeff[a].as_ref().unwrap(), els[a].matrix(), j, r)?;
            let diff = lhs.sub(&rhs)?;
            Ok(diff.to_rows().into_iter().filter(|row| row.iter().any(|&v| v != 0)).collect())
        })
        .collect::<Result<_>>()?;
    let mut constraint_rows: Vec<Vec<i64>> = rows.into_iter().flatten().collect();
    constraint_rows.sort();
    constraint_rows.dedup();
    let cocycles = if constraint_rows.is_empty() {
        IntMatrix::identity(vars)
    } else {
        kernel_basis(&IntMatrix::from_rows(&constraint_rows)?)?
    };

    // coboundary of m: the generator s takes the value (s - 1) m
    let mut boundary_rows = Vec::with_capacity(r);
    for col in 0..r {
        let mut row = Vec::with_capacity(vars);
        for s in &gens {
            let c = s.matrix().column(col);
            for (i, v) in c.into_iter().enumerate() {
                row.push(v - i64::from(i == col));
            }
        }
        boundary_rows.push(row);
    }
    let boundaries = IntMatrix::from_rows(&boundary_rows)?;

    if cocycles.rows() != rank(&boundaries)? {
        return Err(Error::Inconsistent(
            "cocycle and coboundary lattices differ in rank".into(),
        ));
    }
    let (torsion, free) = quotient_structure(&cocycles, &boundaries)?;
    if free != 0 {
        return Err(Error::Inconsistent("H^1 has positive rank".into()));
    }
    let h = H1Result::from_torsion(torsion);
    h.check_annihilated_by(g.order())?;
    Ok(h)
}

/// `A_g + g E_j`, where `E_j` selects the `j`-th generator block.
fn edge_value(a: &IntMatrix, gm: &IntMatrix, j: usize, r: usize) -> Result<IntMatrix> {
    let mut out = a.clone();
    for row in 0..r {
        for col in 0..r {
            let v = gm.get(row, col);
            if v != 0 {
                let c = j * r + col;
                out.set(row, c, crate::exactlin::add(out.get(row, c), v)?);
            }
        }
    }
    Ok(out)
}

/// Whether `H^1` vanishes on every subgroup; otherwise a smallest subgroup
/// (by order, then canonical element order) with nonzero `H^1`.
pub fn h1_trivial_all_subgroups(g: &MatrixGroup) -> Result<(bool, Option<MatrixGroup>)> {
    let (ok, witness, _) = h1_over_subgroups(g)?;
    Ok((ok, witness))
}

/// As [`h1_trivial_all_subgroups`], also returning the number of subgroups
/// examined.
pub fn h1_over_subgroups(g: &MatrixGroup) -> Result<(bool, Option<MatrixGroup>, usize)> {
    if g.order() as usize > SUBGROUP_SEARCH_LIMIT {
        return Err(Error::TooLarge {
            what: "a subgroup search",
            order: g.order() as usize,
            limit: SUBGROUP_SEARCH_LIMIT,
        });
    }
    let subs = subgroups_up_to(g, g.order() as usize)?;
    let bound = g.order() as usize * g.lattice().rank();
    let results: Vec<H1Result> = subs
        .par_iter()
        .map(|h| h1_bounded(h, bound.max(DEFAULT_H1_SIZE_BOUND)))
        .collect::<Result<_>>()?;
    let witness = subs
        .iter()
        .zip(&results)
        .find(|(_, r)| !r.is_trivial())
        .map(|(h, _)| h.clone());
    Ok((witness.is_none(), witness, subs.len()))
}

/// A basis of the lattice permuted by every generator, if one is found among
/// unions of orbits of the candidate vectors.
pub fn permutation_basis(g: &MatrixGroup) -> Result<Option<Vec<LatticeVector>>> {
    let l = g.lattice();
    let n = l.rank();
    let mut candidates: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::basis(n, i)).collect();
    match l.as_ref() {
        AnyLattice::DelPezzo(dp) => {
            candidates.extend(dp.classes_with(-1, -1));
            candidates.extend(dp.classes_with(0, -2));
            candidates.push(dp.canonical.neg());
        }
        AnyLattice::ConicBundle(cb) => {
            for i in 1..=cb.fiber_count {
                candidates.push(cb.fiber().sub(&cb.e(i)));
            }
            if let Ok(c2) = crate::picard::second_section(cb) {
                candidates.push(c2);
            }
        }
    }
    let mut orbits: Vec<Vec<LatticeVector>> = Vec::new();
    let mut seen: FxHashMap<LatticeVector, ()> = FxHashMap::default();
    for c in candidates {
        if seen.contains_key(&c) {
            continue;
        }
        let orbit = g.orbit_of(&c)?;
        for v in &orbit {
            seen.insert(v.clone(), ());
        }
        if orbit.len() <= n {
            orbits.push(orbit);
        }
    }
    orbits.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let mut chosen: Vec<usize> = Vec::new();
    let mut budget = 200_000usize;
    Ok(search_basis(&orbits, 0, n, &mut chosen, &mut budget)?.map(|idx| {
        idx.iter().flat_map(|&i| orbits[i].iter().cloned()).collect()
    }))
}

fn search_basis(
    orbits: &[Vec<LatticeVector>],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    budget: &mut usize,
) -> Result<Option<Vec<usize>>> {
    if remaining == 0 {
        let rows: Vec<Vec<i64>> = chosen
            .iter()
            .flat_map(|&i| orbits[i].iter().map(|v| v.0.clone()))
            .collect();
        let m = IntMatrix::from_rows(&rows)?;
        return Ok((m.determinant()?.abs() == 1).then(|| chosen.clone()));
    }
    for i in start..orbits.len() {
        if *budget == 0 {
            return Ok(None);
        }
        *budget -= 1;
        if orbits[i].len() > remaining {
            continue;
        }
        chosen.push(i);
        if let Some(found) = search_basis(orbits, i + 1, remaining - orbits[i].len(), chosen, budget)? {
            return Ok(Some(found));
        }
        chosen.pop();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{del_pezzo, roots};
    use crate::weyl::{generate, reflection};

    #[test]
    fn identity_has_trivial_h1() {
        assert!(h1_cyclic(&Isometry::identity(4), 1).unwrap().is_trivial());
        let l = del_pezzo(5).unwrap();
        let g = MatrixGroup::trivial(AnyLattice::from(l)).unwrap();
        assert!(h1(&g).unwrap().is_trivial());
        assert_eq!(h1_trivial_all_subgroups(&g).unwrap().0, true);
    }

    #[test]
    fn wrong_order_rejected() {
        let l = del_pezzo(4).unwrap();
        let r = reflection(&l, &roots(&l).roots[0]).unwrap();
        assert!(h1_cyclic(&r, 4).is_err());
        assert!(h1_cyclic(&r, 1).is_err());
    }

    #[test]
    fn reflection_agrees_across_methods() {
        let l = del_pezzo(4).unwrap();
        for a in roots(&l).roots.iter().take(6) {
            let r = reflection(&l, a).unwrap();
            let c = h1_cyclic(&r, 2).unwrap();
            let g = generate(AnyLattice::from(l.clone()), vec![r], 10).unwrap();
            assert_eq!(h1(&g).unwrap(), c);
        }
    }

    #[test]
    fn display() {
        let h = H1Result::from_torsion(vec![1, 2, 2, 4]);
        assert_eq!(h.to_string(), "(Z/2)^2 + Z/4");
        assert_eq!(h.order(), 16);
        assert_eq!(H1Result::trivial().to_string(), "0");
    }
}
