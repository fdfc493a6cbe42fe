//! Group order without storing elements: the generators act faithfully by
//! permutations on a finite spanning set of vectors, and a Schreier-Sims
//! stabilizer chain over that action yields the order as a product of orbit
//! lengths.

use rustc_hash::FxHashMap;

use super::isometry::Isometry;
use crate::error::{Error, Result};
use crate::exactlin::{rank, IntMatrix};
use crate::picard::{exceptional_classes, AnyLattice, Lattice, LatticeVector};

type Perm = Vec<u32>;

/// Apply `a` then `b`.
fn compose(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn is_identity(a: &Perm) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

struct Level {
    base: u32,
    /// point -> coset representative mapping `base` to that point
    transversal: FxHashMap<u32, Perm>,
}

/// Deterministic Schreier-Sims on permutations of `degree` points.
pub(crate) struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
    strong: Vec<Perm>,
}

impl StabilizerChain {
    pub(crate) fn new(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
            strong: Vec::new(),
        };
        for g in gens {
            if !is_identity(g) && !chain.strong.contains(g) {
                chain.strong.push(g.clone());
            }
        }
        if let Some(first) = chain.strong.first() {
            let b = first.iter().enumerate().position(|(i, &x)| i as u32 != x).unwrap();
            chain.levels.push(Level {
                base: b as u32,
                transversal: FxHashMap::default(),
            });
        }
        chain.complete();
        chain
    }

    fn level_gens(&self, level: usize) -> Vec<&Perm> {
        let fixed: Vec<u32> = self.levels[..level].iter().map(|l| l.base).collect();
        self.strong
            .iter()
            .filter(|g| fixed.iter().all(|&b| g[b as usize] == b))
            .collect()
    }

    fn rebuild_transversal(&mut self, level: usize) {
        let gens: Vec<Perm> = self.level_gens(level).into_iter().cloned().collect();
        let base = self.levels[level].base;
        let mut t: FxHashMap<u32, Perm> = FxHashMap::default();
        t.insert(base, (0..self.degree as u32).collect());
        let mut queue = vec![base];
        let mut k = 0;
        while k < queue.len() {
            let beta = queue[k];
            let u = t[&beta].clone();
            for g in &gens {
                let img = g[beta as usize];
                if let std::collections::hash_map::Entry::Vacant(e) = t.entry(img) {
                    e.insert(compose(&u, g));
                    queue.push(img);
                }
            }
            k += 1;
        }
        self.levels[level].transversal = t;
    }

    /// Sifts `h` through the levels from `start`; returns the residue and
    /// the level where it got stuck (`levels.len()` if it passed them all).
    fn sift(&self, mut h: Perm, start: usize) -> (Perm, usize) {
        for (j, lvl) in self.levels.iter().enumerate().skip(start) {
            let beta = h[lvl.base as usize];
            match lvl.transversal.get(&beta) {
                Some(u) => h = compose(&h, &invert(u)),
                None => return (h, j),
            }
        }
        let n = self.levels.len();
        (h, n)
    }

    fn complete(&mut self) {
        'restart: loop {
            for i in (0..self.levels.len()).rev() {
                self.rebuild_transversal(i);
                let gens: Vec<Perm> = self.level_gens(i).into_iter().cloned().collect();
                let orbit: Vec<(u32, Perm)> = {
                    let mut v: Vec<_> = self.levels[i]
                        .transversal
                        .iter()
                        .map(|(&b, u)| (b, u.clone()))
                        .collect();
                    v.sort_unstable_by_key(|(b, _)| *b);
                    v
                };
                for (beta, u) in &orbit {
                    for s in &gens {
                        let img = s[*beta as usize];
                        let back = invert(&self.levels[i].transversal[&img]);
                        let schreier = compose(&compose(u, s), &back);
                        if is_identity(&schreier) {
                            continue;
                        }
                        let (residue, j) = self.sift(schreier, i + 1);
                        if is_identity(&residue) {
                            continue;
                        }
                        if j == self.levels.len() {
                            let b = residue
                                .iter()
                                .enumerate()
                                .position(|(p, &x)| p as u32 != x)
                                .unwrap();
                            self.levels.push(Level {
                                base: b as u32,
                                transversal: FxHashMap::default(),
                            });
                        }
                        self.strong.push(residue);
                        for k in i + 1..self.levels.len() {
                            self.rebuild_transversal(k);
                        }
                        continue 'restart;
                    }
                }
            }
            break;
        }
    }

    pub(crate) fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.transversal.len() as u128)
            .product()
    }

    pub(crate) fn contains(&self, g: &Perm) -> bool {
        let (res, _) = self.sift(g.clone(), 0);
        is_identity(&res)
    }
}

/// Finite generator-stable set of vectors spanning the lattice rationally:
/// exceptional classes for del Pezzo lattices, otherwise the orbit closure of
/// the basis vectors.
fn permutation_domain(l: &AnyLattice, gens: &[Isometry]) -> Result<Vec<LatticeVector>> {
    let seeds: Vec<LatticeVector> = match l {
        AnyLattice::DelPezzo(dp) => exceptional_classes(dp).classes,
        AnyLattice::ConicBundle(_) => (0..l.rank()).map(|i| LatticeVector::basis(l.rank(), i)).collect(),
    };
    let mut index: FxHashMap<LatticeVector, usize> = FxHashMap::default();
    let mut domain = Vec::new();
    for s in seeds {
        if index.insert(s.clone(), domain.len()).is_none() {
            domain.push(s);
        }
    }
    let mut k = 0;
    while k < domain.len() {
        for g in gens {
            let w = g.apply(&domain[k])?;
            if !index.contains_key(&w) {
                index.insert(w.clone(), domain.len());
                domain.push(w);
                if domain.len() > 100_000 {
                    return Err(Error::Inconsistent("orbit of basis vectors is not finite".into()));
                }
            }
        }
        k += 1;
    }
    let span = IntMatrix::from_rows(&domain.iter().map(|v| v.0.clone()).collect::<Vec<_>>())?;
    if rank(&span)? != l.rank() {
        return Err(Error::Inconsistent("permutation domain does not span".into()));
    }
    Ok(domain)
}

fn permutations_on(domain: &[LatticeVector], gens: &[Isometry]) -> Result<Vec<Perm>> {
    let index: FxHashMap<&LatticeVector, u32> =
        domain.iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
    gens.iter()
        .map(|g| {
            domain
                .iter()
                .map(|v| {
                    let w = g.apply(v)?;
                    index.get(&w).copied().ok_or(Error::NotClosed)
                })
                .collect()
        })
        .collect()
}

/// Order of the group generated by `gens`, by a stabilizer chain on a
/// faithful permutation action. Never enumerates the group.
pub fn group_order_orbit_stabilizer(l: &AnyLattice, gens: &[Isometry]) -> Result<u64> {
    for g in gens {
        Isometry::new(l, g.matrix().clone())?;
    }
    let domain = permutation_domain(l, gens)?;
    let perms = permutations_on(&domain, gens)?;
    let chain = StabilizerChain::new(domain.len(), &perms);
    u64::try_from(chain.order()).map_err(|_| Error::Overflow("group order"))
}

/// Membership test in the group generated by `gens`, without enumeration.
pub fn generated_group_contains(l: &AnyLattice, gens: &[Isometry], x: &Isometry) -> Result<bool> {
    let domain = permutation_domain(l, gens)?;
    let perms = permutations_on(&domain, gens)?;
    let chain = StabilizerChain::new(domain.len(), &perms);
    let Ok(px) = permutations_on(&domain, std::slice::from_ref(x)) else {
        return Ok(false);
    };
    Ok(chain.contains(&px[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, pts: &[u32]) -> Perm {
        let mut p: Perm = (0..n as u32).collect();
        for w in 0..pts.len() {
            p[pts[w] as usize] = pts[(w + 1) % pts.len()];
        }
        p
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        let s5 = StabilizerChain::new(5, &[cycle(5, &[0, 1]), cycle(5, &[0, 1, 2, 3, 4])]);
        assert_eq!(s5.order(), 120);
        let a5 = StabilizerChain::new(5, &[cycle(5, &[0, 1, 2]), cycle(5, &[0, 1, 2, 3, 4])]);
        assert_eq!(a5.order(), 60);
        assert!(!a5.contains(&cycle(5, &[0, 1])));
        assert!(a5.contains(&cycle(5, &[2, 3, 4])));
    }

    #[test]
    fn trivial_chain() {
        let c = StabilizerChain::new(4, &[]);
        assert_eq!(c.order(), 1);
    }

    #[test]
    fn dihedral_order() {
        // symmetries of a hexagon
        let r = cycle(6, &[0, 1, 2, 3, 4, 5]);
        let s: Perm = vec![0, 5, 4, 3, 2, 1];
        assert_eq!(StabilizerChain::new(6, &[r, s]).order(), 12);
    }
}
