use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use super::isometry::{unimodular_inverse, Isometry};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;
use crate::picard::{AnyLattice, Lattice};

/// Default cap on the number of elements stored by [`generate`].
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;

/// A finite group of lattice isometries. Elements, when enumerated, are kept
/// sorted by their flattened matrix so every listing is canonical.
#[derive(Clone)]
pub struct MatrixGroup {
    lattice: Arc<AnyLattice>,
    generators: Vec<Isometry>,
    elements: Option<Arc<Vec<Isometry>>>,
    index: Option<Arc<FxHashMap<Isometry, u32>>>,
    order: u64,
    gram_inverse: Arc<IntMatrix>,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("lattice", &self.lattice.id())
            .field("order", &self.order)
            .field("generators", &self.generators.len())
            .field("enumerated", &self.elements.is_some())
            .finish()
    }
}

/// Breadth-first closure of `gens`. Fails once more than `cap` elements
/// have been found.
pub fn generate(
    lattice: impl Into<Arc<AnyLattice>>,
    gens: Vec<Isometry>,
    cap: usize,
) -> Result<MatrixGroup> {
    let lattice = lattice.into();
    let mut checked = Vec::with_capacity(gens.len());
    for g in gens {
        checked.push(Isometry::new(lattice.as_ref(), g.matrix().clone())?);
    }
    let n = lattice.rank();
    let mut distinct: Vec<Isometry> = Vec::new();
    for g in &checked {
        if !g.is_identity() && !distinct.contains(g) {
            distinct.push(g.clone());
        }
    }

    let id = Isometry::identity(n);
    let mut seen: FxHashSet<Isometry> = FxHashSet::default();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let products: Vec<Vec<Isometry>> = frontier
            .par_iter()
            .map(|x| distinct.iter().map(|g| x.compose(g)).collect())
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for p in products.into_iter().flatten() {
            if !seen.contains(&p) {
                seen.insert(p.clone());
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    let mut elements: Vec<Isometry> = seen.into_iter().collect();
    elements.par_sort_unstable();
    MatrixGroup::from_sorted(lattice, checked, elements)
}

impl MatrixGroup {
    fn from_sorted(
        lattice: Arc<AnyLattice>,
        generators: Vec<Isometry>,
        elements: Vec<Isometry>,
    ) -> Result<Self> {
        let gram_inverse = Arc::new(unimodular_inverse(lattice.gram())?);
        let index: FxHashMap<Isometry, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i as u32))
            .collect();
        Ok(MatrixGroup {
            lattice,
            generators,
            order: elements.len() as u64,
            elements: Some(Arc::new(elements)),
            index: Some(Arc::new(index)),
            gram_inverse,
        })
    }

    /// A group known only by generators and order (no element list).
    pub fn unenumerated(
        lattice: impl Into<Arc<AnyLattice>>,
        generators: Vec<Isometry>,
        order: u64,
    ) -> Result<Self> {
        let lattice = lattice.into();
        let gram_inverse = Arc::new(unimodular_inverse(lattice.gram())?);
        Ok(MatrixGroup {
            lattice,
            generators,
            elements: None,
            index: None,
            order,
            gram_inverse,
        })
    }

    /// The trivial group on a lattice.
    pub fn trivial(lattice: impl Into<Arc<AnyLattice>>) -> Result<Self> {
        let lattice = lattice.into();
        let id = Isometry::identity(lattice.rank());
        Self::from_sorted(lattice, Vec::new(), vec![id])
    }

    /// Subgroup made of the given elements (which must form a group),
    /// with a greedily chosen generating set.
    pub fn subgroup_from_elements(&self, mut elements: Vec<Isometry>) -> Result<MatrixGroup> {
        elements.sort_unstable();
        elements.dedup();
        let gens = greedy_generators(&elements)?;
        let sub = Self::from_sorted(self.lattice.clone(), gens, elements)?;
        sub.verify_closure()?;
        Ok(sub)
    }

    pub fn subgroup_from_indices(&self, indices: &[usize]) -> Result<MatrixGroup> {
        let els = self.elements()?;
        self.subgroup_from_elements(indices.iter().map(|&i| els[i].clone()).collect())
    }

    pub(crate) fn with_generators(mut self, generators: Vec<Isometry>) -> Self {
        self.generators = generators;
        self
    }

    pub fn lattice(&self) -> &Arc<AnyLattice> {
        &self.lattice
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn elements(&self) -> Result<&[Isometry]> {
        self.elements
            .as_deref()
            .map(Vec::as_slice)
            .ok_or(Error::NotEnumerated)
    }

    pub fn index_of(&self, x: &Isometry) -> Option<usize> {
        self.index.as_ref()?.get(x).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &Isometry) -> bool {
        self.index_of(x).is_some()
    }

    pub fn identity(&self) -> Isometry {
        Isometry::identity(self.lattice.rank())
    }

    pub fn inverse(&self, x: &Isometry) -> Result<Isometry> {
        x.inverse_with(self.lattice.gram(), &self.gram_inverse)
    }

    /// `y x y^{-1}`
    pub fn conjugate(&self, x: &Isometry, y: &Isometry) -> Result<Isometry> {
        y.compose(x)?.compose(&self.inverse(y)?)
    }

    /// Checks every element preserves the form and fixes `K`, the identity is
    /// present, and the set is closed under inverses and under right
    /// multiplication by every generator (hence under multiplication).
    pub fn verify_closure(&self) -> Result<()> {
        let els = self.elements()?;
        if !self.contains(&self.identity()) {
            return Err(Error::Inconsistent("identity missing".into()));
        }
        els.par_iter().try_for_each(|x| {
            Isometry::new(self.lattice.as_ref(), x.matrix().clone())?;
            if !self.contains(&self.inverse(x)?) {
                return Err(Error::Inconsistent("inverse missing".into()));
            }
            for g in &self.generators {
                if !self.contains(&x.compose(g)?) {
                    return Err(Error::Inconsistent("not closed under products".into()));
                }
            }
            Ok(())
        })
    }

    /// Multiset of element orders, as order -> count.
    pub fn element_orders(&self) -> Result<BTreeMap<u64, usize>> {
        let orders: Vec<u64> = self
            .elements()?
            .par_iter()
            .map(Isometry::order)
            .collect::<Result<_>>()?;
        let mut out = BTreeMap::new();
        for o in orders {
            *out.entry(o).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn centralizer(&self, x: &Isometry) -> Result<MatrixGroup> {
        let commuting: Vec<Isometry> = self
            .elements()?
            .par_iter()
            .filter_map(|y| match (x.compose(y), y.compose(x)) {
                (Ok(a), Ok(b)) => (a == b).then(|| Ok(y.clone())),
                (Err(e), _) | (_, Err(e)) => Some(Err(e)),
            })
            .collect::<Result<_>>()?;
        self.subgroup_from_elements(commuting)
    }

    /// Whether some element of the group conjugates `a` to `b`.
    pub fn conjugacy_test(&self, a: &Isometry, b: &Isometry) -> Result<bool> {
        let hits = self
            .elements()?
            .par_iter()
            .map(|y| Ok(self.conjugate(a, y)? == *b))
            .collect::<Result<Vec<bool>>>()?;
        Ok(hits.into_iter().any(|h| h))
    }

    /// Conjugacy classes as sorted index lists, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Result<Vec<Vec<usize>>> {
        let els = self.elements()?;
        let gens: Vec<(Isometry, Isometry)> = self
            .generators
            .iter()
            .map(|g| Ok((g.clone(), self.inverse(g)?)))
            .collect::<Result<_>>()?;
        let mut class_of = vec![usize::MAX; els.len()];
        let mut classes = Vec::new();
        for start in 0..els.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            class_of[start] = c;
            let mut members = vec![start];
            let mut k = 0;
            while k < members.len() {
                let x = &els[members[k]];
                for (g, gi) in &gens {
                    let y = g.compose(x)?.compose(gi)?;
                    let j = self
                        .index_of(&y)
                        .ok_or_else(|| Error::Inconsistent("conjugate escaped group".into()))?;
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        Ok(classes)
    }

    /// All normal subgroups of the given order, found as unions of conjugacy
    /// classes that contain the identity and are closed under products.
    pub fn normal_subgroups(&self, order: usize) -> Result<Vec<MatrixGroup>> {
        let els = self.elements()?;
        let id_idx = self.index_of(&self.identity()).expect("identity present");
        let classes: Vec<Vec<usize>> = self
            .conjugacy_classes()?
            .into_iter()
            .filter(|c| c[0] != id_idx && c.len() < order)
            .collect();
        let mut found = Vec::new();
        let mut chosen = Vec::new();
        self.class_unions(&classes, 0, order - 1, &mut chosen, &mut |sel| {
            let mut members = vec![id_idx];
            for &c in sel {
                members.extend_from_slice(&classes[c]);
            }
            let set: FxHashSet<usize> = members.iter().copied().collect();
            for &a in &members {
                for &b in &members {
                    let p = els[a].compose(&els[b])?;
                    match self.index_of(&p) {
                        Some(i) if set.contains(&i) => {}
                        _ => return Ok(()),
                    }
                }
            }
            members.sort_unstable();
            found.push(members);
            Ok(())
        })?;
        found
            .into_iter()
            .map(|m| self.subgroup_from_indices(&m))
            .collect()
    }

    fn class_unions(
        &self,
        classes: &[Vec<usize>],
        from: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if remaining == 0 {
            return visit(chosen);
        }
        for c in from..classes.len() {
            if classes[c].len() <= remaining {
                chosen.push(c);
                self.class_unions(classes, c + 1, remaining - classes[c].len(), chosen, visit)?;
                chosen.pop();
            }
        }
        Ok(())
    }

    /// Orbit of a vector, in discovery order.
    pub fn orbit_of(&self, v: &crate::picard::LatticeVector) -> Result<Vec<crate::picard::LatticeVector>> {
        let mut seen = FxHashSet::default();
        seen.insert(v.clone());
        let mut out = vec![v.clone()];
        let mut k = 0;
        while k < out.len() {
            for g in &self.generators {
                let w = g.apply(&out[k])?;
                if seen.insert(w.clone()) {
                    out.push(w);
                }
            }
            k += 1;
        }
        Ok(out)
    }

    pub(crate) fn lattice_id(&self) -> String {
        self.lattice.id()
    }
}

/// Greedy generating set: scan the sorted elements and keep each one not yet
/// in the closure of those kept so far.
pub(crate) fn greedy_generators(elements: &[Isometry]) -> Result<Vec<Isometry>> {
    let Some(first) = elements.first() else {
        return Ok(Vec::new());
    };
    let n = first.rank();
    let mut gens: Vec<Isometry> = Vec::new();
    let mut closure: FxHashSet<Isometry> = FxHashSet::default();
    closure.insert(Isometry::identity(n));
    for x in elements {
        if closure.contains(x) {
            continue;
        }
        gens.push(x.clone());
        let mut frontier: Vec<Isometry> = closure.iter().cloned().collect();
        while let Some(y) = frontier.pop() {
            for g in &gens {
                let z = y.compose(g)?;
                if closure.insert(z.clone()) {
                    frontier.push(z);
                }
            }
        }
        if closure.len() > elements.len() {
            return Err(Error::Inconsistent("element set is not a group".into()));
        }
    }
    Ok(gens)
}

/// Serializable summary of a group.
#[derive(Debug, Clone, Serialize)]
pub struct GroupDump {
    pub schema: &'static str,
    pub lattice: String,
    pub order: u64,
    pub generators: Vec<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<Vec<i64>>>>,
}

impl MatrixGroup {
    pub fn dump(&self, with_elements: bool) -> GroupDump {
        GroupDump {
            schema: "1",
            lattice: self.lattice_id(),
            order: self.order,
            generators: self
                .generators
                .iter()
                .map(|g| g.matrix().to_rows())
                .collect(),
            elements: if with_elements {
                self.elements
                    .as_ref()
                    .map(|els| els.iter().map(|g| g.matrix().to_rows()).collect())
            } else {
                None
            },
        }
    }
}
