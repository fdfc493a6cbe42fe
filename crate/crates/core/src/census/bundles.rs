use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::{meta, CensusEntry};
use crate::cohomology::{h1, h1_over_subgroups};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;
use crate::gaction::invariant_rank;
use crate::picard::{conic_bundle, second_section, AnyLattice, ConicBundleLattice, Lattice};
use crate::weyl::{generate, subgroups_up_to, Isometry, MatrixGroup};

/// How a fiber-preserving isometry moves the degenerate fibers: fiber `i`
/// goes to `perm[i-1]`, with its components exchanged when `i` is in `swaps`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberAction {
    pub perm: Vec<usize>,
    pub swaps: Vec<usize>,
}

fn check_fiber_data(m: usize, perm: &[usize], swaps: &[usize]) -> Result<()> {
    let mut seen = vec![false; m + 1];
    if perm.len() != m {
        return Err(Error::InvalidParameter(format!(
            "permutation has length {}, expected {m}",
            perm.len()
        )));
    }
    for &p in perm {
        if p == 0 || p > m || seen[p] {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of 1..={m}")));
        }
        seen[p] = true;
    }
    let set: BTreeSet<usize> = swaps.iter().copied().collect();
    if set.len() != swaps.len() || swaps.iter().any(|&i| i == 0 || i > m) {
        return Err(Error::InvalidParameter(format!("bad fiber index set {swaps:?}")));
    }
    Ok(())
}

/// The isometry `e_i -> e_{perm(i)}` (or `f - e_{perm(i)}` for `i` in
/// `swaps`), `f -> f`, `s -> s + (|swaps|/2) f - sum_{i in swaps} e_{perm(i)}`.
/// No isometry fixing `f` and `K` swaps an odd number of fibers.
pub fn cb_swap_isometry(l: &ConicBundleLattice, perm: &[usize], swaps: &[usize]) -> Result<Isometry> {
    let m = l.fiber_count;
    check_fiber_data(m, perm, swaps)?;
    if swaps.len() % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "an odd number of component swaps ({}) is not realized by any isometry",
            swaps.len()
        )));
    }
    let n = l.rank();
    let mut mat = IntMatrix::zeros(n, n);
    mat.set(0, 0, 1);
    mat.set(1, 1, 1);
    mat.set(0, 1, swaps.len() as i64 / 2);
    for i in 1..=m {
        let j = perm[i - 1];
        if swaps.contains(&i) {
            mat.set(0, i + 1, 1);
            mat.set(j + 1, i + 1, -1);
            mat.set(j + 1, 1, -1);
        } else {
            mat.set(j + 1, i + 1, 1);
        }
    }
    Isometry::new(l, mat)
}

/// Reads back the fiber permutation and swap set of an isometry that fixes
/// the fiber class.
pub fn fiber_action(l: &ConicBundleLattice, x: &Isometry) -> Result<FiberAction> {
    let f = l.fiber();
    if x.apply(&f)? != f {
        return Err(Error::InvalidParameter("isometry does not fix the fiber class".into()));
    }
    let m = l.fiber_count;
    let mut perm = Vec::with_capacity(m);
    let mut swaps = Vec::new();
    for i in 1..=m {
        let img = x.apply(&l.e(i))?;
        let j = (1..=m).find(|&j| img == l.e(j) || img == f.sub(&l.e(j)));
        let Some(j) = j else {
            return Err(Error::InvalidParameter(format!(
                "component e_{i} is not sent to a fiber component"
            )));
        };
        if img != l.e(j) {
            swaps.push(i);
        }
        perm.push(j);
    }
    Ok(FiberAction { perm, swaps })
}

/// Fibers mapped to themselves with their two components exchanged.
pub fn switched_fibers(a: &FiberAction) -> Vec<usize> {
    a.swaps
        .iter()
        .copied()
        .filter(|&i| a.perm[i - 1] == i)
        .collect()
}

/// Outcome of the exhaustive swap-parity scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub max_m: usize,
    pub cases: usize,
    pub odd_cases: usize,
    /// odd swap sets that nevertheless admit an isometry
    pub odd_realized: usize,
    /// even swap sets whose isometry failed validation
    pub even_failures: usize,
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=m).collect();
    permute(&mut cur, 0, &mut out);
    out.sort();
    out
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// For every `m <= max_m`, `e <= max_e`, fiber permutation and swap subset:
/// the images of `f` and the `e_i` are forced, and `M K = K` pins down the
/// image of `s` as `(sum e_i' - (2+e) f - K) / 2`. Records whether that
/// vector is integral and whether the resulting matrix is an isometry.
pub fn parity_exhaustive(max_m: usize, max_e: i64) -> Result<ParityReport> {
    let mut rep = ParityReport {
        max_m,
        cases: 0,
        odd_cases: 0,
        odd_realized: 0,
        even_failures: 0,
    };
    for m in 0..=max_m {
        for e in 0..=max_e {
            let l = conic_bundle(m as i64, e)?;
            let n = l.rank();
            for perm in permutations(m) {
                for mask in 0u32..(1 << m) {
                    let swaps: Vec<usize> = (1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                    rep.cases += 1;
                    let odd = swaps.len() % 2 == 1;
                    if odd {
                        rep.odd_cases += 1;
                    }
                    let mut mat = IntMatrix::zeros(n, n);
                    mat.set(0, 0, 1);
                    let mut twice_s = vec![0i64; n];
                    for i in 1..=m {
                        let j = perm[i - 1];
                        if swaps.contains(&i) {
                            mat.set(0, i + 1, 1);
                            mat.set(j + 1, i + 1, -1);
                            twice_s[0] += 1;
                            twice_s[j + 1] -= 1;
                        } else {
                            mat.set(j + 1, i + 1, 1);
                            twice_s[j + 1] += 1;
                        }
                    }
                    twice_s[0] -= 2 + e;
                    for (t, k) in twice_s.iter_mut().zip(l.canonical().coords()) {
                        *t -= k;
                    }
                    let integral = twice_s.iter().all(|t| t % 2 == 0);
                    let realized = integral && {
                        for (r, t) in twice_s.iter().enumerate() {
                            mat.set(r, 1, t / 2);
                        }
                        Isometry::new(&l, mat.clone()).is_ok()
                    };
                    if odd && realized {
                        rep.odd_realized += 1;
                    }
                    if !odd {
                        let ok = realized
                            && cb_swap_isometry(&l, &perm, &swaps)?.matrix() == &mat;
                        if !ok {
                            rep.even_failures += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

fn cb_lattice(m: usize, e: i64) -> Result<(ConicBundleLattice, Arc<AnyLattice>)> {
    let l = conic_bundle(m as i64, e)?;
    let any = Arc::new(AnyLattice::from(l.clone()));
    Ok((l, any))
}

fn even_subsets(m: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << m))
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(|mask| (1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
struct Schedule {
    r_swaps: Vec<usize>,
    s_swaps: Vec<usize>,
}

/// Binary dihedral group of order `4n` on a conic bundle with `n + 2`
/// degenerate fibers: `r` rotates fibers `1..n`, `s` reverses them and
/// exchanges the two special fibers, and `r^n = s^2` is the involution
/// switching the components of the special fibers. Every swap schedule
/// meeting the constraints is recorded; the first is used.
pub fn binary_dihedral_bundle(n: usize) -> Result<CensusEntry> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!("n must be odd and at least 3, got {n}")));
    }
    let m = n + 2;
    let (l, lattice) = cb_lattice(m, 1)?;
    let mut perm_r: Vec<usize> = (1..=m).collect();
    let mut perm_s: Vec<usize> = (1..=m).collect();
    for i in 1..=n {
        perm_r[i - 1] = i % n + 1;
        perm_s[i - 1] = (n - (i - 1)) % n + 1;
    }
    perm_s[n] = n + 2;
    perm_s[n + 1] = n + 1;
    let tau = cb_swap_isometry(&l, &(1..=m).collect::<Vec<_>>(), &[n + 1, n + 2])?;

    let subsets = even_subsets(m);
    let mut rs = Vec::new();
    let mut ss = Vec::new();
    for sw in &subsets {
        let r = cb_swap_isometry(&l, &perm_r, sw)?;
        if r.pow(n as u64)? == tau {
            rs.push((sw.clone(), r));
        }
        let s = cb_swap_isometry(&l, &perm_s, sw)?;
        if s.pow(2)? == tau {
            ss.push((sw.clone(), s));
        }
    }
    let mut valid: Vec<(Schedule, MatrixGroup)> = Vec::new();
    for (rsw, r) in &rs {
        for (ssw, s) in &ss {
            let Ok(g) = generate(lattice.clone(), vec![r.clone(), s.clone()], 4 * n) else {
                continue;
            };
            if g.order() as usize != 4 * n {
                continue;
            }
            let involutions: Vec<&Isometry> = g
                .elements()?
                .iter()
                .filter(|x| !x.is_identity() && x.compose(x).map(|y| y.is_identity()).unwrap_or(false))
                .collect();
            if involutions.len() == 1 && *involutions[0] == tau {
                valid.push((
                    Schedule {
                        r_swaps: rsw.clone(),
                        s_swaps: ssw.clone(),
                    },
                    g,
                ));
            }
        }
    }
    valid.sort_by(|a, b| a.0.cmp(&b.0));
    let Some((first, group)) = valid.first().cloned() else {
        return Err(Error::SearchFailed(format!(
            "no swap schedule realizes the binary dihedral group for n = {n}"
        )));
    };
    let mut metadata = BTreeMap::new();
    meta(&mut metadata, "n", n);
    meta(&mut metadata, "m", m);
    meta(&mut metadata, "e", 1);
    meta(&mut metadata, "canonical_square", 8 - m as i64);
    meta(&mut metadata, "chosen_schedule", &first);
    meta(
        &mut metadata,
        "valid_schedules",
        valid.iter().map(|(s, _)| s).collect::<Vec<_>>(),
    );
    meta(&mut metadata, "central_switched_fibers", [n + 1, n + 2]);
    Ok(CensusEntry {
        id: format!("binary-dihedral-{n}"),
        lattice,
        group,
        provenance: vec![
            format!("binary dihedral group of order {} on a conic bundle with {m} degenerate fibers", 4 * n),
            "central involution switching the components of two fibers".into(),
        ],
        metadata,
    })
}

/// Perm images of a group's elements, as a set.
fn perm_image(l: &ConicBundleLattice, g: &MatrixGroup) -> Result<BTreeSet<Vec<usize>>> {
    g.elements()?
        .iter()
        .map(|x| Ok(fiber_action(l, x)?.perm))
        .collect()
}

/// Four distinct commuting involutions (with the identity) on the fibers.
fn is_klein(image: &BTreeSet<Vec<usize>>) -> bool {
    let involutive = |p: &Vec<usize>| p.iter().enumerate().all(|(i, &j)| p[j - 1] == i + 1);
    let compose = |p: &Vec<usize>, q: &Vec<usize>| -> Vec<usize> { p.iter().map(|&j| q[j - 1]).collect() };
    image.len() == 4
        && image.iter().all(involutive)
        && image
            .iter()
            .all(|p| image.iter().all(|q| compose(p, q) == compose(q, p)))
}

fn is_abelian(g: &MatrixGroup) -> Result<bool> {
    let gens = g.generators();
    for a in gens {
        for b in gens {
            if a.compose(b)? != b.compose(a)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn conjugacy_class_count(parent: &MatrixGroup, subs: &[MatrixGroup]) -> Result<usize> {
    let mut canon: BTreeSet<Vec<Isometry>> = BTreeSet::new();
    for h in subs {
        let mut best: Option<Vec<Isometry>> = None;
        for y in parent.elements()? {
            let mut c: Vec<Isometry> = h
                .elements()?
                .iter()
                .map(|x| parent.conjugate(x, y))
                .collect::<Result<_>>()?;
            c.sort();
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
        canon.insert(best.unwrap());
    }
    Ok(canon.len())
}

fn max_switched(l: &ConicBundleLattice, g: &MatrixGroup) -> Result<usize> {
    let mut best = 0;
    for x in g.elements()? {
        best = best.max(switched_fibers(&fiber_action(l, x)?).len());
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
struct CandidateSummary {
    count: usize,
    h1_trivial: usize,
    max_switched_fibers: usize,
}

/// The isometries of the (m = 4, e = 2) conic bundle lattice fixing `f`
/// and `K`: all fiber permutations with even swap sets, order 192.
pub fn iskovskikh_ambient() -> Result<MatrixGroup> {
    let (l, lattice) = cb_lattice(4, 2)?;
    let full = generate(
        lattice,
        vec![
            cb_swap_isometry(&l, &[2, 1, 3, 4], &[])?,
            cb_swap_isometry(&l, &[2, 3, 4, 1], &[])?,
            cb_swap_isometry(&l, &[1, 2, 3, 4], &[1, 2])?,
        ],
        1000,
    )?;
    if full.order() != 192 {
        return Err(Error::Inconsistent(format!(
            "fiber-preserving group has order {}, expected 192",
            full.order()
        )));
    }
    Ok(full)
}

/// The Z/4 + Z/2 action on the conic bundle with four degenerate fibers and
/// two disjoint (-2)-sections, as it acts on the lattice.
///
/// The fiberwise involution fixes every fiber component and both sections,
/// so the lattice sees only the Klein four image on the base. The returned
/// group is a Klein four subgroup with that base image, sections in one
/// orbit, invariant rank 2, and no element switching more than two fibers.
/// Its `H^1` is not filtered on; the metadata records it together with a
/// scan over every subgroup of the ambient group.
pub fn iskovskikh_bundle() -> Result<CensusEntry> {
    let full = iskovskikh_ambient()?;
    let lattice = full.lattice().clone();
    let l = lattice
        .as_conic_bundle()
        .ok_or_else(|| Error::Inconsistent("expected a conic bundle lattice".into()))?
        .clone();
    let s = l.section();
    let c2 = second_section(&l)?;
    let sections: BTreeSet<_> = [s.clone(), c2.clone()].into_iter().collect();
    let shape = |h: &MatrixGroup| -> Result<bool> {
        if !is_klein(&perm_image(&l, h)?) || invariant_rank(h)? != 2 {
            return Ok(false);
        }
        let orbit: BTreeSet<_> = h.orbit_of(&s)?.into_iter().collect();
        Ok(orbit == sections)
    };

    let subs = subgroups_up_to(&full, full.order() as usize)?;
    let trivial: Vec<bool> = subs
        .iter()
        .map(|h| Ok(h1_over_subgroups(h)?.0))
        .collect::<Result<_>>()?;
    let mut images = Vec::new();
    let mut faithful = Vec::new();
    let mut rank2_trivial_orders = BTreeSet::new();
    for (h, &ok) in subs.iter().zip(&trivial) {
        if ok && invariant_rank(h)? == 2 {
            rank2_trivial_orders.insert(h.order());
        }
        match h.order() {
            4 if h.element_orders()?.keys().all(|&o| o <= 2)
                && shape(h)?
                && max_switched(&l, h)? <= 2 =>
            {
                images.push((h.clone(), ok))
            }
            8 if h.element_orders()? == BTreeMap::from([(1, 1), (2, 3), (4, 4)])
                && is_abelian(h)?
                && shape(h)? =>
            {
                faithful.push((h.clone(), ok))
            }
            _ => {}
        }
    }
    let Some((group, _)) = images.first().cloned() else {
        return Err(Error::SearchFailed(
            "no Klein four image with sections in one orbit and invariant rank 2".into(),
        ));
    };
    let mut faithful_switch = 0;
    for (h, _) in &faithful {
        faithful_switch = faithful_switch.max(max_switched(&l, h)?);
    }
    let image_groups: Vec<MatrixGroup> = images.iter().map(|(h, _)| h.clone()).collect();

    let mut metadata = BTreeMap::new();
    meta(&mut metadata, "abstract_group", "Z/4+Z/2");
    meta(&mut metadata, "lattice_kernel_order", 2);
    meta(&mut metadata, "h1", h1(&group)?.to_string());
    meta(&mut metadata, "h1_trivial_all_subgroups", h1_over_subgroups(&group)?.0);
    meta(
        &mut metadata,
        "image_candidates",
        CandidateSummary {
            count: images.len(),
            h1_trivial: images.iter().filter(|(_, ok)| *ok).count(),
            max_switched_fibers: max_switched(&l, &group)?,
        },
    );
    meta(
        &mut metadata,
        "image_conjugacy_classes",
        conjugacy_class_count(&full, &image_groups)?,
    );
    meta(
        &mut metadata,
        "faithful_order8_candidates",
        CandidateSummary {
            count: faithful.len(),
            h1_trivial: faithful.iter().filter(|(_, ok)| *ok).count(),
            max_switched_fibers: faithful_switch,
        },
    );
    meta(&mut metadata, "ambient_subgroups", subs.len());
    meta(&mut metadata, "rank2_h1_trivial_subgroup_orders", &rank2_trivial_orders);
    meta(&mut metadata, "section_squares", [l.square(&s)?, l.square(&c2)?]);
    Ok(CensusEntry {
        id: "iskovskikh".into(),
        lattice,
        group,
        provenance: vec![
            "Z/4+Z/2 on a conic bundle with four degenerate fibers and two (-2)-sections".into(),
            "base image Z/2+Z/2, fiberwise Z/2 trivial on the lattice".into(),
        ],
        metadata,
    })
}

type Vec3 = [i64; 3];

fn rotate(m: &[Vec3; 3], v: &Vec3) -> Vec3 {
    let mut out = [0; 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

fn mat3_mul(a: &[Vec3; 3], b: &[Vec3; 3]) -> [Vec3; 3] {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Rotations of the cube, as signed permutation matrices of determinant 1.
fn octahedral_rotations() -> Vec<[Vec3; 3]> {
    let quarter = [[0, -1, 0], [1, 0, 0], [0, 0, 1]];
    let cycle = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
    let id = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut out = vec![id];
    let mut k = 0;
    while k < out.len() {
        for g in [&quarter, &cycle] {
            let p = mat3_mul(&out[k], g);
            if !out.contains(&p) {
                out.push(p);
            }
        }
        k += 1;
    }
    out.sort();
    out
}

/// Sign of the coordinate permutation underlying a signed permutation matrix.
fn underlying_sign(m: &[Vec3; 3]) -> i64 {
    let p: Vec<usize> = (0..3).map(|j| (0..3).find(|&i| m[i][j] != 0).unwrap()).collect();
    let mut sign = 1;
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Binary forms as `(a, b) -> coefficient` of `y1^a y2^b`.
type BinaryForm = BTreeMap<(u32, u32), i64>;

fn form_mul(p: &BinaryForm, q: &BinaryForm) -> BinaryForm {
    let mut out = BinaryForm::new();
    for (&(a, b), &c) in p {
        for (&(x, y), &d) in q {
            *out.entry((a + x, b + y)).or_insert(0) += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Degree of a homogeneous form; `None` if it is not homogeneous.
fn form_degree(p: &BinaryForm) -> Option<u32> {
    let degs: BTreeSet<u32> = p.keys().map(|(a, b)| a + b).collect();
    (degs.len() == 1).then(|| *degs.iter().next().unwrap())
}

fn form_string(p: &BinaryForm) -> String {
    let mut terms = Vec::new();
    for (&(a, b), &c) in p.iter().rev() {
        let mono = |v: &str, k: u32| match k {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{k}"),
        };
        let body: Vec<String> = [mono("y1", a), mono("y2", b)].into_iter().filter(|s| !s.is_empty()).collect();
        let coef = match c {
            1 => String::new(),
            -1 => "-".into(),
            _ => format!("{c}*"),
        };
        terms.push(format!("{coef}{}", body.join("*")));
    }
    terms.join(" + ").replace("+ -", "- ")
}

fn psi6() -> BinaryForm {
    BinaryForm::from([((5, 1), 1), ((1, 5), -1)])
}

fn psi12() -> BinaryForm {
    BinaryForm::from([((12, 0), 1), ((8, 4), -33), ((4, 8), -33), ((0, 12), 1)])
}

/// The octahedral group acting on a conic bundle with `2g + 2` degenerate
/// fibers over the zeros of its semi-invariant (`g` in {2, 5, 8}); odd
/// elements exchange the two `-(g+1)`-sections.
pub fn s4_bundle(g: usize) -> Result<CensusEntry> {
    let (psi, points): (BinaryForm, Vec<Vec3>) = {
        let vertices: Vec<Vec3> = (0..3)
            .flat_map(|i| {
                [1, -1].map(|s| {
                    let mut v = [0; 3];
                    v[i] = s;
                    v
                })
            })
            .collect();
        let mut edges: Vec<Vec3> = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = [0; 3];
                    v[i] = a;
                    v[j] = b;
                    edges.push(v);
                }
            }
        }
        match g {
            2 => (psi6(), vertices),
            5 => (psi12(), edges),
            8 => (form_mul(&psi6(), &psi12()), [vertices, edges].concat()),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "octahedral bundle is defined for g in {{2, 5, 8}}, got {g}"
                )))
            }
        }
    };
    let m = 2 * g + 2;
    if points.len() != m {
        return Err(Error::Inconsistent("point count differs from 2g+2".into()));
    }
    let (l, lattice) = cb_lattice(m, g as i64 + 1)?;
    let all: Vec<usize> = (1..=m).collect();
    let lift = |rot: &[Vec3; 3]| -> Result<Isometry> {
        let perm: Vec<usize> = points
            .iter()
            .map(|p| {
                let q = rotate(rot, p);
                points.iter().position(|x| *x == q).map(|i| i + 1)
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Inconsistent("rotation does not preserve the points".into()))?;
        let swaps: &[usize] = if underlying_sign(rot) < 0 { &all } else { &[] };
        cb_swap_isometry(&l, &perm, swaps)
    };
    let rotations = octahedral_rotations();
    let quarter = [[0, -1, 0], [1, 0, 0], [0, 0, 1]];
    let cycle = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
    let group = generate(lattice.clone(), vec![lift(&quarter)?, lift(&cycle)?], 100)?;
    for r in &rotations {
        if !group.contains(&lift(r)?) {
            return Err(Error::Inconsistent("lift is not a homomorphism".into()));
        }
    }
    let degree = form_degree(&psi);
    let mut metadata = BTreeMap::new();
    meta(&mut metadata, "g", g);
    meta(&mut metadata, "m", m);
    meta(&mut metadata, "semi_invariant", form_string(&psi));
    meta(&mut metadata, "semi_invariant_degree", degree);
    meta(&mut metadata, "psi6", form_string(&psi6()));
    meta(&mut metadata, "psi12", form_string(&psi12()));
    meta(&mut metadata, "special_orbit_sizes", [12, 8, 6]);
    meta(&mut metadata, "rotation_count", rotations.len());
    let h = h1(&group)?;
    meta(&mut metadata, "h1_whole_group", h.to_string());
    Ok(CensusEntry {
        id: format!("s4-bundle-g{g}"),
        lattice,
        group,
        provenance: vec![
            format!("octahedral group on an exceptional conic bundle with {m} degenerate fibers"),
            "odd elements exchange the two sections".into(),
        ],
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_pair_swap() {
        let l = conic_bundle(4, 2).unwrap();
        let id = cb_swap_isometry(&l, &[1, 2, 3, 4], &[]).unwrap();
        assert!(id.is_identity());
        let x = cb_swap_isometry(&l, &[1, 2, 3, 4], &[1, 2]).unwrap();
        let s = l.section();
        let expect = s.add(&l.fiber()).sub(&l.e(1)).sub(&l.e(2));
        assert_eq!(x.apply(&s).unwrap(), expect);
        assert!(cb_swap_isometry(&l, &[2, 1, 3, 4], &[1]).is_err());
        assert!(cb_swap_isometry(&l, &[1, 1, 3, 4], &[]).is_err());
    }

    #[test]
    fn fiber_action_round_trip() {
        let l = conic_bundle(4, 1).unwrap();
        let x = cb_swap_isometry(&l, &[3, 1, 2, 4], &[2, 4]).unwrap();
        let a = fiber_action(&l, &x).unwrap();
        assert_eq!(a.perm, vec![3, 1, 2, 4]);
        assert_eq!(a.swaps, vec![2, 4]);
        assert_eq!(switched_fibers(&a), vec![4]);
    }

    #[test]
    fn forms() {
        assert_eq!(form_degree(&psi6()), Some(6));
        assert_eq!(form_degree(&psi12()), Some(12));
        assert_eq!(form_degree(&form_mul(&psi6(), &psi12())), Some(18));
        assert_eq!(form_string(&psi6()), "y1^5*y2 - y1*y2^5");
        assert_eq!(octahedral_rotations().len(), 24);
    }
}
