//! Rational polyhedral fans, hyperplane arrangements and refinements.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::{Cone, Position};
use crate::error::{Error, Result};
use crate::linalg::{dot, int, is_zero_vec, normalize_line, Int, IntMatrix};

const SAMPLE_SEED: u64 = 0x5eed_f00d;
const SAMPLE_POINTS: usize = 100;

/// Outcome of a structural check, with a description of the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub detail: Option<String>,
}

impl Check {
    pub fn pass() -> Self {
        Check { ok: true, detail: None }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Check {
            ok: false,
            detail: Some(detail.into()),
        }
    }
}

/// A fan given by its maximal cones (sorted canonically).
#[derive(Clone)]
pub struct Fan {
    rank: usize,
    maximal: Vec<Cone>,
    all: OnceLock<Arc<Vec<Cone>>>,
    index: OnceLock<Arc<HashMap<Cone, usize>>>,
    containing: OnceLock<Arc<HashMap<Cone, Vec<usize>>>>,
    complete: OnceLock<bool>,
}

impl std::fmt::Debug for Fan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fan")
            .field("rank", &self.rank)
            .field("maximal", &self.maximal)
            .finish()
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.maximal == other.maximal
    }
}

impl Eq for Fan {}

impl Fan {
    /// Build from cones already known to be the maximal ones.
    pub fn from_maximal(rank: usize, mut cones: Vec<Cone>) -> Fan {
        for c in &cones {
            assert_eq!(c.rank(), rank, "cone rank differs from fan rank");
        }
        cones.sort();
        cones.dedup();
        Fan {
            rank,
            maximal: cones,
            all: OnceLock::new(),
            index: OnceLock::new(),
            containing: OnceLock::new(),
            complete: OnceLock::new(),
        }
    }

    /// Build from any generating list; cones contained in others are dropped.
    pub fn from_cones(rank: usize, mut cones: Vec<Cone>) -> Fan {
        cones.sort();
        cones.dedup();
        let keep: Vec<bool> = (0..cones.len())
            .into_par_iter()
            .map(|i| {
                !cones
                    .iter()
                    .enumerate()
                    .any(|(j, c)| j != i && c.dim() > cones[i].dim() && c.contains_cone(&cones[i]))
            })
            .collect();
        let maximal = cones
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(c, _)| c)
            .collect();
        Fan::from_maximal(rank, maximal)
    }

    pub(crate) fn with_complete(self, complete: bool) -> Fan {
        let _ = self.complete.set(complete);
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    pub fn dim(&self) -> usize {
        self.maximal.iter().map(|c| c.dim()).max().unwrap_or(0)
    }

    /// Every cone of the fan, sorted canonically.
    pub fn all_cones(&self) -> &[Cone] {
        self.all.get_or_init(|| {
            let mut v: Vec<Cone> = self.containment().keys().cloned().collect();
            v.sort();
            Arc::new(v)
        })
    }

    fn containment(&self) -> &HashMap<Cone, Vec<usize>> {
        self.containing.get_or_init(|| {
            let faces: Vec<Vec<Cone>> = self.maximal.par_iter().map(|c| c.faces()).collect();
            let mut map: HashMap<Cone, Vec<usize>> = HashMap::new();
            for (i, fs) in faces.into_iter().enumerate() {
                for f in fs {
                    map.entry(f).or_default().push(i);
                }
            }
            Arc::new(map)
        })
    }

    /// Indices of the maximal cones having `c` as a face (empty if `c` is not a cone of the fan).
    pub fn maximal_containing(&self, c: &Cone) -> &[usize] {
        self.containment().get(c).map_or(&[], |v| v.as_slice())
    }

    pub fn cone_index(&self) -> &HashMap<Cone, usize> {
        self.index.get_or_init(|| {
            Arc::new(
                self.all_cones()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i))
                    .collect(),
            )
        })
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cone_index().contains_key(c)
    }

    pub fn cones_of_dim(&self, k: usize) -> Vec<&Cone> {
        self.all_cones().iter().filter(|c| c.dim() == k).collect()
    }

    /// Number of cones in each dimension `0..=rank`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.rank + 1];
        for c in self.all_cones() {
            f[c.dim()] += 1;
        }
        f
    }

    pub fn is_complete(&self) -> bool {
        *self.complete.get_or_init(|| self.check_complete().ok)
    }

    /// Every pairwise intersection of maximal cones is a face of both.
    pub fn check_fan(&self) -> Check {
        let n = self.maximal.len();
        let bad = (0..n).into_par_iter().find_map_first(|i| {
            (i + 1..n).find_map(|j| {
                if pair_meets_in_face(&self.maximal[i], &self.maximal[j]) {
                    None
                } else {
                    Some((i, j))
                }
            })
        });
        match bad {
            None => Check::pass(),
            Some((i, j)) => Check::fail(format!(
                "maximal cones {i} and {j} do not meet in a common face: {:?} and {:?}",
                self.maximal[i], self.maximal[j]
            )),
        }
    }

    /// Support is the whole ambient space.
    pub fn check_complete(&self) -> Check {
        if self.maximal.is_empty() {
            return Check::fail("fan has no cones");
        }
        covers(&Cone::whole_space(self.rank), &self.maximal)
    }
}

fn separating_face(a: &Cone, b: &Cone) -> Option<(Cone, Cone)> {
    for n in a.facet_normals() {
        let gens = b.generators();
        if gens.iter().all(|g| dot(n, g).signum() <= Int::ZERO) {
            let fa = restrict_to_hyperplane(a, n);
            let fb = restrict_to_hyperplane(b, n);
            return Some((fa, fb));
        }
    }
    None
}

/// `c ∩ {n = 0}` when `n` has constant sign on `c`.
fn restrict_to_hyperplane(c: &Cone, n: &[Int]) -> Cone {
    let rays: Vec<Vec<Int>> = c.rays().iter().filter(|r| dot(n, r).is_zero()).cloned().collect();
    Cone::from_generators(c.rank(), &rays, c.lineality().basis())
}

pub(crate) fn pair_meets_in_face(a: &Cone, b: &Cone) -> bool {
    if a == b {
        return true;
    }
    if a.dim() == 0 || b.dim() == 0 {
        return a.intersect(b).is_face_of(a) && a.intersect(b).is_face_of(b);
    }
    if let Some((fa, fb)) = separating_face(a, b).or_else(|| separating_face(b, a).map(|(x, y)| (y, x))) {
        if fa.dim() < a.dim() || fb.dim() < b.dim() {
            return pair_meets_in_face(&fa, &fb);
        }
    }
    let i = a.intersect(b);
    i.is_face_of(a) && i.is_face_of(b)
}

fn random_point_in(c: &Cone, rng: &mut ChaCha8Rng) -> Vec<Int> {
    let mut p = vec![Int::ZERO; c.rank()];
    for r in c.rays() {
        let w = int(rng.random_range(1..=1000));
        for (x, y) in p.iter_mut().zip(r) {
            *x += &w * y;
        }
    }
    for l in c.lineality().basis() {
        let w = int(rng.random_range(-1000..=1000));
        for (x, y) in p.iter_mut().zip(l) {
            *x += &w * y;
        }
    }
    p
}

/// Whether `pieces`, assumed to form a fan, have union equal to `region`:
/// pieces are inside the region with its dimension, every ridge off the
/// region boundary is shared by exactly two pieces, the dual graph is
/// connected, and seeded random points of the region are covered.
pub fn covers(region: &Cone, pieces: &[Cone]) -> Check {
    if pieces.is_empty() {
        return Check::fail("no pieces");
    }
    for (i, p) in pieces.iter().enumerate() {
        if p.dim() != region.dim() {
            return Check::fail(format!(
                "piece {i} has dimension {} instead of {}",
                p.dim(),
                region.dim()
            ));
        }
        if !region.contains_cone(p) {
            return Check::fail(format!("piece {i} is not inside the region"));
        }
    }
    let boundary = region.facet_normals().to_vec();
    let facets: Vec<Vec<Cone>> = pieces.par_iter().map(|p| p.facets()).collect();
    let mut ridges: HashMap<Cone, Vec<usize>> = HashMap::new();
    for (i, fs) in facets.into_iter().enumerate() {
        for f in fs {
            let gens = f.generators();
            let on_boundary = boundary.iter().any(|n| gens.iter().all(|g| dot(n, g).is_zero()));
            if !on_boundary {
                ridges.entry(f).or_default().push(i);
            }
        }
    }
    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut sorted: Vec<(&Cone, &Vec<usize>)> = ridges.iter().collect();
    sorted.sort();
    for (r, owners) in sorted {
        if owners.len() != 2 {
            return Check::fail(format!("ridge {r:?} lies in {} maximal cones", owners.len()));
        }
        let (a, b) = (find(&mut parent, owners[0]), find(&mut parent, owners[1]));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    if (0..pieces.len()).any(|i| find(&mut parent, i) != root) {
        return Check::fail("dual graph is disconnected");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for _ in 0..SAMPLE_POINTS {
        let p = if region.lineality_dim() == region.rank() {
            (0..region.rank())
                .map(|_| int(rng.random_range(-1000..=1000)))
                .collect()
        } else {
            random_point_in(region, &mut rng)
        };
        if !pieces.iter().any(|c| c.contains_int(&p)) {
            return Check::fail(format!("sample point {p:?} is not covered"));
        }
    }
    Check::pass()
}

/// A finite set of linear hyperplanes through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    rank: usize,
    normals: Vec<Vec<Int>>,
}

impl Arrangement {
    /// Normals are normalized up to sign and deduplicated; zero normals are rejected.
    pub fn new(rank: usize, normals: Vec<Vec<Int>>) -> Result<Arrangement> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for n in normals {
            if n.len() != rank {
                return Err(Error::Dimension(format!("normal of length {} in rank {rank}", n.len())));
            }
            if is_zero_vec(&n) {
                return Err(Error::Precondition("zero normal in arrangement".into()));
            }
            let n = normalize_line(n);
            if seen.insert(n.clone()) {
                out.push(n);
            }
        }
        Ok(Arrangement { rank, normals: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn normals(&self) -> &[Vec<Int>] {
        &self.normals
    }
}

/// Chambers of the arrangement restricted to `within` (of any dimension).
pub fn chambers_within(within: &Cone, normals: &[Vec<Int>]) -> Vec<Cone> {
    let mut cells: Vec<(Cone, Vec<Vec<Int>>)> = vec![(within.clone(), within.facet_normals().to_vec())];
    let eqs = within.equations().to_vec();
    let rank = within.rank();
    for h in normals {
        cells = cells
            .into_par_iter()
            .flat_map_iter(|(c, ineqs)| {
                let crosses_lin = c.lineality().basis().iter().any(|l| !dot(h, l).is_zero());
                let mut pos = false;
                let mut neg = false;
                for r in c.rays() {
                    let v = dot(h, r);
                    if v.signum() > Int::ZERO {
                        pos = true;
                    } else if v.signum() < Int::ZERO {
                        neg = true;
                    }
                }
                if crosses_lin || (pos && neg) {
                    let mut ip = ineqs.clone();
                    ip.push(h.clone());
                    let mut im = ineqs;
                    im.push(h.iter().map(|x| -x).collect());
                    let cp = Cone::from_inequalities(rank, &ip, &eqs);
                    let cm = Cone::from_inequalities(rank, &im, &eqs);
                    vec![(cp, ip), (cm, im)]
                } else {
                    vec![(c, ineqs)]
                }
            })
            .collect();
    }
    let mut out: Vec<Cone> = cells.into_iter().map(|(c, _)| c).collect();
    out.sort();
    out
}

/// The complete fan cut out by an arrangement.
pub fn fan_from_arrangement(a: &Arrangement) -> Fan {
    let cones = chambers_within(&Cone::whole_space(a.rank), &a.normals);
    Fan::from_maximal(a.rank, cones).with_complete(true)
}

fn wall_normals(g: &Fan) -> Vec<Vec<Int>> {
    let mut set = HashSet::new();
    let mut out = Vec::new();
    for c in g.maximal_cones() {
        for n in c.facet_normals().iter().chain(c.equations()) {
            let n = normalize_line(n.clone());
            if set.insert(n.clone()) {
                out.push(n);
            }
        }
    }
    out.sort();
    out
}

fn refine_pair(f: &Fan, g: &Fan) -> Fan {
    let walls = wall_normals(g);
    let gmax = g.maximal_cones();
    let pieces: Vec<Vec<Cone>> = f
        .maximal_cones()
        .par_iter()
        .map(|fc| {
            let chambers = chambers_within(fc, &walls);
            let mut groups: BTreeMap<usize, Vec<&Cone>> = BTreeMap::new();
            for ch in &chambers {
                let p = ch.relative_interior_point();
                for (j, gc) in gmax.iter().enumerate() {
                    if gc.contains_int(&p) {
                        groups.entry(j).or_default().push(ch);
                    }
                }
            }
            groups
                .values()
                .map(|cs| {
                    if cs.len() == 1 {
                        return cs[0].clone();
                    }
                    let mut rays = Vec::new();
                    let mut lin = Vec::new();
                    for c in cs {
                        rays.extend(c.rays().iter().cloned());
                        lin.extend(c.lineality().basis().iter().cloned());
                    }
                    Cone::from_generators(fc.rank(), &rays, &lin)
                })
                .collect()
        })
        .collect();
    let all: Vec<Cone> = pieces.into_iter().flatten().collect();
    Fan::from_cones(f.rank, all)
}

/// Coarsest common refinement of fans on the same ambient space.
pub fn common_refinement(fans: &[&Fan]) -> Result<Fan> {
    let Some(first) = fans.first() else {
        return Err(Error::Precondition("common_refinement of an empty list".into()));
    };
    if fans.iter().any(|f| f.rank != first.rank) {
        return Err(Error::Dimension("fans live in different ambient spaces".into()));
    }
    let mut acc = (*first).clone();
    for g in &fans[1..] {
        acc = refine_pair(&acc, g);
    }
    let complete = fans.iter().all(|f| f.complete.get() == Some(&true));
    if complete {
        acc = acc.with_complete(true);
    }
    Ok(acc)
}

/// `{ f^{-1}(σ) }` for a surjective linear map `f` (target × source).
pub fn preimage_fan(f: &IntMatrix, g: &Fan) -> Result<Fan> {
    if f.nrows() != g.rank {
        return Err(Error::Dimension(format!(
            "map has {} rows but fan has rank {}",
            f.nrows(),
            g.rank
        )));
    }
    if f.rank() < f.nrows() {
        return Err(Error::Precondition("preimage_fan needs a surjective map".into()));
    }
    let cones: Vec<Cone> = g.maximal_cones().par_iter().map(|c| c.preimage(f)).collect();
    let fan = Fan::from_maximal(f.ncols(), cones);
    Ok(match g.complete.get() {
        Some(&c) => fan.with_complete(c),
        None => fan,
    })
}

/// Product fan on the direct sum, first factor's coordinates first.
pub fn product_fan(a: &Fan, b: &Fan) -> Fan {
    let mut cones = Vec::with_capacity(a.maximal.len() * b.maximal.len());
    for x in &a.maximal {
        for y in &b.maximal {
            cones.push(x.product(y));
        }
    }
    Fan::from_maximal(a.rank + b.rank, cones)
}

/// Image of a fan under a coordinate isomorphism (lattice automorphism).
pub fn transform_fan(f: &Fan, m: &IntMatrix) -> Fan {
    let cones = f.maximal.par_iter().map(|c| c.linear_image(m)).collect();
    Fan::from_maximal(m.nrows(), cones)
}

/// Literal equality of fans; fails on mismatched ambient rank.
pub fn fans_equal(a: &Fan, b: &Fan) -> Result<bool> {
    if a.rank != b.rank {
        return Err(Error::Precondition(format!(
            "comparing fans of rank {} and {}",
            a.rank, b.rank
        )));
    }
    Ok(a.maximal == b.maximal)
}

/// Every cone of `fine` lies in a cone of `coarse` and the supports agree.
pub fn is_refinement(fine: &Fan, coarse: &Fan) -> Result<bool> {
    if fine.rank != coarse.rank {
        return Err(Error::Precondition("refinement check across ranks".into()));
    }
    let inside: Vec<Option<usize>> = fine
        .maximal
        .par_iter()
        .map(|c| coarse.maximal.iter().position(|d| d.contains_cone(c)))
        .collect();
    if inside.iter().any(|x| x.is_none()) {
        return Ok(false);
    }
    let ok = coarse.maximal.par_iter().all(|d| {
        let pieces: Vec<Cone> = fine
            .maximal
            .iter()
            .filter(|c| c.dim() == d.dim() && d.contains_cone(c))
            .cloned()
            .collect();
        covers(d, &pieces).ok
    });
    Ok(ok)
}

/// Locate the unique cone whose relative interior contains `p`.
pub fn locate_in_fan<'a>(f: &'a Fan, p: &[crate::linalg::Rat]) -> Option<&'a Cone> {
    f.all_cones()
        .iter()
        .find(|c| c.locate_point(p) == Position::RelativeInterior)
}

/// Maximal cones present in exactly one of two fans of equal rank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FanDiff {
    pub only_left: Vec<Cone>,
    pub only_right: Vec<Cone>,
    /// Cones of `only_left` that are unions of cones of `only_right`.
    pub split_left: Vec<Cone>,
    /// Cones of `only_right` that are unions of cones of `only_left`.
    pub split_right: Vec<Cone>,
}

impl FanDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

pub fn fan_diff(a: &Fan, b: &Fan) -> Result<FanDiff> {
    if a.rank != b.rank {
        return Err(Error::Precondition(format!(
            "comparing fans of rank {} and {}",
            a.rank, b.rank
        )));
    }
    let only = |x: &Fan, y: &Fan| -> Vec<Cone> {
        x.maximal
            .iter()
            .filter(|c| y.maximal.binary_search(c).is_err())
            .cloned()
            .collect()
    };
    let (only_left, only_right) = (only(a, b), only(b, a));
    let split = |xs: &[Cone], ys: &[Cone]| -> Vec<Cone> {
        xs.par_iter()
            .filter(|c| {
                let pieces: Vec<Cone> = ys
                    .iter()
                    .filter(|p| p.dim() == c.dim() && c.contains_cone(p))
                    .cloned()
                    .collect();
                pieces.len() > 1 && covers(c, &pieces).ok
            })
            .cloned()
            .collect()
    };
    let split_left = split(&only_left, &only_right);
    let split_right = split(&only_right, &only_left);
    Ok(FanDiff {
        only_left,
        only_right,
        split_left,
        split_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    fn quadrants() -> Fan {
        fan_from_arrangement(&Arrangement::new(2, vec![ints(&[1, 0]), ints(&[0, 1])]).unwrap())
    }

    #[test]
    fn quadrant_fan() {
        let f = quadrants();
        assert_eq!(f.maximal_cones().len(), 4);
        assert_eq!(f.f_vector(), vec![1, 4, 4]);
        assert!(f.check_fan().ok);
        assert!(f.check_complete().ok);
    }

    #[test]
    fn overlapping_cones_fail() {
        let a = Cone::from_rays_i64(2, &[&[1, 0], &[0, 1]]);
        let b = Cone::from_rays_i64(2, &[&[1, 1], &[-1, 1]]);
        let f = Fan::from_maximal(2, vec![a, b]);
        let r = f.check_fan();
        assert!(!r.ok);
        assert!(r.detail.unwrap().contains("maximal cones 0 and 1"));
    }

    #[test]
    fn incomplete_fan_detected() {
        let a = Cone::from_rays_i64(2, &[&[1, 0], &[0, 1]]);
        let f = Fan::from_maximal(2, vec![a]);
        assert!(f.check_fan().ok);
        assert!(!f.check_complete().ok);
    }

    #[test]
    fn refinement_of_line_and_quadrants() {
        let line = fan_from_arrangement(&Arrangement::new(2, vec![ints(&[1, -1])]).unwrap());
        let q = quadrants();
        let r = common_refinement(&[&line, &q]).unwrap();
        assert_eq!(r.maximal_cones().len(), 6);
        assert!(is_refinement(&r, &line).unwrap());
        assert!(is_refinement(&r, &q).unwrap());
        assert!(!is_refinement(&q, &r).unwrap());
        assert!(r.check_fan().ok);
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let a = quadrants();
        let b = fan_from_arrangement(&Arrangement::new(1, vec![ints(&[1])]).unwrap());
        assert!(fans_equal(&a, &b).is_err());
        assert!(common_refinement(&[&a, &b]).is_err());
    }

    #[test]
    fn preimage_rejects_non_surjective() {
        let g = quadrants();
        let f = IntMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(preimage_fan(&f, &g).is_err());
        let f = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        let p = preimage_fan(&f, &g).unwrap();
        assert_eq!(p.maximal_cones()[0].lineality_dim(), 1);
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(Arrangement::new(2, vec![ints(&[0, 0])]).is_err());
        let a = Arrangement::new(2, vec![ints(&[1, 1]), ints(&[-2, -2])]).unwrap();
        assert_eq!(a.normals().len(), 1);
    }
}
