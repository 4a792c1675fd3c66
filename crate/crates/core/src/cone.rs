//! Rational polyhedral cones with canonical V- and H-representations.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::linalg::{
    dot, dot_rat, integer_kernel, is_zero_vec, neg_vec, primitive, rank_of_rows, Int, IntMatrix, LatticeBasis, Rat,
    Rref,
};

/// Where a point sits relative to a cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Outside,
    Boundary,
    RelativeInterior,
}

/// Irredundant inequality description: `eq . x = 0` for every equation and
/// `f . x >= 0` for every facet normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub equations: Vec<Vec<Int>>,
    pub facets: Vec<Vec<Int>>,
}

/// A rational polyhedral cone in `R^rank`, stored canonically: the lineality
/// space as a saturated Hermite basis and the extreme rays reduced modulo
/// lineality, primitive and sorted.
#[derive(Clone)]
pub struct Cone {
    rank: usize,
    lineality: LatticeBasis,
    rays: Vec<Vec<Int>>,
    dim: usize,
    hrep: OnceLock<Arc<HRep>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.lineality == other.lineality
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.lineality.hash(state);
        self.rays.hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.dim.cmp(&other.dim))
            .then_with(|| self.rays.cmp(&other.rays))
            .then_with(|| self.lineality.cmp(&other.lineality))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone(dim {}, rays [", self.dim)?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_vec(r))?;
        }
        write!(f, "]")?;
        if self.lineality.rank() > 0 {
            write!(f, ", lineality [")?;
            for (i, r) in self.lineality.basis().iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", fmt_vec(r))?;
            }
            write!(f, "]")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn fmt_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub(crate) fn fmt_rows(rows: &[Vec<Int>]) -> String {
    let parts: Vec<String> = rows.iter().map(|r| fmt_vec(r)).collect();
    format!("[{}]", parts.join(" "))
}

pub(crate) struct Dd {
    pub rays: Vec<Vec<Int>>,
    pub lineality: Vec<Vec<Int>>,
}

fn combine(c0: &Int, v: &[Int], c: &Int, w: &[Int]) -> Vec<Int> {
    // c0 * v - c * w
    primitive(v.iter().zip(w).map(|(x, y)| c0 * x - c * y).collect())
}

/// Double description: extreme rays and lineality of
/// `{x : a . x >= 0 for a in ineqs, e . x = 0 for e in eqs}`.
pub(crate) fn double_description(rank: usize, ineqs: &[Vec<Int>], eqs: &[Vec<Int>]) -> Dd {
    let mut lin: Vec<Vec<Int>> = integer_kernel(eqs, rank);
    let mut rays: Vec<Vec<Int>> = Vec::new();
    let mut tight: Vec<FixedBitSet> = Vec::new();
    let m = ineqs.len();
    for (k, a) in ineqs.iter().enumerate() {
        if is_zero_vec(a) {
            continue;
        }
        let lv: Vec<Int> = lin.iter().map(|l| dot(a, l)).collect();
        if let Some(p) = lv.iter().position(|x| !x.is_zero()) {
            let mut l0 = lin.remove(p);
            let mut c0 = lv[p].clone();
            if c0.signum() < Int::ZERO {
                l0 = neg_vec(&l0);
                c0 = -c0;
            }
            let others: Vec<Int> = lv
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != p)
                .map(|(_, c)| c.clone())
                .collect();
            for (l, c) in lin.iter_mut().zip(&others) {
                if !c.is_zero() {
                    *l = combine(&c0, l, c, &l0);
                }
            }
            for (r, t) in rays.iter_mut().zip(tight.iter_mut()) {
                let c = dot(a, r);
                if !c.is_zero() {
                    *r = combine(&c0, r, &c, &l0);
                }
                t.insert(k);
            }
            let mut t = FixedBitSet::with_capacity(m);
            t.insert_range(0..k);
            rays.push(l0);
            tight.push(t);
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|r| dot(a, r)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].signum() < Int::ZERO).collect();
        if neg.is_empty() {
            for (i, t) in tight.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    t.insert(k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].signum() > Int::ZERO).collect();
        let mut new_rays: Vec<Vec<Int>> = Vec::new();
        let mut new_tight: Vec<FixedBitSet> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let mut common = tight[p].clone();
                common.intersect_with(&tight[n]);
                let adjacent = (0..rays.len()).all(|r| r == p || r == n || !common.is_subset(&tight[r]));
                if !adjacent {
                    continue;
                }
                let w = combine(&vals[p], &rays[n], &vals[n], &rays[p]);
                common.insert(k);
                new_rays.push(w);
                new_tight.push(common);
            }
        }
        let mut kept_rays = Vec::with_capacity(rays.len() + new_rays.len());
        let mut kept_tight = Vec::with_capacity(rays.len() + new_rays.len());
        for (i, (r, mut t)) in rays.into_iter().zip(tight).enumerate() {
            if vals[i].signum() < Int::ZERO {
                continue;
            }
            if vals[i].is_zero() {
                t.insert(k);
            }
            kept_rays.push(r);
            kept_tight.push(t);
        }
        kept_rays.extend(new_rays);
        kept_tight.extend(new_tight);
        rays = kept_rays;
        tight = kept_tight;
    }
    Dd { rays, lineality: lin }
}

fn canonical_hrep(rank: usize, facets: Vec<Vec<Int>>, equations: Vec<Vec<Int>>) -> HRep {
    let eq = LatticeBasis::from_generators(rank, equations).saturate();
    let rref = Rref::new(eq.basis(), rank);
    let mut f: Vec<Vec<Int>> = facets
        .iter()
        .map(|v| rref.reduce_int(v))
        .filter(|v| !is_zero_vec(v))
        .collect();
    f.sort();
    f.dedup();
    HRep {
        equations: eq.basis().to_vec(),
        facets: f,
    }
}

impl Cone {
    fn assemble(rank: usize, lineality: LatticeBasis, rays: Vec<Vec<Int>>) -> Cone {
        let mut all = rays.clone();
        all.extend(lineality.basis().iter().cloned());
        let dim = rank_of_rows(&all, rank);
        Cone {
            rank,
            lineality,
            rays,
            dim,
            hrep: OnceLock::new(),
        }
    }

    /// Build from extreme rays and a lineality basis; reduces and sorts.
    fn from_dd(rank: usize, rays: Vec<Vec<Int>>, lin: Vec<Vec<Int>>) -> Cone {
        let lineality = LatticeBasis::from_generators(rank, lin).saturate();
        let rref = Rref::new(lineality.basis(), rank);
        let mut rs: Vec<Vec<Int>> = rays
            .iter()
            .map(|r| rref.reduce_int(r))
            .filter(|r| !is_zero_vec(r))
            .collect();
        rs.sort();
        rs.dedup();
        Cone::assemble(rank, lineality, rs)
    }

    /// The cone `{x : a . x >= 0, e . x = 0}`.
    pub fn from_inequalities(rank: usize, ineqs: &[Vec<Int>], eqs: &[Vec<Int>]) -> Cone {
        for v in ineqs.iter().chain(eqs) {
            assert_eq!(v.len(), rank, "inequality length differs from ambient rank");
        }
        let dd = double_description(rank, ineqs, eqs);
        Cone::from_dd(rank, dd.rays, dd.lineality)
    }

    /// The cone generated by `rays` plus the linear span of `lineality`.
    pub fn from_generators(rank: usize, rays: &[Vec<Int>], lineality: &[Vec<Int>]) -> Cone {
        for v in rays.iter().chain(lineality) {
            assert_eq!(v.len(), rank, "generator length differs from ambient rank");
        }
        let dual = double_description(rank, rays, lineality);
        let h = canonical_hrep(rank, dual.rays, dual.lineality);
        let mut cons = h.facets.clone();
        cons.extend(h.equations.iter().cloned());
        let lin_gens = integer_kernel(&cons, rank);
        let lin = LatticeBasis::from_generators(rank, lin_gens).saturate();
        let rref = Rref::new(lin.basis(), rank);
        let mut cand: Vec<Vec<Int>> = rays
            .iter()
            .map(|r| rref.reduce_int(r))
            .filter(|r| !is_zero_vec(r))
            .collect();
        cand.sort();
        cand.dedup();
        let tights: Vec<FixedBitSet> = cand
            .iter()
            .map(|r| {
                let mut t = FixedBitSet::with_capacity(h.facets.len());
                for (i, f) in h.facets.iter().enumerate() {
                    if dot(f, r).is_zero() {
                        t.insert(i);
                    }
                }
                t
            })
            .collect();
        let extreme: Vec<Vec<Int>> = (0..cand.len())
            .filter(|&i| !(0..cand.len()).any(|j| j != i && tights[i].is_subset(&tights[j])))
            .map(|i| cand[i].clone())
            .collect();
        let c = Cone::assemble(rank, lin, extreme);
        let _ = c.hrep.set(Arc::new(h));
        c
    }

    pub fn whole_space(rank: usize) -> Cone {
        Cone::assemble(rank, LatticeBasis::full(rank), Vec::new())
    }

    pub fn zero(rank: usize) -> Cone {
        Cone::assemble(rank, LatticeBasis::zero(rank), Vec::new())
    }

    /// Convenience constructor from small integer rays.
    pub fn from_rays_i64(rank: usize, rays: &[&[i64]]) -> Cone {
        let rs: Vec<Vec<Int>> = rays.iter().map(|r| crate::linalg::ints(r)).collect();
        Cone::from_generators(rank, &rs, &[])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn lineality(&self) -> &LatticeBasis {
        &self.lineality
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.rank()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.rank
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.rank() == 0
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() + self.lineality.rank() == self.dim
    }

    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            let dual = double_description(self.rank, &self.rays, self.lineality.basis());
            Arc::new(canonical_hrep(self.rank, dual.rays, dual.lineality))
        })
    }

    pub fn facet_normals(&self) -> &[Vec<Int>] {
        &self.hrep().facets
    }

    pub fn equations(&self) -> &[Vec<Int>] {
        &self.hrep().equations
    }

    /// Generators as a cone: rays and both signs of each lineality vector.
    pub fn generators(&self) -> Vec<Vec<Int>> {
        let mut g = self.rays.clone();
        for l in self.lineality.basis() {
            g.push(l.clone());
            g.push(neg_vec(l));
        }
        g
    }

    /// `span(self) ∩ Z^rank`.
    pub fn span_lattice(&self) -> LatticeBasis {
        let mut g = self.rays.clone();
        g.extend(self.lineality.basis().iter().cloned());
        LatticeBasis::from_generators(self.rank, g).saturate()
    }

    /// Sum of the rays; lies in the relative interior.
    pub fn relative_interior_point(&self) -> Vec<Int> {
        let mut p = vec![Int::ZERO; self.rank];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += y;
            }
        }
        p
    }

    pub fn locate_point(&self, p: &[Rat]) -> Position {
        assert_eq!(p.len(), self.rank, "point length differs from ambient rank");
        let h = self.hrep();
        if h.equations.iter().any(|e| !dot_rat(e, p).is_zero()) {
            return Position::Outside;
        }
        let mut boundary = false;
        for f in &h.facets {
            let v = dot_rat(f, p);
            if v < Rat::ZERO {
                return Position::Outside;
            }
            if v.is_zero() {
                boundary = true;
            }
        }
        if boundary {
            Position::Boundary
        } else {
            Position::RelativeInterior
        }
    }

    pub fn locate_int(&self, p: &[Int]) -> Position {
        assert_eq!(p.len(), self.rank, "point length differs from ambient rank");
        let h = self.hrep();
        if h.equations.iter().any(|e| !dot(e, p).is_zero()) {
            return Position::Outside;
        }
        let mut boundary = false;
        for f in &h.facets {
            let v = dot(f, p);
            if v.signum() < Int::ZERO {
                return Position::Outside;
            }
            if v.is_zero() {
                boundary = true;
            }
        }
        if boundary {
            Position::Boundary
        } else {
            Position::RelativeInterior
        }
    }

    pub fn contains_int(&self, p: &[Int]) -> bool {
        self.locate_int(p) != Position::Outside
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let h = self.hrep();
        other.rays.iter().all(|r| {
            h.equations.iter().all(|e| dot(e, r).is_zero()) && h.facets.iter().all(|f| dot(f, r).signum() >= Int::ZERO)
        }) && other
            .lineality
            .basis()
            .iter()
            .all(|l| h.equations.iter().all(|e| dot(e, l).is_zero()) && h.facets.iter().all(|f| dot(f, l).is_zero()))
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.rank, other.rank, "rank mismatch in intersect");
        let mut ineqs = self.facet_normals().to_vec();
        ineqs.extend(other.facet_normals().iter().cloned());
        let mut eqs = self.equations().to_vec();
        eqs.extend(other.equations().iter().cloned());
        Cone::from_inequalities(self.rank, &ineqs, &eqs)
    }

    /// Image under `f` (target × source).
    pub fn linear_image(&self, f: &IntMatrix) -> Cone {
        assert_eq!(f.ncols(), self.rank, "dimension mismatch in linear_image");
        let rays: Vec<Vec<Int>> = self.rays.iter().map(|r| f.apply(r)).collect();
        let lin: Vec<Vec<Int>> = self.lineality.basis().iter().map(|l| f.apply(l)).collect();
        Cone::from_generators(f.nrows(), &rays, &lin)
    }

    /// `f^{-1}(self)` for `f` (target × source) with target rank equal to ours.
    pub fn preimage(&self, f: &IntMatrix) -> Cone {
        assert_eq!(f.nrows(), self.rank, "dimension mismatch in preimage");
        let ineqs: Vec<Vec<Int>> = self.facet_normals().iter().map(|n| f.pull_back(n)).collect();
        let eqs: Vec<Vec<Int>> = self.equations().iter().map(|n| f.pull_back(n)).collect();
        Cone::from_inequalities(f.ncols(), &ineqs, &eqs)
    }

    fn face_from_rays(&self, set: &FixedBitSet) -> Cone {
        let rays: Vec<Vec<Int>> = set.ones().map(|i| self.rays[i].clone()).collect();
        Cone::assemble(self.rank, self.lineality.clone(), rays)
    }

    fn incidence(&self) -> Vec<FixedBitSet> {
        self.facet_normals()
            .iter()
            .map(|f| {
                let mut s = FixedBitSet::with_capacity(self.rays.len());
                for (i, r) in self.rays.iter().enumerate() {
                    if dot(f, r).is_zero() {
                        s.insert(i);
                    }
                }
                s
            })
            .collect()
    }

    /// All faces, including the cone itself and its lineality space.
    pub fn faces(&self) -> Vec<Cone> {
        let inc = self.incidence();
        let mut full = FixedBitSet::with_capacity(self.rays.len());
        full.insert_range(..);
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut queue = vec![full.clone()];
        seen.insert(full);
        while let Some(s) = queue.pop() {
            for f in &inc {
                let mut t = s.clone();
                t.intersect_with(f);
                if seen.insert(t.clone()) {
                    queue.push(t);
                }
            }
        }
        let mut out: Vec<Cone> = seen.iter().map(|s| self.face_from_rays(s)).collect();
        out.sort();
        out
    }

    /// Faces of codimension one.
    pub fn facets(&self) -> Vec<Cone> {
        let inc = self.incidence();
        let mut out: Vec<Cone> = inc.iter().map(|s| self.face_from_rays(s)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Smallest face of `self` containing `other`, which must lie inside `self`.
    pub fn face_containing(&self, other: &Cone) -> Cone {
        let gens = other.generators();
        let inc = self.incidence();
        let mut set = FixedBitSet::with_capacity(self.rays.len());
        set.insert_range(..);
        for (f, s) in self.facet_normals().iter().zip(&inc) {
            if gens.iter().all(|g| dot(f, g).is_zero()) {
                set.intersect_with(s);
            }
        }
        self.face_from_rays(&set)
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.contains_cone(self) && other.face_containing(self) == *self
    }

    /// Check the canonical invariants; used by decoders.
    pub fn from_parts(rank: usize, rays: Vec<Vec<Int>>, lineality: Vec<Vec<Int>>) -> Result<Cone> {
        if rays.iter().chain(&lineality).any(|v| v.len() != rank) {
            return Err(Error::Dimension(format!("cone generators must have length {rank}")));
        }
        Ok(Cone::from_generators(rank, &rays, &lineality))
    }

    /// Product with another cone in the direct sum of ambient spaces.
    pub fn product(&self, other: &Cone) -> Cone {
        let r = self.rank + other.rank;
        let pad_l = |v: &Vec<Int>| {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(Int::ZERO, other.rank));
            w
        };
        let pad_r = |v: &Vec<Int>| {
            let mut w = vec![Int::ZERO; self.rank];
            w.extend(v.iter().cloned());
            w
        };
        let rays: Vec<Vec<Int>> = self
            .rays
            .iter()
            .map(pad_l)
            .chain(other.rays.iter().map(pad_r))
            .collect();
        let lin: Vec<Vec<Int>> = self
            .lineality
            .basis()
            .iter()
            .map(pad_l)
            .chain(other.lineality.basis().iter().map(pad_r))
            .collect();
        Cone::from_dd(r, rays, lin)
    }
}

/// Sign of a linear form at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

pub fn sign_of(v: &Int) -> Sign {
    match v.signum() {
        s if s > Int::ZERO => Sign::Plus,
        s if s < Int::ZERO => Sign::Minus,
        _ => Sign::Zero,
    }
}

pub fn sign_vector(normals: &[Vec<Int>], p: &[Int]) -> Vec<Sign> {
    normals.iter().map(|n| sign_of(&dot(n, p))).collect()
}
