//! Universal weak semistable reduction of a scaffold: the configuration fan
//! on `V[n]` with its stacky sublattices, and the refined scaffold over it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{chambers_within, common_refinement, preimage_fan, Check, Fan};
use crate::linalg::{dot, image_lattice, lattice_intersect, normalize_line, preimage_lattice, Int, LatticeBasis};
use crate::scaffold::Scaffold;
use crate::stacky::{FanMap, SemistabilityReport, StackyFan};

/// Which refined cones contribute to the sublattice of a quotient cone `ρ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LatticeRule {
    /// Intersect `π(N_λ)` over cones `λ` with `π(λ) = ρ`.
    #[default]
    ImageEquals,
    /// Intersect `π(N_λ) ∩ span(ρ)` over cones `λ` with `π(λ) ⊇ ρ`.
    ImageContains,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub rule: LatticeRule,
    /// Skip the certificate run (tests that inspect intermediate failures).
    pub skip_certificates: bool,
}

#[derive(Clone, Debug)]
pub struct Certificates {
    pub ok: bool,
    pub projection: SemistabilityReport,
    pub sections: Vec<SemistabilityReport>,
    pub quotient_complete: Check,
    pub quotient_fan: Check,
    pub quotient_stacky: Check,
    pub refined_stacky: Check,
    pub terminality: Check,
}

impl Certificates {
    pub fn first_failure(&self) -> Option<String> {
        let sem = |name: &str, r: &SemistabilityReport| {
            (!r.ok).then(|| format!("{name}: {}", r.violations.first().cloned().unwrap_or_default()))
        };
        let chk = |name: &str, c: &Check| (!c.ok).then(|| format!("{name}: {}", c.detail.clone().unwrap_or_default()));
        sem("projection", &self.projection)
            .or_else(|| {
                self.sections
                    .iter()
                    .enumerate()
                    .find_map(|(i, r)| sem(&format!("section {i}"), r))
            })
            .or_else(|| chk("quotient completeness", &self.quotient_complete))
            .or_else(|| chk("quotient fan axioms", &self.quotient_fan))
            .or_else(|| chk("quotient sublattices", &self.quotient_stacky))
            .or_else(|| chk("refined sublattices", &self.refined_stacky))
            .or_else(|| chk("terminality", &self.terminality))
    }
}

/// The configuration fan of a scaffold, with the refined scaffold over it.
#[derive(Clone, Debug)]
pub struct ConfigurationFan {
    pub scaffold: Scaffold,
    pub pi: Arc<StackyFan>,
    pub refined: Scaffold,
    pub refined_stacky: Arc<StackyFan>,
    /// For each cone of `refined.fan.all_cones()`, the index of its image in `pi.fan().all_cones()`.
    image_of: Vec<usize>,
    fibers: OnceLock<Vec<Vec<usize>>>,
    images: OnceLock<Vec<Cone>>,
    certificates: OnceLock<Certificates>,
}

/// Distinct full-dimensional images of the cones of a scaffold.
pub fn full_dimensional_images(s: &Scaffold) -> Vec<Cone> {
    let pi = s.projection();
    let nd = s.base_rank();
    let imgs: Vec<Cone> = s
        .fan
        .all_cones()
        .par_iter()
        .filter(|c| c.dim() >= nd)
        .map(|c| c.linear_image(&pi))
        .filter(|c| c.dim() == nd)
        .collect();
    let mut set: Vec<Cone> = imgs.into_iter().collect::<HashSet<_>>().into_iter().collect();
    set.sort();
    set
}

fn walls_of(images: &[Cone]) -> Vec<Vec<Int>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in images {
        for f in c.facet_normals() {
            let f = normalize_line(f.clone());
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
    }
    out.sort();
    out
}

fn containing_set(images: &[Cone], p: &[Int]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(images.len());
    for (i, c) in images.iter().enumerate() {
        if c.contains_int(p) {
            s.insert(i);
        }
    }
    s
}

/// Overlay of the images: chambers of all image walls, merged by their
/// containing-image sets.
pub fn overlay_fan(images: &[Cone], rank: usize) -> Fan {
    let walls = walls_of(images);
    let chambers = chambers_within(&Cone::whole_space(rank), &walls);
    let keys: Vec<FixedBitSet> = chambers
        .par_iter()
        .map(|c| containing_set(images, &c.relative_interior_point()))
        .collect();
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        groups.entry(k.ones().collect()).or_default().push(i);
    }
    let cones: Vec<Cone> = groups
        .into_par_iter()
        .map(|(_, members)| {
            if members.len() == 1 {
                return chambers[members[0]].clone();
            }
            let mut rays = Vec::new();
            let mut lin = Vec::new();
            for &m in &members {
                rays.extend(chambers[m].rays().iter().cloned());
                lin.extend(chambers[m].lineality().basis().iter().cloned());
            }
            Cone::from_generators(rank, &rays, &lin)
        })
        .collect();
    Fan::from_maximal(rank, cones)
}

fn separated_by_facet(img: &Cone, rho: &Cone) -> bool {
    let gens = rho.generators();
    img.facet_normals()
        .iter()
        .any(|f| gens.iter().all(|g| dot(f, g).signum() <= Int::ZERO))
}

/// Terminality conditions for a candidate quotient `pi` of a scaffold with
/// full-dimensional images `images`: every maximal cone lies inside each
/// image or meets it in lower dimension,
/// each maximal cone is the intersection of the images containing it, and
/// facet-adjacent maximal cones have different containing sets.
pub fn check_terminality_of(images: &[Cone], pi: &Fan) -> Check {
    let maximal = pi.maximal_cones();
    let crossing = maximal.par_iter().enumerate().find_map_first(|(k, rho)| {
        images.iter().enumerate().find_map(|(i, img)| {
            if img.contains_cone(rho) || separated_by_facet(img, rho) {
                return None;
            }
            (img.intersect(rho).dim() == rho.dim())
                .then(|| format!("maximal cone {k} {rho:?} overlaps image {i} without lying inside it"))
        })
    });
    if let Some(d) = crossing {
        return Check::fail(d);
    }
    let sets: Vec<Vec<usize>> = maximal
        .par_iter()
        .map(|rho| (0..images.len()).filter(|&i| images[i].contains_cone(rho)).collect())
        .collect();
    let bad = maximal
        .par_iter()
        .zip(&sets)
        .enumerate()
        .find_map_first(|(k, (rho, s))| {
            let mut ineqs = Vec::new();
            for &i in s {
                ineqs.extend(images[i].facet_normals().iter().cloned());
            }
            let gamma = Cone::from_inequalities(pi.rank(), &ineqs, &[]);
            (gamma != *rho).then(|| format!("maximal cone {k} {rho:?} is not the intersection {gamma:?} of its images"))
        });
    if let Some(d) = bad {
        return Check::fail(d);
    }
    let mut ridges: HashMap<Cone, Vec<usize>> = HashMap::new();
    for (k, rho) in maximal.iter().enumerate() {
        for f in rho.facets() {
            ridges.entry(f).or_default().push(k);
        }
    }
    let mut pairs: Vec<(usize, usize)> = ridges
        .values()
        .filter(|v| v.len() == 2)
        .map(|v| (v[0].min(v[1]), v[0].max(v[1])))
        .collect();
    pairs.sort();
    for (a, b) in pairs {
        if sets[a] == sets[b] {
            return Check::fail(format!(
                "adjacent maximal cones {a} and {b} have the same containing images and should be merged"
            ));
        }
    }
    Check::pass()
}

pub fn configuration_fan(s: &Scaffold) -> Result<ConfigurationFan> {
    configuration_fan_with(s, &Options::default())
}

pub fn configuration_fan_with(s: &Scaffold, opts: &Options) -> Result<ConfigurationFan> {
    let nd = s.base_rank();
    let images = full_dimensional_images(s);
    let pi_fan = overlay_fan(&images, nd);
    let pre = preimage_fan(&s.projection(), &pi_fan)?;
    let refined_fan = common_refinement(&[&s.fan, &pre])?;
    let image_of = images_in(&refined_fan, &s.projection(), &pi_fan)?;
    let lattices = quotient_lattices(&refined_fan, &image_of, &s.projection(), &pi_fan, opts.rule)?;
    let pi = StackyFan::new(pi_fan, lattices)?;
    let refined = Scaffold::new(s.n, s.d, format!("{}-refined", s.kind), refined_fan)?;
    let cf = ConfigurationFan::assemble(s.clone(), pi, refined, Some(image_of))?;
    let _ = cf.images.set(images);
    if !opts.skip_certificates {
        let c = cf.certificates();
        if !c.ok {
            return Err(Error::Verification(c.first_failure().unwrap_or_default()));
        }
    }
    Ok(cf)
}

fn images_in(refined: &Fan, pi: &crate::linalg::IntMatrix, quotient: &Fan) -> Result<Vec<usize>> {
    let index = quotient.cone_index();
    refined
        .all_cones()
        .par_iter()
        .map(|c| {
            let img = c.linear_image(pi);
            index
                .get(&img)
                .copied()
                .ok_or_else(|| Error::Verification(format!("refined cone {c:?} maps to {img:?}, not a quotient cone")))
        })
        .collect()
}

fn quotient_lattices(
    refined: &Fan,
    image_of: &[usize],
    pi: &crate::linalg::IntMatrix,
    quotient: &Fan,
    rule: LatticeRule,
) -> Result<BTreeMap<Cone, LatticeBasis>> {
    let qcones = quotient.all_cones();
    let rcones = refined.all_cones();
    let mut contributors: Vec<Vec<usize>> = vec![Vec::new(); qcones.len()];
    match rule {
        LatticeRule::ImageEquals => {
            for (i, &j) in image_of.iter().enumerate() {
                contributors[j].push(i);
            }
        }
        LatticeRule::ImageContains => {
            let index = quotient.cone_index();
            let faces: Vec<Vec<usize>> = qcones
                .par_iter()
                .map(|c| c.faces().iter().map(|f| index[f]).collect())
                .collect();
            for (i, &j) in image_of.iter().enumerate() {
                for &f in &faces[j] {
                    contributors[f].push(i);
                }
            }
        }
    }
    let out: Vec<Result<(Cone, LatticeBasis)>> = qcones
        .par_iter()
        .zip(&contributors)
        .map(|(rho, cs)| {
            if cs.is_empty() {
                return Err(Error::Verification(format!(
                    "quotient cone {rho:?} is not the image of a refined cone"
                )));
            }
            let span = rho.span_lattice();
            let mut acc: Option<LatticeBasis> = None;
            for &i in cs {
                let mut l = image_lattice(pi, &rcones[i].span_lattice());
                if rule == LatticeRule::ImageContains {
                    l = lattice_intersect(&l, &span);
                }
                acc = Some(match acc {
                    None => l,
                    Some(a) => lattice_intersect(&a, &l),
                });
            }
            Ok((rho.clone(), acc.expect("nonempty")))
        })
        .collect();
    out.into_iter().collect()
}

impl ConfigurationFan {
    /// Rebuild the derived data from the quotient and the refined fan.
    pub fn assemble(
        scaffold: Scaffold,
        pi: StackyFan,
        refined: Scaffold,
        image_of: Option<Vec<usize>>,
    ) -> Result<ConfigurationFan> {
        if refined.n != scaffold.n || refined.d != scaffold.d {
            return Err(Error::Precondition("refined scaffold has different n or d".into()));
        }
        if pi.fan().rank() != scaffold.base_rank() {
            return Err(Error::Dimension("quotient fan has the wrong rank".into()));
        }
        let proj = scaffold.projection();
        let image_of = match image_of {
            Some(v) => v,
            None => images_in(&refined.fan, &proj, pi.fan())?,
        };
        let rcones = refined.fan.all_cones();
        let qcones = pi.fan().all_cones();
        let index = refined.fan.cone_index();
        let mut lattices = BTreeMap::new();
        if !pi.is_trivial() {
            for c in refined.fan.maximal_cones() {
                let rho = &qcones[image_of[index[c]]];
                let l = pi.sublattice(rho)?;
                lattices.insert(c.clone(), preimage_lattice(&proj, &l, &c.span_lattice()));
            }
        }
        debug_assert_eq!(rcones.len(), image_of.len());
        let refined_stacky = StackyFan::new(refined.fan.clone(), lattices)?;
        Ok(ConfigurationFan {
            scaffold,
            pi: Arc::new(pi),
            refined,
            refined_stacky: Arc::new(refined_stacky),
            image_of,
            fibers: OnceLock::new(),
            images: OnceLock::new(),
            certificates: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.scaffold.n
    }

    pub fn d(&self) -> usize {
        self.scaffold.d
    }

    pub fn pi_fan(&self) -> &Fan {
        self.pi.fan()
    }

    pub fn refined_scaffold(&self) -> &Scaffold {
        &self.refined
    }

    /// Index in `pi_fan().all_cones()` of the image of each refined cone.
    pub fn image_indices(&self) -> &[usize] {
        &self.image_of
    }

    /// Refined cones (indices into `refined.fan.all_cones()`) mapping onto each quotient cone.
    pub fn fibers(&self) -> &[Vec<usize>] {
        self.fibers.get_or_init(|| {
            let mut v = vec![Vec::new(); self.pi.fan().all_cones().len()];
            for (i, &j) in self.image_of.iter().enumerate() {
                v[j].push(i);
            }
            v
        })
    }

    pub fn images(&self) -> &[Cone] {
        self.images.get_or_init(|| full_dimensional_images(&self.scaffold))
    }

    pub fn projection_map(&self) -> FanMap {
        FanMap::new(self.scaffold.projection(), self.refined_stacky.clone(), self.pi.clone()).expect("ranks agree")
    }

    pub fn section_maps(&self) -> Vec<FanMap> {
        (0..=self.n())
            .map(|i| {
                FanMap::new(self.scaffold.section(i), self.pi.clone(), self.refined_stacky.clone())
                    .expect("ranks agree")
            })
            .collect()
    }

    pub fn check_terminality(&self) -> Check {
        check_terminality_of(self.images(), self.pi.fan())
    }

    /// Weak semistability of the projection and of every section, plus
    /// completeness, sublattice compatibility and terminality.
    pub fn certificates(&self) -> &Certificates {
        self.certificates.get_or_init(|| {
            let projection = self.projection_map().check_weakly_semistable();
            let sections: Vec<SemistabilityReport> = self
                .section_maps()
                .iter()
                .map(|m| m.check_weakly_semistable())
                .collect();
            let quotient_complete = self.pi.fan().check_complete();
            let quotient_fan = self.pi.fan().check_fan();
            let quotient_stacky = self.pi.check();
            let refined_stacky = self.refined_stacky.check();
            let terminality = self.check_terminality();
            let ok = projection.ok
                && sections.iter().all(|s| s.ok)
                && quotient_complete.ok
                && quotient_fan.ok
                && quotient_stacky.ok
                && refined_stacky.ok
                && terminality.ok;
            Certificates {
                ok,
                projection,
                sections,
                quotient_complete,
                quotient_fan,
                quotient_stacky,
                refined_stacky,
                terminality,
            }
        })
    }

    /// Sublattices of every quotient cone under the given rule, for comparison.
    pub fn lattices_with_rule(&self, rule: LatticeRule) -> Result<BTreeMap<Cone, LatticeBasis>> {
        quotient_lattices(
            &self.refined.fan,
            &self.image_of,
            &self.scaffold.projection(),
            self.pi.fan(),
            rule,
        )
    }
}
