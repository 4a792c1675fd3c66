//! Stacky fans: a fan together with a finite-index sublattice for each cone.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{Check, Fan};
use crate::linalg::{image_lattice, lattice_intersect, snf_invariants, Int, IntMatrix, LatticeBasis};

/// A fan with sublattices `L_σ ⊆ span(σ) ∩ Z^n`. Only cones listed in
/// `explicit` carry stored lattices; any other cone takes `L_σ ∩ span(τ)`
/// from a containing maximal cone, or the full saturated lattice.
#[derive(Clone, Debug)]
pub struct StackyFan {
    fan: Fan,
    explicit: BTreeMap<Cone, LatticeBasis>,
}

impl PartialEq for StackyFan {
    fn eq(&self, other: &Self) -> bool {
        self.fan == other.fan && self.explicit == other.explicit
    }
}

impl StackyFan {
    /// `L_σ = N_σ` everywhere.
    pub fn trivial(fan: Fan) -> StackyFan {
        StackyFan {
            fan,
            explicit: BTreeMap::new(),
        }
    }

    /// Attach lattices to some cones. Entries equal to the saturated lattice are dropped.
    pub fn new(fan: Fan, lattices: BTreeMap<Cone, LatticeBasis>) -> Result<StackyFan> {
        let mut explicit = BTreeMap::new();
        for (c, l) in lattices {
            if !fan.contains_cone(&c) {
                return Err(Error::NotFound(format!("cone {c:?} is not in the fan")));
            }
            if l.ambient() != fan.rank() {
                return Err(Error::Dimension("sublattice ambient rank differs from fan".into()));
            }
            if l != c.span_lattice() {
                explicit.insert(c, l);
            }
        }
        Ok(StackyFan { fan, explicit })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn explicit(&self) -> &BTreeMap<Cone, LatticeBasis> {
        &self.explicit
    }

    pub fn is_trivial(&self) -> bool {
        self.explicit.is_empty()
    }

    /// `L_σ` for any cone of the fan.
    pub fn sublattice(&self, c: &Cone) -> Result<LatticeBasis> {
        if let Some(l) = self.explicit.get(c) {
            return Ok(l.clone());
        }
        let owners = self.fan.maximal_containing(c);
        if owners.is_empty() {
            return Err(Error::NotFound(format!("cone {c:?} is not in the fan")));
        }
        if self.explicit.is_empty() {
            return Ok(c.span_lattice());
        }
        let sigma = &self.fan.maximal_cones()[owners[0]];
        match self.explicit.get(sigma) {
            Some(l) => Ok(lattice_intersect(l, &c.span_lattice())),
            None => Ok(c.span_lattice()),
        }
    }

    /// Index `[N_σ : L_σ]`.
    pub fn index(&self, c: &Cone) -> Result<Int> {
        let l = self.sublattice(c)?;
        l.index_in(&c.span_lattice())
            .ok_or_else(|| Error::Verification(format!("sublattice of {c:?} is not of finite index")))
    }

    /// Invariant factors of `N_σ / L_σ` other than 1.
    pub fn isotropy(&self, c: &Cone) -> Result<Vec<Int>> {
        isotropy_of(&self.sublattice(c)?, &c.span_lattice())
    }

    /// Finite index in `N_σ` for stored lattices, and `L_τ = L_σ ∩ span(τ)`
    /// for every face `τ` of every maximal cone `σ`.
    pub fn check(&self) -> Check {
        for (c, l) in &self.explicit {
            let n = c.span_lattice();
            if l.rank() != n.rank() || !n.contains_lattice(l) {
                return Check::fail(format!(
                    "sublattice of {c:?} is not a finite-index sublattice of its span"
                ));
            }
        }
        if self.explicit.is_empty() {
            return Check::pass();
        }
        let maximal = self.fan.maximal_cones();
        let cones = self.fan.all_cones();
        let bad = cones.par_iter().find_map_first(|tau| {
            let own = match self.sublattice(tau) {
                Ok(l) => l,
                Err(e) => return Some(e.to_string()),
            };
            let span = tau.span_lattice();
            for &i in self.fan.maximal_containing(tau) {
                let sigma = &maximal[i];
                let ls = self
                    .explicit
                    .get(sigma)
                    .cloned()
                    .unwrap_or_else(|| sigma.span_lattice());
                if lattice_intersect(&ls, &span) != own {
                    return Some(format!(
                        "face {tau:?} of maximal cone {i} carries {own:?}, restriction gives {:?}",
                        lattice_intersect(&ls, &span)
                    ));
                }
            }
            None
        });
        match bad {
            None => Check::pass(),
            Some(d) => Check::fail(d),
        }
    }
}

/// Invariant factors (other than 1) of `outer / inner` for lattices of equal rank.
pub fn isotropy_of(inner: &LatticeBasis, outer: &LatticeBasis) -> Result<Vec<Int>> {
    let coords = inner
        .coordinates_in(outer)
        .ok_or_else(|| Error::Precondition("sublattice is not contained in the span lattice".into()))?;
    if inner.rank() != outer.rank() {
        return Err(Error::Precondition("sublattice does not have full rank".into()));
    }
    let m = IntMatrix::from_rows(outer.rank(), coords);
    Ok(snf_invariants(&m).into_iter().filter(|x| *x != Int::ONE).collect())
}

/// A linear map between stacky fans (target × source matrix).
#[derive(Clone, Debug)]
pub struct FanMap {
    pub matrix: IntMatrix,
    pub source: Arc<StackyFan>,
    pub target: Arc<StackyFan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistabilityReport {
    pub ok: bool,
    pub surjective: bool,
    pub cones_checked: usize,
    pub violations: Vec<String>,
}

const MAX_VIOLATIONS: usize = 20;

impl FanMap {
    pub fn new(matrix: IntMatrix, source: Arc<StackyFan>, target: Arc<StackyFan>) -> Result<FanMap> {
        if matrix.ncols() != source.fan.rank() || matrix.nrows() != target.fan.rank() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix between fans of rank {} and {}",
                matrix.nrows(),
                matrix.ncols(),
                source.fan.rank(),
                target.fan.rank()
            )));
        }
        Ok(FanMap { matrix, source, target })
    }

    /// Every source cone maps onto a target cone, with matching sublattices.
    pub fn check_weakly_semistable(&self) -> SemistabilityReport {
        let cones = self.source.fan.all_cones();
        let mut violations: Vec<(usize, String)> = cones
            .par_iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let img = c.linear_image(&self.matrix);
                if !self.target.fan.contains_cone(&img) {
                    return Some((
                        i,
                        format!("source cone {c:?} maps to {img:?}, which is not a target cone"),
                    ));
                }
                let l = match self.source.sublattice(c) {
                    Ok(l) => l,
                    Err(e) => return Some((i, e.to_string())),
                };
                let mapped = image_lattice(&self.matrix, &l);
                match self.target.sublattice(&img) {
                    Ok(t) if t == mapped => None,
                    Ok(t) => Some((
                        i,
                        format!("source cone {c:?}: image lattice {mapped:?} differs from target lattice {t:?}"),
                    )),
                    Err(e) => Some((i, e.to_string())),
                }
            })
            .collect();
        violations.sort_by_key(|(i, _)| *i);
        let ok = violations.is_empty();
        SemistabilityReport {
            ok,
            surjective: self.matrix.rank() == self.matrix.nrows(),
            cones_checked: cones.len(),
            violations: violations.into_iter().take(MAX_VIOLATIONS).map(|(_, s)| s).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{fan_from_arrangement, Arrangement};
    use crate::linalg::{int, ints};

    fn line_fan() -> Fan {
        fan_from_arrangement(&Arrangement::new(1, vec![ints(&[1])]).unwrap())
    }

    #[test]
    fn trivial_has_no_isotropy() {
        let s = StackyFan::trivial(line_fan());
        for c in s.fan().all_cones() {
            assert!(s.isotropy(c).unwrap().is_empty());
        }
        assert!(s.check().ok);
        let z = Fan::from_maximal(2, vec![Cone::zero(2)]);
        let zs = StackyFan::trivial(z);
        assert_eq!(zs.sublattice(&Cone::zero(2)).unwrap().rank(), 0);
    }

    #[test]
    fn index_two_rays() {
        let f = line_fan();
        let mut m = BTreeMap::new();
        for c in f.maximal_cones() {
            let l = LatticeBasis::from_generators(1, vec![c.rays()[0].iter().map(|x| x * int(2)).collect()]);
            m.insert(c.clone(), l);
        }
        let s = StackyFan::new(f.clone(), m).unwrap();
        assert!(s.check().ok);
        for c in f.maximal_cones() {
            assert_eq!(s.isotropy(c).unwrap(), vec![int(2)]);
        }
        assert!(s.isotropy(&Cone::zero(1)).unwrap().is_empty());
    }

    #[test]
    fn isotropy_distinguishes_products() {
        let outer = LatticeBasis::full(2);
        let a = LatticeBasis::from_generators(2, vec![ints(&[2, 0]), ints(&[0, 2])]);
        let b = LatticeBasis::from_generators(2, vec![ints(&[4, 0]), ints(&[0, 1])]);
        assert_eq!(isotropy_of(&a, &outer).unwrap(), ints(&[2, 2]));
        assert_eq!(isotropy_of(&b, &outer).unwrap(), ints(&[4]));
    }

    #[test]
    fn incompatible_face_fails() {
        let f = fan_from_arrangement(&Arrangement::new(2, vec![ints(&[1, 0]), ints(&[0, 1])]).unwrap());
        let ray = Cone::from_rays_i64(2, &[&[1, 0]]);
        let mut m = BTreeMap::new();
        m.insert(ray, LatticeBasis::from_generators(2, vec![ints(&[2, 0])]));
        let s = StackyFan::new(f, m).unwrap();
        assert!(!s.check().ok);
    }

    #[test]
    fn semistability() {
        let f = Arc::new(StackyFan::trivial(line_fan()));
        let id = FanMap::new(IntMatrix::identity(1), f.clone(), f.clone()).unwrap();
        assert!(id.check_weakly_semistable().ok);
        let half = Fan::from_maximal(1, vec![Cone::from_rays_i64(1, &[&[1]])]);
        let bad = FanMap::new(IntMatrix::identity(1), f, Arc::new(StackyFan::trivial(half))).unwrap();
        let r = bad.check_weakly_semistable();
        assert!(!r.ok);
        assert_eq!(r.violations.len(), 1);
    }
}
