//! Tropical scaffolds: complete fans on `V[n] × V` whose section images are
//! unions of cones.
//!
//! Coordinates are `(a_1, …, a_n, x)` with each entry a block of `d`
//! coordinates; the anchor point `a_0` is identically zero.

use rayon::prelude::*;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{
    chambers_within, common_refinement, covers, fan_from_arrangement, preimage_fan, product_fan, Arrangement, Check,
    Fan,
};
use crate::linalg::{Int, IntMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Scaffold {
    pub n: usize,
    pub d: usize,
    pub kind: String,
    pub fan: Fan,
}

/// Which cones of the scaffold cover one section image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionCover {
    pub index: usize,
    pub check: Check,
    /// Indices into `fan.all_cones()`.
    pub cones: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaffoldReport {
    pub ok: bool,
    pub fan: Check,
    pub complete: Check,
    pub sections: Vec<SectionCover>,
}

impl ScaffoldReport {
    pub fn first_failure(&self) -> Option<String> {
        if let Some(d) = &self.fan.detail {
            return Some(format!("fan axioms: {d}"));
        }
        if let Some(d) = &self.complete.detail {
            return Some(format!("completeness: {d}"));
        }
        self.sections
            .iter()
            .find(|s| !s.check.ok)
            .map(|s| format!("section {}: {}", s.index, s.check.detail.clone().unwrap_or_default()))
    }
}

/// The projection `V[n] × V → V[n]`.
pub fn projection_matrix(n: usize, d: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n * d, n * d + d);
    for k in 0..n * d {
        m.set(k, k, Int::ONE);
    }
    m
}

/// The section `p ↦ (p, p_i)` with `p_0 = 0`.
pub fn section_matrix(n: usize, d: usize, i: usize) -> IntMatrix {
    assert!(i <= n, "section index out of range");
    let mut m = IntMatrix::zeros(n * d + d, n * d);
    for k in 0..n * d {
        m.set(k, k, Int::ONE);
    }
    if i > 0 {
        for k in 0..d {
            m.set(n * d + k, (i - 1) * d + k, Int::ONE);
        }
    }
    m
}

/// The linear subspace `p_i(V[n])`.
pub fn section_image(n: usize, d: usize, i: usize) -> Cone {
    Cone::whole_space(n * d).linear_image(&section_matrix(n, d, i))
}

/// Linear form `x_k - a_{i,k}` on `V[n] × V` (with `a_0 = 0`).
pub fn x_minus_a(n: usize, d: usize, i: usize, k: usize) -> Vec<Int> {
    let mut v = vec![Int::ZERO; n * d + d];
    v[n * d + k] = Int::ONE;
    if i > 0 {
        v[(i - 1) * d + k] = -Int::ONE;
    }
    v
}

impl Scaffold {
    pub fn new(n: usize, d: usize, kind: impl Into<String>, fan: Fan) -> Result<Scaffold> {
        if d == 0 {
            return Err(Error::Precondition("scaffolds need d >= 1".into()));
        }
        if fan.rank() != n * d + d {
            return Err(Error::Dimension(format!(
                "fan of rank {} for n = {n}, d = {d} (expected {})",
                fan.rank(),
                n * d + d
            )));
        }
        Ok(Scaffold {
            n,
            d,
            kind: kind.into(),
            fan,
        })
    }

    pub fn rank(&self) -> usize {
        self.n * self.d + self.d
    }

    pub fn base_rank(&self) -> usize {
        self.n * self.d
    }

    pub fn projection(&self) -> IntMatrix {
        projection_matrix(self.n, self.d)
    }

    pub fn section(&self, i: usize) -> IntMatrix {
        section_matrix(self.n, self.d, i)
    }

    pub fn sections(&self) -> Vec<IntMatrix> {
        (0..=self.n).map(|i| self.section(i)).collect()
    }

    /// Fan axioms, completeness and the union-of-cones condition for every section.
    pub fn validate(&self) -> ScaffoldReport {
        let fan = self.fan.check_fan();
        let complete = self.fan.check_complete();
        let cones = self.fan.all_cones();
        let sections: Vec<SectionCover> = (0..=self.n)
            .into_par_iter()
            .map(|i| {
                let h = section_image(self.n, self.d, i);
                let idx: Vec<usize> = (0..cones.len())
                    .filter(|&j| cones[j].dim() == h.dim() && h.contains_cone(&cones[j]))
                    .collect();
                let pieces: Vec<Cone> = idx.iter().map(|&j| cones[j].clone()).collect();
                SectionCover {
                    index: i,
                    check: covers(&h, &pieces),
                    cones: idx,
                }
            })
            .collect();
        let ok = fan.ok && complete.ok && sections.iter().all(|s| s.check.ok);
        ScaffoldReport {
            ok,
            fan,
            complete,
            sections,
        }
    }

    fn validated(self) -> Result<Scaffold> {
        let r = self.validate();
        if r.ok {
            Ok(self)
        } else {
            Err(Error::Verification(format!(
                "{} scaffold is invalid: {}",
                self.kind,
                r.first_failure().unwrap_or_default()
            )))
        }
    }
}

/// The minimal scaffold for `d = 1`: the arrangement `{x = a_i}`, `i = 0..n`.
pub fn lambda0(n: usize) -> Scaffold {
    let normals = (0..=n).map(|i| x_minus_a(n, 1, i, 0)).collect();
    let fan = fan_from_arrangement(&Arrangement::new(n + 1, normals).expect("valid arrangement"));
    Scaffold::new(n, 1, "lambda0", fan).expect("rank matches")
}

/// The square scaffold for `d = 2`: `{x = a_i} ∪ {y = b_i}`.
pub fn lambda_square(n: usize) -> Scaffold {
    let mut normals = Vec::new();
    for i in 0..=n {
        normals.push(x_minus_a(n, 2, i, 0));
        normals.push(x_minus_a(n, 2, i, 1));
    }
    let fan = fan_from_arrangement(&Arrangement::new(2 * n + 2, normals).expect("valid arrangement"));
    Scaffold::new(n, 2, "square", fan).expect("rank matches")
}

/// `a_i + b_i` as a linear form on `V[n] × V` for `d = 2`.
fn antidiagonal_value(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![Int::ZERO; 2 * n + 2];
    if i > 0 {
        v[2 * (i - 1)] = Int::ONE;
        v[2 * (i - 1) + 1] = Int::ONE;
    }
    v
}

fn sub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Region where the antidiagonal value of point `i` is minimal.
pub(crate) fn apex_region(rank: usize, n: usize, i: usize, value: impl Fn(usize) -> Vec<Int>) -> Cone {
    let vi = value(i);
    let ineqs: Vec<Vec<Int>> = (0..=n).filter(|&j| j != i).map(|j| sub(&value(j), &vi)).collect();
    Cone::from_inequalities(rank, &ineqs, &[])
}

/// The bipermutahedral scaffold: on each region where `a_i + b_i` is minimal,
/// the square scaffold sliced by the antidiagonal `x + y = a_i + b_i`.
pub fn lambda_biperm(n: usize) -> Result<Scaffold> {
    let rank = 2 * n + 2;
    let pieces: Vec<Vec<Cone>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let region = apex_region(rank, n, i, |j| antidiagonal_value(n, j));
            let mut normals = Vec::new();
            for j in 0..=n {
                normals.push(x_minus_a(n, 2, j, 0));
                normals.push(x_minus_a(n, 2, j, 1));
            }
            let mut diag = vec![Int::ZERO; rank];
            diag[2 * n] = Int::ONE;
            diag[2 * n + 1] = Int::ONE;
            normals.push(sub(&diag, &antidiagonal_value(n, i)));
            let arr = Arrangement::new(rank, normals).expect("valid arrangement");
            chambers_within(&region, arr.normals())
        })
        .collect();
    let fan = Fan::from_maximal(rank, pieces.into_iter().flatten().collect());
    let check = fan.check_fan();
    if !check.ok {
        return Err(Error::Verification(format!(
            "gluing the apex regions failed: {}",
            check.detail.unwrap_or_default()
        )));
    }
    Scaffold::new(n, 2, "biperm", fan)
}

/// External product, with coordinates shuffled into `(a_i, b_i)` blocks.
pub fn product_scaffold(s1: &Scaffold, s2: &Scaffold) -> Result<Scaffold> {
    if s1.n != s2.n {
        return Err(Error::Precondition(format!(
            "product of scaffolds with n = {} and n = {}",
            s1.n, s2.n
        )));
    }
    let (n, d1, d2) = (s1.n, s1.d, s2.d);
    let d = d1 + d2;
    let prod = product_fan(&s1.fan, &s2.fan);
    let perm = interleave_matrix(n + 1, d1, d2);
    let fan = crate::fan::transform_fan(&prod, &perm);
    let fan = if s1.fan.is_complete() && s2.fan.is_complete() {
        fan.with_complete(true)
    } else {
        fan
    };
    Scaffold::new(n, d, "product", fan)
}

/// Permutation taking `(u_0..u_{m-1}, w_0..w_{m-1})` (blocks of size `d1`, `d2`)
/// to `(u_0, w_0, u_1, w_1, …)`.
pub fn interleave_matrix(blocks: usize, d1: usize, d2: usize) -> IntMatrix {
    let d = d1 + d2;
    let total = blocks * d;
    let mut m = IntMatrix::zeros(total, total);
    for b in 0..blocks {
        for k in 0..d1 {
            m.set(b * d + k, b * d1 + k, Int::ONE);
        }
        for k in 0..d2 {
            m.set(b * d + d1 + k, blocks * d1 + b * d2 + k, Int::ONE);
        }
    }
    m
}

/// The scaffold `Σ^{n+1}` obtained from a complete fan `Σ` on `N` via
/// `(a, x) ↦ (x - a_0, x - a_1, …, x - a_n)`.
pub fn scaffold_from_fan(sigma: &Fan, n: usize) -> Result<Scaffold> {
    let d = sigma.rank();
    if !sigma.is_complete() {
        return Err(Error::Precondition("scaffold_from_fan needs a complete fan".into()));
    }
    let mut power = sigma.clone();
    for _ in 0..n {
        power = product_fan(&power, sigma);
    }
    let rank = n * d + d;
    let mut phi = IntMatrix::zeros(rank, rank);
    for j in 0..=n {
        for k in 0..d {
            let row = x_minus_a(n, d, j, k);
            for (c, v) in row.into_iter().enumerate() {
                phi.set(j * d + k, c, v);
            }
        }
    }
    let fan = preimage_fan(&phi, &power)?.with_complete(true);
    Scaffold::new(n, d, "from-fan", fan)
}

/// Common refinement with another complete fan, revalidated.
pub fn refine_scaffold(s: &Scaffold, extra: &Fan) -> Result<Scaffold> {
    let fan = common_refinement(&[&s.fan, extra])?;
    Scaffold::new(s.n, s.d, "refined", fan)?.validated()
}

/// `lambda0(1)` refined along the ray `x = a_1 / 2`.
pub fn sqrt_stack_scaffold() -> Scaffold {
    let extra = fan_from_arrangement(&Arrangement::new(2, vec![crate::linalg::ints(&[-1, 2])]).expect("valid"));
    let mut s = refine_scaffold(&lambda0(1), &extra).expect("refinement of a scaffold is a scaffold");
    s.kind = "sqrt-stack".into();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    #[test]
    fn lambda0_counts() {
        assert_eq!(lambda0(0).fan.maximal_cones().len(), 2);
        assert_eq!(lambda0(1).fan.maximal_cones().len(), 4);
        // three independent normals: every sign vector is realized
        assert_eq!(lambda0(2).fan.maximal_cones().len(), 8);
        for n in 0..3 {
            assert!(lambda0(n).validate().ok, "lambda0({n})");
        }
    }

    #[test]
    fn sections_are_right_inverses() {
        let (n, d) = (3, 2);
        let p = projection_matrix(n, d);
        for i in 0..=n {
            assert_eq!(p.mul(&section_matrix(n, d, i)), IntMatrix::identity(n * d));
        }
    }

    #[test]
    fn non_scaffold_is_rejected() {
        let fan = fan_from_arrangement(&Arrangement::new(2, vec![ints(&[0, 1])]).unwrap());
        let s = Scaffold::new(1, 1, "custom", fan).unwrap();
        let r = s.validate();
        assert!(r.fan.ok && r.complete.ok);
        assert!(r.sections[0].check.ok);
        assert!(!r.sections[1].check.ok);
        assert!(!r.ok);
    }

    #[test]
    fn square_is_product() {
        let s = lambda_square(1);
        assert_eq!(s.fan.maximal_cones().len(), 16);
        let p = product_scaffold(&lambda0(1), &lambda0(1)).unwrap();
        assert_eq!(p.fan, s.fan);
        assert_eq!(lambda_square(0).fan.maximal_cones().len(), 4);
        assert!(product_scaffold(&lambda0(1), &lambda0(2)).is_err());
    }

    #[test]
    fn from_sign_fan_is_lambda0() {
        let pm = fan_from_arrangement(&Arrangement::new(1, vec![ints(&[1])]).unwrap());
        for n in 0..3 {
            assert_eq!(scaffold_from_fan(&pm, n).unwrap().fan, lambda0(n).fan);
        }
        let q = fan_from_arrangement(&Arrangement::new(2, vec![ints(&[1, 0]), ints(&[0, 1])]).unwrap());
        assert_eq!(scaffold_from_fan(&q, 1).unwrap().fan, lambda_square(1).fan);
        let half = Fan::from_maximal(1, vec![Cone::from_rays_i64(1, &[&[1]])]);
        assert!(scaffold_from_fan(&half, 1).is_err());
    }

    #[test]
    fn biperm_refines_square() {
        let b = lambda_biperm(1).unwrap();
        assert!(b.validate().ok);
        let s = lambda_square(1);
        assert!(b.fan.maximal_cones().len() > s.fan.maximal_cones().len());
        assert!(crate::fan::is_refinement(&b.fan, &s.fan).unwrap());
    }

    #[test]
    fn refine_by_itself_is_unchanged() {
        let s = lambda0(2);
        assert_eq!(refine_scaffold(&s, &s.fan).unwrap().fan, s.fan);
        let q = sqrt_stack_scaffold();
        assert_eq!(q.fan.maximal_cones().len(), 6);
    }
}
