//! Strata of a configuration fan: fiber complexes, marking vertices,
//! tropical position maps, rubber data and component fans.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::chow::ConfigurationFan;
use crate::cone::{Cone, Position};
use crate::error::{Error, Result};
use crate::fan::{Check, Fan};
use crate::linalg::{
    primitive_from_rat, snf_invariants, solve_rational, to_rat_vec, Int, IntMatrix, LatticeBasis, Rat,
};
use crate::scaffold::section_image;

/// A polyhedron in `V` given by vertices, rays and lineality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicePolyhedron {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Int>>,
    pub lineality: Vec<Vec<Int>>,
    /// `{(s, x) : s >= 0, (s p, x) ∈ λ}`.
    homogenized: Cone,
}

impl SlicePolyhedron {
    pub fn dim(&self) -> usize {
        self.homogenized.dim().saturating_sub(1)
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn contains_point(&self, v: &[Rat]) -> bool {
        let mut w = vec![Rat::ONE];
        w.extend(v.iter().cloned());
        self.homogenized.locate_point(&w) != Position::Outside
    }

    pub fn contains(&self, other: &SlicePolyhedron) -> bool {
        self.homogenized.contains_cone(&other.homogenized)
    }

    /// Vertices of the intersection with the box `|x_k - center_k| <= radius`.
    pub fn clipped(&self, center: &[Rat], radius: &Rat) -> Vec<Vec<Rat>> {
        let d = center.len();
        let mut gens = center.to_vec();
        gens.push(radius.clone());
        // scale so that all box data is integral
        let scale = gens.iter().fold(Int::ONE, |acc, x| {
            let den = Int::from(x.denominator().clone());
            let g = crate::linalg::gcd(&acc, &den);
            acc * den / g
        });
        let c: Vec<Int> = center
            .iter()
            .map(|x| (x * Rat::from(scale.clone())).into_parts().0)
            .collect();
        let r: Int = (radius * Rat::from(scale.clone())).into_parts().0;
        let mut ineqs: Vec<Vec<Int>> = self.homogenized.facet_normals().to_vec();
        for k in 0..d {
            // scale x_k <= (c_k + r) s  and  scale x_k >= (c_k - r) s
            let mut up = vec![Int::ZERO; d + 1];
            up[0] = &c[k] + &r;
            up[k + 1] = -scale.clone();
            let mut lo = vec![Int::ZERO; d + 1];
            lo[0] = &r - &c[k];
            lo[k + 1] = scale.clone();
            ineqs.push(up);
            ineqs.push(lo);
        }
        let boxed = Cone::from_inequalities(d + 1, &ineqs, self.homogenized.equations());
        boxed
            .rays()
            .iter()
            .filter(|v| !v[0].is_zero())
            .map(|v| {
                let s = Rat::from(v[0].clone());
                v[1..].iter().map(|x| Rat::from(x.clone()) / &s).collect()
            })
            .collect()
    }
}

/// The slice `{x : (p, x) ∈ λ}` of a cone of `V[n] × V`.
pub fn slice(lambda: &Cone, p: &[Rat], d: usize) -> SlicePolyhedron {
    let nd = p.len();
    let big = primitive_from_rat(&{
        let mut v = vec![Rat::ONE];
        v.extend(p.iter().cloned());
        v
    });
    // big = k (1, p) for some k > 0
    let (s_coef, p_int) = (big[0].clone(), &big[1..]);
    let h = lambda.hrep();
    let lift = |f: &Vec<Int>| -> Vec<Int> {
        let mut g = vec![crate::linalg::dot(&f[..nd], p_int)];
        g.extend(f[nd..].iter().map(|x| x * &s_coef));
        g
    };
    let mut ineqs: Vec<Vec<Int>> = h.facets.iter().map(lift).collect();
    let mut unit = vec![Int::ZERO; d + 1];
    unit[0] = Int::ONE;
    ineqs.push(unit);
    let eqs: Vec<Vec<Int>> = h.equations.iter().map(lift).collect();
    let homogenized = Cone::from_inequalities(d + 1, &ineqs, &eqs);
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in homogenized.rays() {
        if r[0].is_zero() {
            rays.push(r[1..].to_vec());
        } else {
            let s = Rat::from(r[0].clone());
            vertices.push(r[1..].iter().map(|x| Rat::from(x.clone()) / &s).collect());
        }
    }
    let lineality = homogenized
        .lineality()
        .basis()
        .iter()
        .map(|l| l[1..].to_vec())
        .collect();
    SlicePolyhedron {
        vertices,
        rays,
        lineality,
        homogenized,
    }
}

/// One polyhedron of a fiber complex.
#[derive(Clone, Debug)]
pub struct FiberCell {
    /// Cone of the refined scaffold mapping onto the stratum cone.
    pub cone: Cone,
    /// Index into `refined.fan.all_cones()`.
    pub refined_index: usize,
    /// Dimension of the polyhedron: `dim λ - dim ρ`.
    pub dim: usize,
    /// Cells (indices in the complex) that are faces of this one, itself excluded.
    pub faces: Vec<usize>,
    pub polyhedron: SlicePolyhedron,
}

/// The polyhedral decomposition of `V` over a relative-interior point of a quotient cone.
#[derive(Clone, Debug)]
pub struct FiberComplex {
    pub n: usize,
    pub d: usize,
    pub rho: Cone,
    /// Index into `pi_fan().all_cones()`.
    pub rho_index: usize,
    pub base_point: Vec<Rat>,
    pub cells: Vec<FiberCell>,
}

impl FiberComplex {
    /// Cell indices of the vertices (0-dimensional polyhedra).
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim == 0).collect()
    }

    pub fn cells_of_dim(&self, k: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim == k).collect()
    }

    pub fn bounded_edges(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.dim == 1 && c.polyhedron.is_bounded())
            .count()
    }

    /// Cell counts by polyhedron dimension `0..=d`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.d + 1];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    /// `(cell, face)` pairs of the face poset, by cell index.
    pub fn face_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            for &f in &c.faces {
                v.push((i, f));
            }
        }
        v
    }

    /// Position of a vertex at the base point.
    pub fn vertex_position(&self, v: usize) -> &[Rat] {
        &self.cells[v].polyhedron.vertices[0]
    }
}

/// The fiber complex over a relative-interior point of `rho`.
pub fn fiber_complex(cf: &ConfigurationFan, rho: &Cone) -> Result<FiberComplex> {
    let idx = *cf
        .pi_fan()
        .cone_index()
        .get(rho)
        .ok_or_else(|| Error::NotFound(format!("{rho:?} is not a cone of the configuration fan")))?;
    let p = to_rat_vec(&rho.relative_interior_point());
    fiber_complex_at(cf, idx, &p)
}

/// The fiber complex of quotient cone `rho_index` over the point `p` in its relative interior.
pub fn fiber_complex_at(cf: &ConfigurationFan, rho_index: usize, p: &[Rat]) -> Result<FiberComplex> {
    let rho = cf.pi_fan().all_cones()[rho_index].clone();
    if rho.locate_point(p) != Position::RelativeInterior {
        return Err(Error::Precondition(
            "sample point is not in the relative interior".into(),
        ));
    }
    let rcones = cf.refined.fan.all_cones();
    let mut members: Vec<usize> = cf.fibers()[rho_index].clone();
    members.sort_by(|&a, &b| rcones[a].cmp(&rcones[b]));
    let d = cf.d();
    let polys: Vec<SlicePolyhedron> = members.par_iter().map(|&i| slice(&rcones[i], p, d)).collect();
    let cells: Vec<FiberCell> = members
        .iter()
        .zip(polys)
        .enumerate()
        .map(|(k, (&i, poly))| {
            let cone = rcones[i].clone();
            let faces = members
                .iter()
                .enumerate()
                .filter(|&(j, &m)| j != k && rcones[m].dim() < cone.dim() && cone.contains_cone(&rcones[m]))
                .map(|(j, _)| j)
                .collect();
            FiberCell {
                dim: cone.dim() - rho.dim(),
                cone,
                refined_index: i,
                faces,
                polyhedron: poly,
            }
        })
        .collect();
    Ok(FiberComplex {
        n: cf.n(),
        d,
        rho,
        rho_index,
        base_point: p.to_vec(),
        cells,
    })
}

/// For each marking `i`, the vertex cell whose cone lies in the section image `H_i`.
pub fn marking_vertices(fc: &FiberComplex) -> Result<Vec<usize>> {
    (0..=fc.n)
        .map(|i| {
            let h = section_image(fc.n, fc.d, i);
            let found: Vec<usize> = fc
                .vertices()
                .into_iter()
                .filter(|&v| h.contains_cone(&fc.cells[v].cone))
                .collect();
            match found.as_slice() {
                [v] => Ok(*v),
                _ => Err(Error::Verification(format!(
                    "marking {i} is supported on {} vertices instead of one",
                    found.len()
                ))),
            }
        })
        .collect()
}

/// A vertex position as a linear function of the stratum parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPositionMap {
    /// Cell index of the vertex in its fiber complex.
    pub vertex: usize,
    /// `d × rank(L_ρ)` integer matrix on the Hermite basis of `L_ρ`.
    pub matrix: IntMatrix,
    /// `d × dim ρ` rational matrix on the Hermite basis of `span(ρ) ∩ Z^{nd}`.
    pub on_span: Vec<Vec<Rat>>,
}

fn lift_through(cone: &Cone, nd: usize, u: &[Int]) -> Result<Vec<Rat>> {
    let basis = cone.span_lattice();
    let b = basis.basis();
    // columns: projections of the basis vectors
    let m = IntMatrix::from_rows(
        b.len(),
        (0..nd).map(|k| b.iter().map(|r| r[k].clone()).collect()).collect(),
    );
    let c = solve_rational(&m, &to_rat_vec(u))
        .ok_or_else(|| Error::Verification(format!("{u:?} does not lift through {cone:?}")))?;
    let total = cone.rank();
    let mut x = vec![Rat::ZERO; total - nd];
    for (coef, row) in c.iter().zip(b) {
        for (xk, r) in x.iter_mut().zip(&row[nd..]) {
            *xk += coef * Rat::from(r.clone());
        }
    }
    Ok(x)
}

fn position_map(fc: &FiberComplex, v: usize, lrho: &LatticeBasis) -> Result<TropicalPositionMap> {
    let nd = fc.n * fc.d;
    let cone = &fc.cells[v].cone;
    let span = fc.rho.span_lattice();
    let mut on_span = vec![Vec::with_capacity(span.rank()); fc.d];
    for u in span.basis() {
        let x = lift_through(cone, nd, u)?;
        for (row, val) in on_span.iter_mut().zip(x) {
            row.push(val);
        }
    }
    let mut matrix = IntMatrix::zeros(fc.d, lrho.rank());
    for (j, u) in lrho.basis().iter().enumerate() {
        let x = lift_through(cone, nd, u)?;
        for (k, val) in x.into_iter().enumerate() {
            if !val.is_int() {
                return Err(Error::Verification(format!(
                    "position map of vertex {v} is not integral on L_rho"
                )));
            }
            matrix.set(k, j, val.into_parts().0);
        }
    }
    Ok(TropicalPositionMap {
        vertex: v,
        matrix,
        on_span,
    })
}

/// Position maps of every vertex, on the lattice `lrho` of the stratum cone.
pub fn position_maps(fc: &FiberComplex, lrho: &LatticeBasis) -> Result<BTreeMap<usize, TropicalPositionMap>> {
    fc.vertices()
        .into_iter()
        .map(|v| position_map(fc, v, lrho).map(|m| (v, m)))
        .collect()
}

impl TropicalPositionMap {
    /// Coefficients of the map in the coordinates given by linear `forms` on
    /// `V[n]`; the forms restricted to `span(ρ)` must be a basis of its dual.
    /// Row `k` gives the `k`-th coordinate of the position as a combination of the forms.
    pub fn in_coordinates(&self, rho: &Cone, forms: &[Vec<Int>]) -> Result<Vec<Vec<Rat>>> {
        let span = rho.span_lattice();
        let r = span.rank();
        if forms.len() != r {
            return Err(Error::Precondition(format!(
                "need {r} coordinate forms, got {}",
                forms.len()
            )));
        }
        // a[k][j] = form_k(u_j)
        let a: Vec<Vec<Int>> = forms
            .iter()
            .map(|f| span.basis().iter().map(|u| crate::linalg::dot(f, u)).collect())
            .collect();
        let a_mat = IntMatrix::from_rows(r, a);
        if a_mat.det().is_zero() {
            return Err(Error::Precondition(
                "coordinate forms are not independent on the cone".into(),
            ));
        }
        // W A = Φ, solved row by row as A^T w = φ_row
        let at = a_mat.transpose();
        self.on_span
            .iter()
            .map(|row| solve_rational(&at, row).ok_or_else(|| Error::Verification("singular coordinate change".into())))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// The torus acting on a stratum, and how it moves the vertices.
#[derive(Clone, Debug)]
pub struct RubberData {
    pub rho: Cone,
    pub rubber_lattice: LatticeBasis,
    pub weights: BTreeMap<usize, TropicalPositionMap>,
    pub markings: Vec<usize>,
    pub stratum_dim: usize,
    /// Stacked marking position maps equal the inclusion `L_ρ ⊆ N[n]`.
    pub gluing_ok: bool,
    /// Invariant factors (other than 1) of the stacked weight matrix.
    pub stabilizer: Vec<Int>,
}

pub fn rubber_data(cf: &ConfigurationFan, fc: &FiberComplex) -> Result<RubberData> {
    let lrho = cf.pi.sublattice(&fc.rho)?;
    let weights = position_maps(fc, &lrho)?;
    let markings = marking_vertices(fc)?;
    let nd = fc.n * fc.d;
    let mut stacked = IntMatrix::zeros(nd, lrho.rank());
    for i in 1..=fc.n {
        let m = &weights[&markings[i]].matrix;
        for k in 0..fc.d {
            for j in 0..lrho.rank() {
                stacked.set((i - 1) * fc.d + k, j, m.get(k, j).clone());
            }
        }
    }
    let inclusion = IntMatrix::from_rows(nd, lrho.basis().to_vec()).transpose();
    let gluing_ok = lrho.rank() == 0 || stacked == inclusion;
    let mut all_rows = Vec::new();
    for w in weights.values() {
        all_rows.extend(w.matrix.rows_vec());
    }
    let stabilizer = if lrho.rank() == 0 || all_rows.is_empty() {
        Vec::new()
    } else {
        snf_invariants(&IntMatrix::from_rows(lrho.rank(), all_rows))
            .into_iter()
            .filter(|x| *x != Int::ONE)
            .collect()
    };
    Ok(RubberData {
        rho: fc.rho.clone(),
        rubber_lattice: lrho,
        weights,
        markings,
        stratum_dim: nd - fc.rho.dim(),
        gluing_ok,
        stabilizer,
    })
}

/// The fan of the component at vertex `v`: tangent cones at `v` of every
/// polyhedron containing it.
pub fn component_fan(fc: &FiberComplex, v: usize) -> Result<Fan> {
    let vcell = fc
        .cells
        .get(v)
        .filter(|c| c.dim == 0)
        .ok_or_else(|| Error::Precondition(format!("cell {v} is not a vertex")))?;
    let nd = fc.n * fc.d;
    let total = nd + fc.d;
    let vspan = vcell.cone.span_lattice();
    let a_block: Vec<Vec<Int>> = (0..nd)
        .map(|k| {
            let mut e = vec![Int::ZERO; total];
            e[k] = Int::ONE;
            e
        })
        .collect();
    let mut proj = IntMatrix::zeros(fc.d, total);
    for k in 0..fc.d {
        proj.set(k, nd + k, Int::ONE);
    }
    let cones: Vec<Cone> = fc
        .cells
        .par_iter()
        .filter(|c| c.dim > 0 && c.cone.contains_cone(&vcell.cone))
        .map(|c| {
            let mut lin: Vec<Vec<Int>> = c.cone.lineality().basis().to_vec();
            lin.extend(vspan.basis().iter().cloned());
            let tangent = Cone::from_generators(total, c.cone.rays(), &lin);
            let mut eqs = tangent.equations().to_vec();
            eqs.extend(a_block.iter().cloned());
            let restricted = Cone::from_inequalities(total, tangent.facet_normals(), &eqs);
            restricted.linear_image(&proj)
        })
        .collect();
    Ok(Fan::from_cones(fc.d, cones))
}

/// Everything known about the stratum of one quotient cone.
#[derive(Clone, Debug)]
pub struct StratumReport {
    pub fiber: FiberComplex,
    pub rubber: RubberData,
    pub isotropy: Vec<Int>,
    /// Maximal cones of the component fan at each vertex.
    pub component_sizes: BTreeMap<usize, usize>,
    /// Weights in the primitive facet-normal coordinates of `ρ`, when those form a dual basis.
    pub facet_weights: Option<BTreeMap<usize, Vec<Vec<Rat>>>>,
}

pub fn stratum_report(cf: &ConfigurationFan, rho: &Cone) -> Result<StratumReport> {
    let fc = fiber_complex(cf, rho)?;
    report_for(cf, fc)
}

fn report_for(cf: &ConfigurationFan, fc: FiberComplex) -> Result<StratumReport> {
    let rubber = rubber_data(cf, &fc)?;
    let isotropy = cf.pi.isotropy(&fc.rho)?;
    let component_sizes = fc
        .vertices()
        .into_iter()
        .map(|v| component_fan(&fc, v).map(|f| (v, f.maximal_cones().len())))
        .collect::<Result<_>>()?;
    let facets = fc.rho.facet_normals().to_vec();
    let facet_weights = if facets.len() == fc.rho.dim() && fc.rho.dim() > 0 {
        rubber
            .weights
            .iter()
            .map(|(&v, w)| w.in_coordinates(&fc.rho, &facets).map(|c| (v, c)))
            .collect::<Result<BTreeMap<_, _>>>()
            .ok()
    } else {
        None
    };
    Ok(StratumReport {
        fiber: fc,
        rubber,
        isotropy,
        component_sizes,
        facet_weights,
    })
}

/// The quotient cone whose relative interior contains `p`, with its stratum report.
pub fn locate(cf: &ConfigurationFan, p: &[Rat]) -> Result<(usize, StratumReport)> {
    let nd = cf.n() * cf.d();
    if p.len() != nd {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, expected {nd}",
            p.len()
        )));
    }
    let cones = cf.pi_fan().all_cones();
    let idx = cones
        .iter()
        .position(|c| c.locate_point(p) == Position::RelativeInterior)
        .ok_or_else(|| Error::Verification("no quotient cone contains the point".into()))?;
    let fc = fiber_complex_at(cf, idx, p)?;
    Ok((idx, report_for(cf, fc)?))
}

/// A relative-interior point `sum c_k r_k + sum l_j m_j` with `c_k` in `1..=9`
/// and lineality coefficients `l_j` in `-5..=5`.
pub fn random_relint_point<R: rand::Rng>(cone: &Cone, rng: &mut R) -> Vec<Rat> {
    use rand::RngExt;
    let mut p = vec![Int::ZERO; cone.rank()];
    for r in cone.rays() {
        let c = Int::from(rng.random_range(1..=9i64));
        for (x, y) in p.iter_mut().zip(r) {
            *x += &c * y;
        }
    }
    for l in cone.lineality().basis() {
        let c = Int::from(rng.random_range(-5..=5i64));
        for (x, y) in p.iter_mut().zip(l) {
            *x += &c * y;
        }
    }
    to_rat_vec(&p)
}

/// Face poset of a fiber complex read off from the slice polyhedra
/// themselves: pairs of refined-cone indices `(big, small)` with the slice of
/// `small` strictly inside that of `big`.
pub fn geometric_poset(fc: &FiberComplex) -> Result<Vec<(usize, usize)>> {
    for (i, c) in fc.cells.iter().enumerate() {
        if c.polyhedron.dim() != c.dim {
            return Err(Error::Verification(format!(
                "cell {i} has slice dimension {}",
                c.polyhedron.dim()
            )));
        }
    }
    let mut pairs: Vec<(usize, usize)> = fc
        .cells
        .par_iter()
        .flat_map_iter(|a| {
            fc.cells.iter().filter_map(move |b| {
                (a.refined_index != b.refined_index && a.polyhedron.contains(&b.polyhedron))
                    .then_some((a.refined_index, b.refined_index))
            })
        })
        .collect();
    pairs.sort();
    for &(a, b) in &pairs {
        if pairs.binary_search(&(b, a)).is_ok() {
            return Err(Error::Verification(format!(
                "refined cones {a} and {b} have the same slice"
            )));
        }
    }
    Ok(pairs)
}

/// The slice face poset at `p` and `q` agree with each other and with the
/// combinatorial one.
pub fn check_fiber_constancy(cf: &ConfigurationFan, rho_index: usize, p: &[Rat], q: &[Rat]) -> Check {
    let run = || -> Result<Option<String>> {
        let a = fiber_complex_at(cf, rho_index, p)?;
        let b = fiber_complex_at(cf, rho_index, q)?;
        let (ga, gb) = (geometric_poset(&a)?, geometric_poset(&b)?);
        if ga != gb {
            return Ok(Some(format!("cone {rho_index}: slice posets differ between samples")));
        }
        let mut comb: Vec<(usize, usize)> = a
            .face_pairs()
            .into_iter()
            .map(|(i, j)| (a.cells[i].refined_index, a.cells[j].refined_index))
            .collect();
        comb.sort();
        if comb != ga {
            return Ok(Some(format!(
                "cone {rho_index}: slice poset differs from the cone poset"
            )));
        }
        Ok(None)
    };
    match run() {
        Ok(None) => Check::pass(),
        Ok(Some(d)) => Check::fail(d),
        Err(e) => Check::fail(e.to_string()),
    }
}

/// Anchor, gluing and dimension invariants on the stratum of every quotient cone.
pub fn check_all_strata(cf: &ConfigurationFan) -> Check {
    let nd = cf.n() * cf.d();
    let bad = (0..cf.pi_fan().all_cones().len())
        .into_par_iter()
        .find_map_first(|idx| {
            let rho = &cf.pi_fan().all_cones()[idx];
            let p = to_rat_vec(&rho.relative_interior_point());
            let run = || -> Result<Option<String>> {
                let fc = fiber_complex_at(cf, idx, &p)?;
                let r = rubber_data(cf, &fc)?;
                if !r.weights[&r.markings[0]].is_zero() {
                    return Ok(Some(format!("cone {idx}: marking 0 moves")));
                }
                if !r.gluing_ok {
                    return Ok(Some(format!(
                        "cone {idx}: marking position maps differ from the inclusion"
                    )));
                }
                if r.stratum_dim + rho.dim() != nd {
                    return Ok(Some(format!("cone {idx}: stratum dimension {}", r.stratum_dim)));
                }
                Ok(None)
            };
            match run() {
                Ok(x) => x,
                Err(e) => Some(format!("cone {idx}: {e}")),
            }
        });
    match bad {
        None => Check::pass(),
        Some(d) => Check::fail(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::configuration_fan;
    use crate::linalg::{int, ints, rat};
    use crate::scaffold::{lambda0, sqrt_stack_scaffold};

    #[test]
    fn chain_of_three() {
        let cf = configuration_fan(&lambda0(3)).unwrap();
        let p = vec![rat(1, 1), rat(1, 1), rat(2, 1)];
        let (_, r) = locate(&cf, &p).unwrap();
        assert_eq!(r.fiber.rho.dim(), 2);
        assert_eq!(r.fiber.vertices().len(), 3);
        assert_eq!(r.fiber.bounded_edges(), 2);
        assert_eq!(r.fiber.f_vector(), vec![3, 4]);
        let m = &r.rubber.markings;
        assert_eq!(m[1], m[2]);
        assert!(m[0] != m[1] && m[1] != m[3] && m[0] != m[3]);
        let forms = vec![ints(&[1, 0, 0]), ints(&[-1, 0, 1])];
        let w0 = r.rubber.weights[&m[0]].in_coordinates(&r.fiber.rho, &forms).unwrap();
        let w1 = r.rubber.weights[&m[1]].in_coordinates(&r.fiber.rho, &forms).unwrap();
        let w3 = r.rubber.weights[&m[3]].in_coordinates(&r.fiber.rho, &forms).unwrap();
        assert_eq!(w0, vec![vec![rat(0, 1), rat(0, 1)]]);
        assert_eq!(w1, vec![vec![rat(1, 1), rat(0, 1)]]);
        assert_eq!(w3, vec![vec![rat(1, 1), rat(1, 1)]]);
        assert!(r.rubber.gluing_ok);
        assert_eq!(r.rubber.stratum_dim, 1);
        for (&v, &k) in &r.component_sizes {
            assert_eq!(k, 2, "vertex {v}");
        }
    }

    #[test]
    fn origin_is_generic() {
        let cf = configuration_fan(&lambda0(2)).unwrap();
        let (_, r) = locate(&cf, &[rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(r.fiber.rho.dim(), 0);
        assert_eq!(r.fiber.vertices().len(), 1);
        assert!(r.rubber.markings.iter().all(|&m| m == r.rubber.markings[0]));
        assert_eq!(r.rubber.stratum_dim, 2);
    }

    #[test]
    fn sqrt_stack_weight_is_two() {
        let cf = configuration_fan(&sqrt_stack_scaffold()).unwrap();
        let (_, r) = locate(&cf, &[rat(3, 1)]).unwrap();
        assert_eq!(r.isotropy, vec![int(2)]);
        let v1 = r.rubber.markings[1];
        assert_eq!(r.rubber.weights[&v1].matrix, IntMatrix::from_i64(&[&[2]]));
        assert_eq!(r.fiber.vertices().len(), 3);
    }

    #[test]
    fn constancy_on_chain() {
        use rand::SeedableRng;
        let cf = configuration_fan(&lambda0(3)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (i, c) in cf.pi_fan().all_cones().iter().enumerate() {
            let p = random_relint_point(c, &mut rng);
            let q = random_relint_point(c, &mut rng);
            let chk = check_fiber_constancy(&cf, i, &p, &q);
            assert!(chk.ok, "{:?}", chk.detail);
        }
    }

    #[test]
    fn clipping_a_half_line() {
        let cf = configuration_fan(&lambda0(1)).unwrap();
        let (_, r) = locate(&cf, &[rat(2, 1)]).unwrap();
        let unbounded = r
            .fiber
            .cells
            .iter()
            .find(|c| c.dim == 1 && !c.polyhedron.is_bounded())
            .unwrap();
        let pts = unbounded.polyhedron.clipped(&[rat(1, 1)], &rat(5, 2));
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn small_corpus_strata() {
        for s in [lambda0(1), lambda0(2), lambda0(3), sqrt_stack_scaffold()] {
            let cf = configuration_fan(&s).unwrap();
            let c = check_all_strata(&cf);
            assert!(c.ok, "{}: {:?}", s.kind, c.detail);
        }
    }
}
