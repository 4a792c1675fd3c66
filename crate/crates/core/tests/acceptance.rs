//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//! Built without the libtest harness so the lines show in plain `cargo test`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use common::{big, brute_chambers, det3, in_rows3};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropconf::chow::{configuration_fan, ConfigurationFan};
use tropconf::cone::Cone;
use tropconf::expansions::{
    check_all_strata, check_fiber_constancy, fiber_complex, locate, random_relint_point, rubber_data, StratumReport,
};
use tropconf::fan::{common_refinement, fan_from_arrangement, product_fan, transform_fan, Arrangement, Fan};
use tropconf::linalg::{dot, lattice_intersect, Int, IntMatrix, LatticeBasis, Rat};
use tropconf::reference::{bipermutahedral_fan, bisequence_of, permutahedral_fan};
use tropconf::scaffold::{lambda0, lambda_biperm, lambda_square, sqrt_stack_scaffold, Scaffold};

type Outcome = Result<(), String>;
type Criterion = fn(&mut Quotients) -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Configuration fans are expensive; each scaffold is quotiented once.
struct Quotients(BTreeMap<String, ConfigurationFan>);

impl Quotients {
    fn get(&mut self, key: &str) -> &ConfigurationFan {
        if !self.0.contains_key(key) {
            let (kind, n) = key.split_once(':').unwrap();
            let n: usize = n.parse().unwrap();
            let s: Scaffold = match kind {
                "lambda0" => lambda0(n),
                "square" => lambda_square(n),
                "biperm" => lambda_biperm(n).unwrap(),
                "sqrt" => sqrt_stack_scaffold(),
                _ => unreachable!(),
            };
            self.0.insert(key.to_string(), configuration_fan(&s).unwrap());
        }
        &self.0[key]
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Ordered set partitions of an m-set: a(m) = sum_k C(m, k) a(m - k).
fn fubini(m: usize) -> usize {
    let mut a = vec![1usize; m + 1];
    for j in 1..=m {
        let mut binom = 1;
        a[j] = 0;
        for k in 1..=j {
            binom = binom * (j - k + 1) / k;
            a[j] += binom * a[j - k];
        }
    }
    a[m]
}

fn point(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from(x)).collect()
}

fn rats(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| point(r)).collect()
}

fn weight(r: &StratumReport, marking: usize, forms: &[Vec<Int>]) -> Result<Vec<Vec<Rat>>, String> {
    let v = r.rubber.markings[marking];
    r.rubber.weights[&v]
        .in_coordinates(&r.fiber.rho, forms)
        .map_err(|e| e.to_string())
}

fn criterion_1(q: &mut Quotients) -> Outcome {
    for n in 1..=4 {
        let cf = q.get(&format!("lambda0:{n}"));
        let pi = cf.pi_fan();
        ensure(*pi == permutahedral_fan(n), || {
            format!("n={n}: quotient differs from the permutahedral fan")
        })?;
        ensure(cf.pi.is_trivial(), || format!("n={n}: proper sublattices present"))?;
        ensure(pi.maximal_cones().len() == factorial(n + 1), || {
            format!("n={n}: {} maximal cones", pi.maximal_cones().len())
        })?;
        ensure(pi.all_cones().len() == fubini(n + 1), || {
            format!("n={n}: {} cones", pi.all_cones().len())
        })?;
        let refined = &cf.refined.fan;
        ensure(*refined == permutahedral_fan(n + 1), || {
            format!("n={n}: refined scaffold is not the next permutahedral fan")
        })?;
        ensure(refined.all_cones().len() == fubini(n + 2), || {
            format!("n={n}: refined has {} cones", refined.all_cones().len())
        })?;
    }
    Ok(())
}

fn criterion_2(q: &mut Quotients) -> Outcome {
    for n in 1..=2 {
        // (a_1..a_n, b_1..b_n) -> (a_1, b_1, ..., a_n, b_n)
        let mut shuffle = IntMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            shuffle.set(2 * i, i, Int::ONE);
            shuffle.set(2 * i + 1, n + i, Int::ONE);
        }
        let sigma = permutahedral_fan(n);
        let expected = transform_fan(&product_fan(&sigma, &sigma), &shuffle);
        let cf = q.get(&format!("square:{n}"));
        ensure(*cf.pi_fan() == expected, || {
            format!("n={n}: quotient differs from the shuffled product")
        })?;
        ensure(cf.pi.is_trivial(), || format!("n={n}: proper sublattices present"))?;
        let m = cf.pi_fan().maximal_cones().len();
        ensure(m == factorial(n + 1).pow(2), || format!("n={n}: {m} maximal cones"))?;
    }
    Ok(())
}

fn criterion_3(q: &mut Quotients) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=2 {
        let cf = q.get(&format!("biperm:{n}"));
        let pi = cf.pi_fan();
        ensure(*pi == bipermutahedral_fan(n), || {
            format!("n={n}: quotient differs from the bipermutahedral fan")
        })?;
        ensure(cf.pi.is_trivial(), || format!("n={n}: proper sublattices present"))?;
        let want = factorial(2 * n + 2) / (1 << (n + 1));
        ensure(pi.maximal_cones().len() == want, || {
            format!("n={n}: {} maximal cones, want {want}", pi.maximal_cones().len())
        })?;
        // maximal cones are exactly the bisequence classes
        let mut labels = BTreeSet::new();
        for m in pi.maximal_cones() {
            let a = bisequence_of(&random_relint_point(m, &mut rng)).map_err(|e| e.to_string())?;
            let b = bisequence_of(&random_relint_point(m, &mut rng)).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("n={n}: {m:?} meets bisequences {a} and {b}"))?;
            labels.insert(a);
        }
        ensure(labels.len() == want, || {
            format!("n={n}: {} distinct bisequences", labels.len())
        })?;
    }
    Ok(())
}

fn criterion_4(q: &mut Quotients) -> Outcome {
    let cf = q.get("sqrt:1");
    let fan = cf.pi_fan();
    ensure(fan.all_cones().len() == 3 && fan.rank() == 1, || {
        format!("{} cones", fan.all_cones().len())
    })?;
    for ray in fan.cones_of_dim(1) {
        let l = cf.pi.sublattice(ray).map_err(|e| e.to_string())?;
        let two_z = LatticeBasis::from_generators(1, vec![big(&[2])]);
        ensure(l == two_z, || format!("{ray:?}: lattice {l:?}"))?;
        let iso = cf.pi.isotropy(ray).map_err(|e| e.to_string())?;
        ensure(iso == vec![Int::from(2)], || format!("{ray:?}: isotropy {iso:?}"))?;
        let p: Vec<Rat> = ray.rays()[0]
            .iter()
            .map(|x| Rat::from(x.clone()) * Rat::from(5))
            .collect();
        let (_, r) = locate(cf, &p).map_err(|e| e.to_string())?;
        let m = &r.rubber.weights[&r.rubber.markings[1]].matrix;
        ensure(*m == IntMatrix::from_i64(&[&[2]]), || {
            format!("{ray:?}: marking 1 map {m:?}")
        })?;
    }
    Ok(())
}

fn criterion_5(q: &mut Quotients) -> Outcome {
    let cf = q.get("lambda0:3");
    let (_, r) = locate(cf, &point(&[1, 1, 2])).map_err(|e| e.to_string())?;
    // 0 <= a1 = a2 <= a3
    let (gap1, gap2) = (big(&[1, 0, 0]), big(&[-1, 0, 1]));
    let expected = Cone::from_inequalities(3, &[gap1.clone(), gap2.clone()], &[big(&[1, -1, 0])]);
    ensure(r.fiber.rho == expected, || format!("located {:?}", r.fiber.rho))?;
    let m = &r.rubber.markings;
    ensure(r.fiber.vertices().len() == 3 && m[1] == m[2], || {
        format!("markings {m:?}")
    })?;
    let forms = [gap1, gap2];
    for (i, want) in [(0, rats(&[&[0, 0]])), (1, rats(&[&[1, 0]])), (3, rats(&[&[1, 1]]))] {
        let got = weight(&r, i, &forms)?;
        ensure(got == want, || format!("marking {i}: {got:?}"))?;
    }
    // the report's own facet-dual coordinates agree up to the order of the facets
    let fw = r.facet_weights.as_ref().ok_or("no facet coordinates")?;
    let gens = r.fiber.rho.generators();
    let same = |f: &[Int], g: &[Int]| gens.iter().all(|u| dot(f, u) == dot(g, u));
    let order: Vec<usize> = r
        .fiber
        .rho
        .facet_normals()
        .iter()
        .map(|f| {
            forms
                .iter()
                .position(|g| same(f, g))
                .ok_or("facet normal is not a chain gap")
        })
        .collect::<Result<_, _>>()?;
    for (i, want) in [(0, [0, 0]), (1, [1, 0]), (3, [1, 1])] {
        let got: Vec<Rat> = order.iter().map(|&k| Rat::from(want[k])).collect();
        ensure(fw[&m[i]] == vec![got], || {
            format!("facet weights of marking {i}: {:?}", fw[&m[i]])
        })?;
    }
    Ok(())
}

fn criterion_6(q: &mut Quotients) -> Outcome {
    let p = point(&[-1, 2, 1, 1]);
    let (_, r) = locate(q.get("square:2"), &p).map_err(|e| e.to_string())?;
    ensure(r.rubber.rubber_lattice.rank() == 4, || {
        format!("square: rubber rank {}", r.rubber.rubber_lattice.rank())
    })?;
    ensure(r.rubber.stratum_dim == 0, || {
        format!("square: stratum dim {}", r.rubber.stratum_dim)
    })?;
    // e1 = -a1, e2 = a2, f1 = b2, f2 = b1 - b2
    let forms = [
        big(&[-1, 0, 0, 0]),
        big(&[0, 0, 1, 0]),
        big(&[0, 0, 0, 1]),
        big(&[0, 1, 0, -1]),
    ];
    let v1 = weight(&r, 1, &forms)?;
    ensure(v1 == rats(&[&[-1, 0, 0, 0], &[0, 0, 1, 1]]), || {
        format!("square: marking 1 at {v1:?}")
    })?;
    let v2 = weight(&r, 2, &forms)?;
    ensure(v2 == rats(&[&[0, 1, 0, 0], &[0, 0, 1, 0]]), || {
        format!("square: marking 2 at {v2:?}")
    })?;

    let (_, r) = locate(q.get("biperm:2"), &p).map_err(|e| e.to_string())?;
    let rho = &r.fiber.rho;
    ensure(rho.dim() == 3, || format!("biperm: cone dim {}", rho.dim()))?;
    // a0 + b0 = a1 + b2 with the anchor at the origin
    let eq = LatticeBasis::from_generators(4, rho.equations().to_vec());
    ensure(eq == LatticeBasis::from_generators(4, vec![big(&[1, 0, 0, 1])]), || {
        format!("biperm: equations {:?}", rho.equations())
    })?;
    ensure(r.rubber.rubber_lattice.rank() == 3, || {
        format!("biperm: rubber rank {}", r.rubber.rubber_lattice.rank())
    })?;
    ensure(r.rubber.stratum_dim == 1, || {
        format!("biperm: stratum dim {}", r.rubber.stratum_dim)
    })?;
    // e1 = -a1 = b2 = f1, e2 = a2, f2 = b1 - b2
    let forms = [big(&[-1, 0, 0, 0]), big(&[0, 0, 1, 0]), big(&[0, 1, 0, -1])];
    let v1 = weight(&r, 1, &forms)?;
    ensure(v1 == rats(&[&[-1, 0, 0], &[1, 0, 1]]), || {
        format!("biperm: marking 1 at {v1:?}")
    })?;
    let v2 = weight(&r, 2, &forms)?;
    ensure(v2 == rats(&[&[0, 1, 0], &[1, 0, 0]]), || {
        format!("biperm: marking 2 at {v2:?}")
    })?;
    // components of the expansion are the two-cells of the dual picture
    let comps = r.fiber.vertices().len();
    let hexagons = r.component_sizes.values().filter(|&&k| k == 6).count();
    ensure(comps == 11 && hexagons == 2, || {
        format!("biperm: {comps} components, {hexagons} hexagonal")
    })
}

fn criterion_7(q: &mut Quotients) -> Outcome {
    let keys = [
        "lambda0:1",
        "lambda0:2",
        "lambda0:3",
        "lambda0:4",
        "square:1",
        "square:2",
        "biperm:1",
        "biperm:2",
        "sqrt:1",
    ];
    for key in keys {
        let cf = q.get(key);
        let c = cf.certificates();
        ensure(c.projection.ok, || {
            format!("{key}: projection {:?}", c.projection.violations.first())
        })?;
        ensure(
            c.sections.len() == cf.n() + 1 && c.sections.iter().all(|s| s.ok),
            || format!("{key}: a section is not semistable"),
        )?;
        ensure(c.terminality.ok, || {
            format!("{key}: terminality {:?}", c.terminality.detail)
        })?;
        ensure(c.ok, || format!("{key}: {:?}", c.first_failure()))?;
        let st = check_all_strata(cf);
        ensure(st.ok, || format!("{key}: {:?}", st.detail))?;
        // anchor and gluing read directly off every cone's rubber data
        for rho in cf.pi_fan().all_cones() {
            let fc = fiber_complex(cf, rho).map_err(|e| e.to_string())?;
            let rd = rubber_data(cf, &fc).map_err(|e| e.to_string())?;
            ensure(rd.weights[&rd.markings[0]].is_zero(), || {
                format!("{key}: anchor moves over {rho:?}")
            })?;
            ensure(rd.gluing_ok, || format!("{key}: gluing fails over {rho:?}"))?;
        }
    }
    Ok(())
}

fn random_normals(rng: &mut ChaCha8Rng, rank: usize, count: usize) -> Vec<Vec<i64>> {
    (0..count)
        .map(|_| loop {
            let v: Vec<i64> = (0..rank).map(|_| rng.random_range(-2..=2)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        })
        .collect()
}

fn random_lattice(rng: &mut ChaCha8Rng) -> [[i64; 3]; 3] {
    loop {
        let mut b = [[0i64; 3]; 3];
        for row in &mut b {
            for x in row.iter_mut() {
                *x = rng.random_range(-4..=4);
            }
        }
        if (1..=12).contains(&det3(&b).abs()) {
            return b;
        }
    }
}

fn criterion_8(q: &mut Quotients) -> Outcome {
    const PER_KIND: usize = 250;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..PER_KIND {
        let rank = rng.random_range(1..=5);
        let count = rng.random_range(0..=6);
        let normals = random_normals(&mut rng, rank, count);
        let c = Cone::from_inequalities(rank, &normals.iter().map(|v| big(v)).collect::<Vec<_>>(), &[]);
        let h = c.hrep();
        ensure(Cone::from_inequalities(rank, &h.facets, &h.equations) == c, || {
            format!("round trip {case}: H side {normals:?}")
        })?;
        ensure(
            Cone::from_generators(rank, c.rays(), c.lineality().basis()) == c,
            || format!("round trip {case}: V side {normals:?}"),
        )?;
    }
    for case in 0..PER_KIND {
        let rank = rng.random_range(2..=4);
        let (ka, kb) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let na = random_normals(&mut rng, rank, ka);
        let nb = random_normals(&mut rng, rank, kb);
        let fan = |n: &[Vec<i64>]| -> Fan {
            fan_from_arrangement(&Arrangement::new(rank, n.iter().map(|v| big(v)).collect()).unwrap())
        };
        let r = common_refinement(&[&fan(&na), &fan(&nb)]).map_err(|e| e.to_string())?;
        let all: Vec<Vec<i64>> = na.iter().chain(&nb).cloned().collect();
        let got: BTreeSet<Cone> = r.maximal_cones().iter().cloned().collect();
        ensure(got == brute_chambers(rank, &all), || {
            format!("refinement {case}: {na:?} | {nb:?}")
        })?;
    }
    for case in 0..PER_KIND {
        let (a, b) = (random_lattice(&mut rng), random_lattice(&mut rng));
        let la = LatticeBasis::from_generators(3, a.iter().map(|r| big(r)).collect());
        let lb = LatticeBasis::from_generators(3, b.iter().map(|r| big(r)).collect());
        let ab = lattice_intersect(&la, &lb);
        ensure(ab == lattice_intersect(&lb, &la), || {
            format!("intersection {case}: not commutative")
        })?;
        for x in -4..=4 {
            for y in -4..=4 {
                for z in -4..=4 {
                    let v = [x, y, z];
                    ensure(ab.contains(&big(&v)) == (in_rows3(&a, &v) && in_rows3(&b, &v)), || {
                        format!("intersection {case}: {v:?} for {a:?} and {b:?}")
                    })?;
                }
            }
        }
    }
    let keys = ["lambda0:2", "lambda0:3", "square:1", "square:2", "biperm:1", "sqrt:1"];
    for case in 0..PER_KIND {
        let cf = q.get(keys[case % keys.len()]);
        let fan = cf.pi_fan();
        let m = &fan.maximal_cones()[rng.random_range(0..fan.maximal_cones().len())];
        let idx = fan.cone_index()[m];
        let (p, pp) = (random_relint_point(m, &mut rng), random_relint_point(m, &mut rng));
        let c = check_fiber_constancy(cf, idx, &p, &pp);
        ensure(c.ok, || format!("constancy {case}: {:?}", c.detail))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("basic scaffold quotients are permutahedral", criterion_1),
        ("square scaffold quotients are shuffled products", criterion_2),
        ("bipermutahedral scaffold quotients", criterion_3),
        ("square-root stack", criterion_4),
        ("chain stratum weights", criterion_5),
        ("quilt and hexagon strata", criterion_6),
        ("certificates, anchor and gluing on the corpus", criterion_7),
        ("seeded property cases (1000)", criterion_8),
    ];
    let mut q = Quotients(BTreeMap::new());
    let mut failed = 0;
    for (k, (label, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f(&mut q);
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("PASS criterion {}: {label} ({secs:.1}s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {label} ({secs:.1}s): {e}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
