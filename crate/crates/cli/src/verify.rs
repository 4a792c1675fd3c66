//! Named end-to-end checks. Each target builds its own inputs and reports
//! pass/fail with enough detail to find the offending cone.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use tropconf::chow::{configuration_fan, ConfigurationFan};
use tropconf::expansions::{check_all_strata, check_fiber_constancy, locate, random_relint_point, StratumReport};
use tropconf::fan::{fan_diff, Fan};
use tropconf::linalg::{ints, rat, Int, IntMatrix, LatticeBasis, Rat};
use tropconf::parse::parse_constraints;
use tropconf::reference::{bipermutahedral_fan, permutahedral_fan, permutahedral_square};
use tropconf::scaffold::{
    lambda0, lambda_biperm, lambda_square, product_scaffold, scaffold_from_fan, sqrt_stack_scaffold, Scaffold,
};
use tropconf::Result;

pub const TARGETS: [&str; 9] = [
    "permutahedron",
    "square",
    "bipermutahedron",
    "sqrt-stack",
    "chain-stratum",
    "quilt-stratum",
    "hexagon-stratum",
    "from-fan",
    "certificates",
];

#[derive(Clone, Debug)]
pub struct TargetResult {
    pub name: String,
    pub ok: bool,
    pub lines: Vec<String>,
    pub seconds: f64,
}

impl TargetResult {
    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "ok": self.ok, "lines": self.lines, "seconds": format!("{:.3}", self.seconds)})
    }
}

struct Log {
    ok: bool,
    lines: Vec<String>,
}

impl Log {
    fn new() -> Log {
        Log {
            ok: true,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        let label = label.into();
        if ok {
            self.lines.push(format!("ok    {label}"));
        } else {
            self.ok = false;
            self.lines.push(format!("FAIL  {label}: {}", detail()));
        }
    }

    fn fail(&mut self, label: &str, err: impl std::fmt::Display) {
        self.ok = false;
        self.lines.push(format!("FAIL  {label}: {err}"));
    }
}

fn fan_mismatch(computed: &Fan, expected: &Fan) -> String {
    match fan_diff(computed, expected) {
        Err(e) => e.to_string(),
        Ok(d) => {
            let mut s = format!(
                "{} cones only in computed, {} only in expected",
                d.only_left.len(),
                d.only_right.len()
            );
            for c in d.only_left.iter().take(3) {
                s.push_str(&format!("; computed {c:?}"));
            }
            for c in d.only_right.iter().take(3) {
                s.push_str(&format!("; expected {c:?}"));
            }
            s
        }
    }
}

fn quotient_matches(log: &mut Log, label: &str, s: &Scaffold, expected: &Fan) -> Option<ConfigurationFan> {
    match configuration_fan(s) {
        Err(e) => {
            log.fail(label, e);
            None
        }
        Ok(cf) => {
            log.check(
                format!("{label}: quotient equals reference"),
                *cf.pi_fan() == *expected,
                || fan_mismatch(cf.pi_fan(), expected),
            );
            log.check(format!("{label}: all sublattice indices 1"), cf.pi.is_trivial(), || {
                format!("{} cones carry proper sublattices", cf.pi.explicit().len())
            });
            Some(cf)
        }
    }
}

fn coords(r: &StratumReport, marking: usize, forms: &[Vec<Int>]) -> Result<Vec<Vec<Rat>>> {
    let v = r.rubber.markings[marking];
    r.rubber.weights[&v].in_coordinates(&r.fiber.rho, forms)
}

fn rats(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
}

fn point(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

fn permutahedron(max_n: usize, log: &mut Log) {
    for n in 1..=max_n {
        let label = format!("n={n}");
        if let Some(cf) = quotient_matches(log, &label, &lambda0(n), &permutahedral_fan(n)) {
            let expected = permutahedral_fan(n + 1);
            log.check(
                format!("{label}: refined scaffold equals the next permutahedral fan"),
                cf.refined.fan == expected,
                || fan_mismatch(&cf.refined.fan, &expected),
            );
        }
    }
}

fn square(max_n: usize, log: &mut Log) {
    for n in 1..=max_n {
        quotient_matches(log, &format!("n={n}"), &lambda_square(n), &permutahedral_square(n));
    }
}

fn bipermutahedron(max_n: usize, log: &mut Log) {
    for n in 1..=max_n {
        match lambda_biperm(n) {
            Ok(s) => {
                quotient_matches(log, &format!("n={n}"), &s, &bipermutahedral_fan(n));
            }
            Err(e) => log.fail(&format!("n={n}"), e),
        }
    }
}

fn sqrt_stack(log: &mut Log) -> Result<()> {
    let cf = configuration_fan(&sqrt_stack_scaffold())?;
    let fan = cf.pi_fan();
    log.check("quotient has 3 cones", fan.all_cones().len() == 3, || {
        format!("{}", fan.all_cones().len())
    });
    for ray in fan.cones_of_dim(1) {
        let l = cf.pi.sublattice(ray)?;
        let doubled: Vec<Int> = ray.rays()[0].iter().map(|x| x * Int::from(2)).collect();
        log.check(
            format!("ray {ray:?}: sublattice 2Z"),
            l == LatticeBasis::from_generators(1, vec![doubled]),
            || format!("{l:?}"),
        );
        let iso = cf.pi.isotropy(ray)?;
        log.check(format!("ray {ray:?}: isotropy [2]"), iso == ints(&[2]), || {
            format!("{iso:?}")
        });
        let p: Vec<Rat> = ray.rays()[0].iter().map(|x| Rat::from(x.clone()) * rat(3, 1)).collect();
        let (_, r) = locate(&cf, &p)?;
        let m = &r.rubber.weights[&r.rubber.markings[1]].matrix;
        log.check(
            format!("ray {ray:?}: marking 1 moves by 2 on L"),
            *m == IntMatrix::from_i64(&[&[2]]),
            || format!("{m:?}"),
        );
    }
    Ok(())
}

fn chain_stratum(log: &mut Log) -> Result<()> {
    let cf = configuration_fan(&lambda0(3))?;
    let (_, r) = locate(&cf, &point(&[1, 1, 2]))?;
    let expected = parse_constraints("a0<=a1=a2<=a3", 3, 1)?;
    log.check("cone is a0 <= a1 = a2 <= a3", r.fiber.rho == expected, || {
        format!("{:?}", r.fiber.rho)
    });
    let m = &r.rubber.markings;
    log.check(
        "three components, markings 1 and 2 together",
        r.fiber.vertices().len() == 3 && m[1] == m[2],
        || format!("markings {m:?}"),
    );
    let forms = [ints(&[1, 0, 0]), ints(&[-1, 0, 1])];
    for (i, want) in [(0, rats(&[&[0, 0]])), (1, rats(&[&[1, 0]])), (3, rats(&[&[1, 1]]))] {
        let got = coords(&r, i, &forms)?;
        log.check(format!("weight of the component of marking {i}"), got == want, || {
            format!("{got:?}")
        });
    }
    Ok(())
}

fn quilt_stratum(log: &mut Log) -> Result<()> {
    let cf = configuration_fan(&lambda_square(2))?;
    let (_, r) = locate(&cf, &point(&[-1, 2, 1, 1]))?;
    let rk = r.rubber.rubber_lattice.rank();
    log.check("rubber rank 4", rk == 4, || rk.to_string());
    log.check("stratum dim 0", r.rubber.stratum_dim == 0, || {
        r.rubber.stratum_dim.to_string()
    });
    // e1 = -a1, e2 = a2, f1 = b2, f2 = b1 - b2
    let forms = [
        ints(&[-1, 0, 0, 0]),
        ints(&[0, 0, 1, 0]),
        ints(&[0, 0, 0, 1]),
        ints(&[0, 1, 0, -1]),
    ];
    let v1 = coords(&r, 1, &forms)?;
    log.check(
        "marking 1 at (-e1, f1+f2)",
        v1 == rats(&[&[-1, 0, 0, 0], &[0, 0, 1, 1]]),
        || format!("{v1:?}"),
    );
    let v2 = coords(&r, 2, &forms)?;
    log.check(
        "marking 2 at (e2, f1)",
        v2 == rats(&[&[0, 1, 0, 0], &[0, 0, 1, 0]]),
        || format!("{v2:?}"),
    );
    let sizes: Vec<usize> = r.component_sizes.values().copied().collect();
    log.check(
        "every component fan is a quadrant fan",
        sizes.iter().all(|&k| k == 4),
        || format!("{sizes:?}"),
    );
    Ok(())
}

fn hexagon_stratum(log: &mut Log) -> Result<()> {
    let cf = configuration_fan(&lambda_biperm(2)?)?;
    let (_, r) = locate(&cf, &point(&[-1, 2, 1, 1]))?;
    let rho = &r.fiber.rho;
    log.check("cone has dim 3", rho.dim() == 3, || rho.dim().to_string());
    let plane = parse_constraints("a0+b0=a1+b2", 2, 2)?;
    log.check("cone spans a0+b0 = a1+b2", rho.equations() == plane.equations(), || {
        format!("{:?}", rho.equations())
    });
    let rk = r.rubber.rubber_lattice.rank();
    log.check("rubber rank 3", rk == 3, || rk.to_string());
    log.check("stratum dim 1", r.rubber.stratum_dim == 1, || {
        r.rubber.stratum_dim.to_string()
    });
    // e1 = -a1, e2 = a2, f2 = b1 - b2
    let forms = [ints(&[-1, 0, 0, 0]), ints(&[0, 0, 1, 0]), ints(&[0, 1, 0, -1])];
    let v1 = coords(&r, 1, &forms)?;
    log.check(
        "marking 1 at (-e1, e1+f2)",
        v1 == rats(&[&[-1, 0, 0], &[1, 0, 1]]),
        || format!("{v1:?}"),
    );
    let v2 = coords(&r, 2, &forms)?;
    log.check("marking 2 at (e2, e1)", v2 == rats(&[&[0, 1, 0], &[1, 0, 0]]), || {
        format!("{v2:?}")
    });
    let verts = r.fiber.vertices().len();
    let hexagons = r.component_sizes.values().filter(|&&k| k == 6).count();
    log.check("11 components, 2 hexagonal", verts == 11 && hexagons == 2, || {
        format!("{verts} components, {hexagons} hexagonal")
    });
    Ok(())
}

fn from_fan(max_n: usize, log: &mut Log) -> Result<()> {
    let line = permutahedral_fan(1);
    let plane = permutahedral_square(1);
    for n in 1..=max_n {
        let s = scaffold_from_fan(&line, n)?;
        let want = lambda0(n);
        log.check(
            format!("n={n}: scaffold of the line fan is lambda0"),
            s.fan == want.fan,
            || fan_mismatch(&s.fan, &want.fan),
        );
        if n <= 2 {
            let sq = lambda_square(n);
            let s = scaffold_from_fan(&plane, n)?;
            log.check(
                format!("n={n}: scaffold of the quadrant fan is the square scaffold"),
                s.fan == sq.fan,
                || fan_mismatch(&s.fan, &sq.fan),
            );
            let p = product_scaffold(&want, &want)?;
            log.check(
                format!("n={n}: lambda0 x lambda0 is the square scaffold"),
                p.fan == sq.fan,
                || fan_mismatch(&p.fan, &sq.fan),
            );
        }
    }
    Ok(())
}

/// Scaffolds whose quotients the certificate target checks.
pub fn corpus(max_n: usize) -> Vec<Scaffold> {
    let mut v: Vec<Scaffold> = (1..=max_n.min(3)).map(lambda0).collect();
    for n in 1..=max_n.min(2) {
        v.push(lambda_square(n));
        v.push(lambda_biperm(n).expect("bipermutahedral scaffold"));
    }
    v.push(sqrt_stack_scaffold());
    v
}

fn certificates(max_n: usize, seed: u64, log: &mut Log) {
    for s in corpus(max_n) {
        let label = format!("{} n={}", s.kind, s.n);
        let cf = match configuration_fan(&s) {
            Ok(cf) => cf,
            Err(e) => {
                log.fail(&label, e);
                continue;
            }
        };
        let c = cf.certificates();
        log.check(format!("{label}: certificates"), c.ok, || {
            c.first_failure().unwrap_or_default()
        });
        let st = check_all_strata(&cf);
        log.check(
            format!("{label}: anchor, gluing and dimension on every cone"),
            st.ok,
            || st.detail.clone().unwrap_or_default(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cones = cf.pi_fan().all_cones();
        let samples: Vec<(usize, Vec<Rat>, Vec<Rat>)> = cf
            .pi_fan()
            .maximal_cones()
            .iter()
            .map(|m| {
                let i = cf.pi_fan().cone_index()[m];
                (
                    i,
                    random_relint_point(&cones[i], &mut rng),
                    random_relint_point(&cones[i], &mut rng),
                )
            })
            .collect();
        let bad = samples
            .par_iter()
            .map(|(i, p, q)| check_fiber_constancy(&cf, *i, p, q))
            .find_first(|c| !c.ok);
        log.check(
            format!("{label}: fiber posets agree at two samples per maximal cone"),
            bad.is_none(),
            || bad.and_then(|c| c.detail).unwrap_or_default(),
        );
    }
}

fn errored(log: &mut Log, r: Result<()>) {
    if let Err(e) = r {
        log.fail("error", e);
    }
}

/// Run one target. `max_n` overrides the default size where the target has one.
pub fn run_target(name: &str, max_n: Option<usize>, seed: u64) -> Option<TargetResult> {
    let t = Instant::now();
    let mut log = Log::new();
    match name {
        "permutahedron" => permutahedron(max_n.unwrap_or(4), &mut log),
        "square" => square(max_n.unwrap_or(2), &mut log),
        "bipermutahedron" => bipermutahedron(max_n.unwrap_or(2), &mut log),
        "sqrt-stack" => {
            let r = sqrt_stack(&mut log);
            errored(&mut log, r)
        }
        "chain-stratum" => {
            let r = chain_stratum(&mut log);
            errored(&mut log, r)
        }
        "quilt-stratum" => {
            let r = quilt_stratum(&mut log);
            errored(&mut log, r)
        }
        "hexagon-stratum" => {
            let r = hexagon_stratum(&mut log);
            errored(&mut log, r)
        }
        "from-fan" => {
            let r = from_fan(max_n.unwrap_or(3), &mut log);
            errored(&mut log, r)
        }
        "certificates" => certificates(max_n.unwrap_or(2), seed, &mut log),
        _ => return None,
    }
    Some(TargetResult {
        name: name.to_string(),
        ok: log.ok,
        lines: log.lines,
        seconds: t.elapsed().as_secs_f64(),
    })
}

/// Run several targets in parallel; results come back in the given order.
pub fn run_all(names: &[&str], max_n: Option<usize>, seed: u64) -> Vec<TargetResult> {
    names
        .par_iter()
        .map(|n| run_target(n, max_n, seed).expect("known target"))
        .collect()
}
