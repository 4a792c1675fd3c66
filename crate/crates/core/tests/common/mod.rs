//! Oracles shared by the property and acceptance suites. They use only
//! plain integer arithmetic so they stay independent of the library kernels.

#![allow(dead_code)]

use std::collections::BTreeSet;

use tropconf::cone::Cone;
use tropconf::linalg::Int;

pub fn big(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Feasibility of the strict homogeneous system `c . x > 0` by Fourier-Motzkin.
pub fn strictly_feasible(mut rows: Vec<Vec<i128>>, vars: usize) -> bool {
    for k in 0..vars {
        if rows.iter().any(|r| r.iter().all(|&x| x == 0)) {
            return false;
        }
        let (pos, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r[k] > 0);
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r[k] < 0);
        let mut next = zero;
        for p in &pos {
            for q in &neg {
                let (a, b) = (-q[k], p[k]);
                let mut c: Vec<i128> = p.iter().zip(q).map(|(x, y)| a * x + b * y).collect();
                let g = c.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    c.iter_mut().for_each(|x| *x /= g);
                }
                next.push(c);
            }
        }
        next.sort();
        next.dedup();
        rows = next;
    }
    !rows.iter().any(|r| r.iter().all(|&x| x == 0))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Full-dimensional chambers of an arrangement by sweeping all sign vectors.
pub fn brute_chambers(rank: usize, normals: &[Vec<i64>]) -> BTreeSet<Cone> {
    let m = normals.len();
    let mut out = BTreeSet::new();
    for mask in 0..(1u32 << m) {
        let signed: Vec<Vec<i64>> = (0..m)
            .map(|i| {
                let s = if mask >> i & 1 == 1 { -1 } else { 1 };
                normals[i].iter().map(|x| s * x).collect()
            })
            .collect();
        let rows: Vec<Vec<i128>> = signed.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        if strictly_feasible(rows, rank) {
            let ineqs: Vec<Vec<Int>> = signed.iter().map(|r| big(r)).collect();
            out.insert(Cone::from_inequalities(rank, &ineqs, &[]));
        }
    }
    out
}

pub fn det3(b: &[[i64; 3]; 3]) -> i64 {
    b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0])
}

/// `v` lies in the lattice spanned by the rows of `b` iff `v adj(b)` is divisible by `det b`.
pub fn in_rows3(b: &[[i64; 3]; 3], v: &[i64; 3]) -> bool {
    let d = det3(b);
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        let m = b[r[0]][c[0]] * b[r[1]][c[1]] - b[r[0]][c[1]] * b[r[1]][c[0]];
        if (i + j).is_multiple_of(2) {
            m
        } else {
            -m
        }
    };
    // coefficients x with x b = v: x_i = sum_j v_j cof(i, j) / d
    (0..3).all(|i| (0..3).map(|j| v[j] * cof(i, j)).sum::<i64>() % d == 0)
}
