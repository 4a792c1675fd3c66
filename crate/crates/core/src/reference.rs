//! Independent generators for the permutahedral and bipermutahedral fans,
//! and bisequence labels.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{chambers_within, product_fan, transform_fan, Arrangement, Fan};
use crate::linalg::{Int, Rat};
use crate::scaffold::interleave_matrix;

/// An ordered set partition of `{0, …, n}`; block order is increasing value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen: Vec<usize> = Vec::new();
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::Precondition("empty block in ordered partition".into()));
            }
            b.sort();
            seen.extend(b.iter().copied());
        }
        seen.sort();
        if seen != (0..seen.len()).collect::<Vec<_>>() {
            return Err(Error::Precondition("blocks must partition 0..=n".into()));
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum::<usize>() - 1
    }

    /// The cone `{a_k = a_l within blocks, a_i <= a_j across consecutive blocks}` in `R^n`.
    pub fn cone(&self) -> Cone {
        let n = self.n();
        let coord = |i: usize| {
            let mut v = vec![Int::ZERO; n];
            if i > 0 {
                v[i - 1] = Int::ONE;
            }
            v
        };
        let diff = |i: usize, j: usize| -> Vec<Int> { coord(i).iter().zip(coord(j)).map(|(x, y)| x - y).collect() };
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for b in &self.blocks {
            for w in b.windows(2) {
                eqs.push(diff(w[1], w[0]));
            }
        }
        for w in self.blocks.windows(2) {
            ineqs.push(diff(w[1][0], w[0][0]));
        }
        Cone::from_inequalities(n, &ineqs, &eqs)
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "({{{}}})", parts.join("},{"))
    }
}

/// All ordered set partitions of `{0, …, n}`.
pub fn ordered_partitions(n: usize) -> Vec<OrderedPartition> {
    fn rec(rest: Vec<usize>, acc: &mut Vec<Vec<usize>>, out: &mut Vec<OrderedPartition>) {
        if rest.is_empty() {
            out.push(OrderedPartition { blocks: acc.clone() });
            return;
        }
        let m = rest.len();
        for mask in 1u64..(1u64 << m) {
            let block: Vec<usize> = (0..m).filter(|&k| mask & (1 << k) != 0).map(|k| rest[k]).collect();
            let remaining: Vec<usize> = (0..m).filter(|&k| mask & (1 << k) == 0).map(|k| rest[k]).collect();
            acc.push(block);
            rec(remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec((0..=n).collect(), &mut Vec::new(), &mut out);
    out
}

/// All linear orders of `{0, …, n}` as ordered partitions into singletons.
pub fn linear_orders(n: usize) -> Vec<OrderedPartition> {
    fn rec(rest: &mut Vec<usize>, acc: &mut Vec<Vec<usize>>, out: &mut Vec<OrderedPartition>) {
        if rest.is_empty() {
            out.push(OrderedPartition { blocks: acc.clone() });
            return;
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            acc.push(vec![x]);
            rec(rest, acc, out);
            acc.pop();
            rest.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..=n).collect(), &mut Vec::new(), &mut out);
    out
}

/// The permutahedral fan on `R^n` (with `a_0 = 0`): one maximal cone per linear order.
pub fn permutahedral_fan(n: usize) -> Fan {
    let cones: Vec<Cone> = linear_orders(n).par_iter().map(|o| o.cone()).collect();
    Fan::from_maximal(n, cones)
}

/// `Σ_n × Σ_n` with coordinates shuffled to `(a_1, b_1, …, a_n, b_n)`.
pub fn permutahedral_square(n: usize) -> Fan {
    let p = permutahedral_fan(n);
    transform_fan(&product_fan(&p, &p), &interleave_matrix(n, 1, 1))
}

fn coord2(n: usize, j: usize, k: usize) -> Vec<Int> {
    let mut v = vec![Int::ZERO; 2 * n];
    if j > 0 {
        v[2 * (j - 1) + k] = Int::ONE;
    }
    v
}

fn combo(terms: &[(i64, Vec<Int>)]) -> Vec<Int> {
    let len = terms[0].1.len();
    let mut v = vec![Int::ZERO; len];
    for (c, t) in terms {
        for (x, y) in v.iter_mut().zip(t) {
            *x += Int::from(*c) * y;
        }
    }
    v
}

/// The bipermutahedral fan on `R^{2n}` (coordinates `(a_1, b_1, …)`): on each
/// region where `a_i + b_i` is minimal, the cells cut by all comparisons of
/// `a`-values, of `b`-values, and of `a_j + b_k` against `a_i + b_i`.
pub fn bipermutahedral_fan(n: usize) -> Fan {
    let rank = 2 * n;
    let sum = |j: usize| combo(&[(1, coord2(n, j, 0)), (1, coord2(n, j, 1))]);
    let pieces: Vec<Vec<Cone>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let region = crate::scaffold::apex_region(rank, n, i, sum);
            let mut normals = Vec::new();
            for j in 0..=n {
                for k in j + 1..=n {
                    normals.push(combo(&[(1, coord2(n, j, 0)), (-1, coord2(n, k, 0))]));
                    normals.push(combo(&[(1, coord2(n, j, 1)), (-1, coord2(n, k, 1))]));
                }
            }
            for j in 0..=n {
                for k in 0..=n {
                    normals.push(combo(&[(1, coord2(n, j, 0)), (1, coord2(n, k, 1)), (-1, sum(i))]));
                }
            }
            let normals: Vec<Vec<Int>> = normals.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
            let arr = Arrangement::new(rank, normals).expect("nonzero normals");
            chambers_within(&region, arr.normals())
        })
        .collect();
    Fan::from_maximal(rank, pieces.into_iter().flatten().collect()).with_complete(true)
}

/// Comparison of `a_i + b_i` with another value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Lt,
    Eq,
    Gt,
}

fn cmp_rat(a: &Rat, b: &Rat) -> Cmp {
    match a.cmp(b) {
        std::cmp::Ordering::Less => Cmp::Lt,
        std::cmp::Ordering::Equal => Cmp::Eq,
        std::cmp::Ordering::Greater => Cmp::Gt,
    }
}

/// Combinatorial data of a point of `R^{2n}` relative to the bipermutahedral fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipermCell {
    pub apex: usize,
    pub a_order: OrderedPartition,
    pub b_order: OrderedPartition,
    /// `(j, k) ↦` comparison of `a_apex + b_apex` with `a_j + b_k`.
    pub antidiag_comparisons: BTreeMap<(usize, usize), Cmp>,
}

fn preorder(values: &[Rat]) -> OrderedPartition {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&x, &y| values[x].cmp(&values[y]).then(x.cmp(&y)));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match blocks.last_mut() {
            Some(b) if values[b[0]] == values[i] => b.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    OrderedPartition { blocks }
}

fn split_point(p: &[Rat]) -> Result<(Vec<Rat>, Vec<Rat>)> {
    if !p.len().is_multiple_of(2) {
        return Err(Error::Dimension("bipermutahedral points have even length".into()));
    }
    let n = p.len() / 2;
    let mut a = vec![Rat::ZERO];
    let mut b = vec![Rat::ZERO];
    for j in 0..n {
        a.push(p[2 * j].clone());
        b.push(p[2 * j + 1].clone());
    }
    Ok((a, b))
}

impl BipermCell {
    pub fn of_point(p: &[Rat]) -> Result<BipermCell> {
        let (a, b) = split_point(p)?;
        let n = a.len() - 1;
        let sums: Vec<Rat> = (0..=n).map(|j| &a[j] + &b[j]).collect();
        let apex = (0..=n)
            .min_by(|&x, &y| sums[x].cmp(&sums[y]).then(x.cmp(&y)))
            .expect("nonempty");
        let mut antidiag_comparisons = BTreeMap::new();
        for j in 0..=n {
            for k in 0..=n {
                antidiag_comparisons.insert((j, k), cmp_rat(&sums[apex], &(&a[j] + &b[k])));
            }
        }
        Ok(BipermCell {
            apex,
            a_order: preorder(&a),
            b_order: preorder(&b),
            antidiag_comparisons,
        })
    }
}

fn label(j: usize, n: usize) -> String {
    if n <= 9 {
        j.to_string()
    } else {
        format!("{j},")
    }
}

/// Bar-notation bisequence of a point of `R^{2n}` with coordinates `(a_1, b_1, …)`.
///
/// Each label `j` contributes the values `a_j` and `m - b_j`, where `m` is the
/// minimum of `a_k + b_k`; the values are grouped by equality and listed in
/// decreasing order, and a label whose two values coincide is written once.
pub fn bisequence_of(p: &[Rat]) -> Result<String> {
    let (a, b) = split_point(p)?;
    let n = a.len() - 1;
    let m = (0..=n).map(|j| &a[j] + &b[j]).min().expect("nonempty");
    let mut entries: Vec<(Rat, usize)> = Vec::new();
    for j in 0..=n {
        let u = a[j].clone();
        let w = &m - &b[j];
        if u == w {
            entries.push((u, j));
        } else {
            entries.push((u, j));
            entries.push((w, j));
        }
    }
    entries.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<Rat> = None;
    for (v, j) in entries {
        if last.as_ref() == Some(&v) {
            parts.last_mut().expect("part").push(j);
        } else {
            parts.push(vec![j]);
            last = Some(v);
        }
    }
    let strs: Vec<String> = parts
        .iter()
        .map(|part| {
            let s: String = part.iter().map(|&j| label(j, n)).collect();
            s.trim_end_matches(',').to_string()
        })
        .collect();
    Ok(strs.join("|"))
}

/// The cone of `R^{2n}` whose relative interior carries the given bisequence.
pub fn parse_bisequence(s: &str, n: usize) -> Result<Cone> {
    let parts: Vec<&str> = s.trim().split('|').collect();
    let mut labels: Vec<Vec<usize>> = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::parse(format!("part {}", pi + 1), "empty part"));
        }
        let items: Vec<usize> = if n <= 9 && !part.contains(',') {
            part.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::parse(format!("part {}", pi + 1), format!("unexpected character {c:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            part.split(',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(format!("part {}", pi + 1), format!("bad label {t:?}")))
                })
                .collect::<Result<_>>()?
        };
        labels.push(items);
    }
    let mut count = vec![0usize; n + 1];
    for part in &labels {
        for &j in part {
            if j > n {
                return Err(Error::parse("labels", format!("label {j} exceeds n = {n}")));
            }
            count[j] += 1;
        }
    }
    if let Some(j) = (0..=n).find(|&j| count[j] == 0 || count[j] > 2) {
        return Err(Error::parse("labels", format!("label {j} appears {} times", count[j])));
    }
    let Some(apex) = (0..=n).find(|&j| count[j] == 1) else {
        return Err(Error::parse("labels", "no label appears exactly once"));
    };
    let sum_apex = combo(&[(1, coord2(n, apex, 0)), (1, coord2(n, apex, 1))]);
    let mut seen = vec![0usize; n + 1];
    let mut forms: Vec<Vec<Vec<Int>>> = Vec::new();
    for part in &labels {
        let mut fs = Vec::new();
        for &j in part {
            let f = if count[j] == 1 || seen[j] == 0 {
                coord2(n, j, 0)
            } else {
                combo(&[(1, sum_apex.clone()), (-1, coord2(n, j, 1))])
            };
            seen[j] += 1;
            fs.push(f);
        }
        forms.push(fs);
    }
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for (i, fs) in forms.iter().enumerate() {
        for w in fs.windows(2) {
            eqs.push(combo(&[(1, w[0].clone()), (-1, w[1].clone())]));
        }
        if i + 1 < forms.len() {
            ineqs.push(combo(&[(1, fs[0].clone()), (-1, forms[i + 1][0].clone())]));
        }
    }
    for j in 0..=n {
        if count[j] == 1 {
            // a_j + b_j is minimal: a_j = m - b_j
            eqs.push(combo(&[
                (1, coord2(n, j, 0)),
                (1, coord2(n, j, 1)),
                (-1, sum_apex.clone()),
            ]));
        }
    }
    let eqs: Vec<Vec<Int>> = eqs.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    Ok(Cone::from_inequalities(2 * n, &ineqs, &eqs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, to_rat_vec};

    fn fubini(n: usize) -> usize {
        // ordered set partitions of an n-set, by the recurrence over the first block
        let mut f = vec![1usize; n + 1];
        for m in 1..=n {
            let mut s = 0;
            let mut binom = 1usize;
            for k in 1..=m {
                binom = binom * (m - k + 1) / k;
                s += binom * f[m - k];
            }
            f[m] = s;
        }
        f[n]
    }

    #[test]
    fn permutahedral_counts() {
        assert_eq!(permutahedral_fan(1).maximal_cones().len(), 2);
        assert_eq!(permutahedral_fan(2).maximal_cones().len(), 6);
        assert_eq!(permutahedral_fan(2).all_cones().len(), 13);
        assert_eq!(permutahedral_fan(3).maximal_cones().len(), 24);
        for n in 1..=3 {
            let f = permutahedral_fan(n);
            assert_eq!(ordered_partitions(n).len(), fubini(n + 1));
            assert_eq!(f.all_cones().len(), fubini(n + 1));
            for o in ordered_partitions(n) {
                assert!(f.contains_cone(&o.cone()), "{o}");
            }
            assert!(f.check_fan().ok);
            assert!(f.check_complete().ok);
        }
    }

    #[test]
    fn braid_arrangement_agrees() {
        for n in 1..=3 {
            let mut normals = Vec::new();
            for i in 0..=n {
                for j in i + 1..=n {
                    let mut v = vec![Int::ZERO; n];
                    if i > 0 {
                        v[i - 1] = Int::ONE;
                    }
                    v[j - 1] = -Int::ONE;
                    normals.push(v);
                }
            }
            let arr = crate::fan::fan_from_arrangement(&Arrangement::new(n, normals).unwrap());
            assert_eq!(arr, permutahedral_fan(n));
        }
    }

    #[test]
    fn biperm_small() {
        let f = bipermutahedral_fan(1);
        assert_eq!(f.maximal_cones().len(), 6);
        assert!(f.check_fan().ok);
        assert!(f.check_complete().ok);
        assert!(crate::fan::is_refinement(&f, &permutahedral_square(1)).unwrap());
    }

    #[test]
    fn bisequence_example() {
        let p = vec![rat(-1, 1), rat(2, 1), rat(1, 1), rat(1, 1)];
        assert_eq!(bisequence_of(&p).unwrap(), "2|0|12|1");
        assert_eq!(bisequence_of(&[rat(0, 1), rat(0, 1)]).unwrap(), "01");
        let c = parse_bisequence("2|0|12|1", 2).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(c.locate_point(&p) == crate::cone::Position::RelativeInterior);
    }

    #[test]
    fn bisequence_round_trip_n1() {
        let f = bipermutahedral_fan(1);
        for c in f.all_cones() {
            let p = to_rat_vec(&c.relative_interior_point());
            let s = bisequence_of(&p).unwrap();
            assert_eq!(&parse_bisequence(&s, 1).unwrap(), c, "{s}");
        }
    }

    #[test]
    fn malformed_bisequences() {
        assert!(parse_bisequence("2||1", 2).is_err());
        assert!(parse_bisequence("2|x|1", 2).is_err());
        assert!(parse_bisequence("22|1|1", 2).is_err());
        assert!(parse_bisequence("5|0", 2).is_err());
    }
}
