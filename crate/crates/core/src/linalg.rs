//! Exact integer and rational linear algebra: Hermite and Smith normal forms,
//! lattices, kernels and rational solves.

use std::cmp::Ordering;
use std::fmt;

use dashu_base::{ExtendedGcd, Gcd, UnsignedAbs};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

pub type Int = IBig;
pub type Rat = RBig;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::from_parts_signed(Int::from(n), Int::from(d))
}

pub fn rat_from_int(v: &Int) -> Rat {
    Rat::from(v.clone())
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Int::ZERO;
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn dot_rat(a: &[Int], b: &[Rat]) -> Rat {
    let mut s = Rat::ZERO;
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += Rat::from(x.clone()) * y;
        }
    }
    s
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    Int::from(a.gcd(b))
}

/// Floor division for integers with positive divisor.
pub fn floor_div(a: &Int, b: &Int) -> Int {
    let q = a / b;
    if (&q * b) != *a && (a.signum() != b.signum()) {
        q - Int::ONE
    } else {
        q
    }
}

/// Divide out the content of an integer vector. The zero vector is returned unchanged.
pub fn primitive(mut v: Vec<Int>) -> Vec<Int> {
    let mut g = Int::ZERO;
    for x in &v {
        if !x.is_zero() {
            g = gcd(&g, x);
            if g == Int::ONE {
                return v;
            }
        }
    }
    if g.is_zero() || g == Int::ONE {
        return v;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
    v
}

/// Scale a rational vector to the primitive integer vector on the same ray.
pub fn primitive_from_rat(v: &[Rat]) -> Vec<Int> {
    let mut l = UBig::ONE;
    for x in v {
        let d = x.denominator();
        let g = l.clone().gcd(d);
        l = &l / &g * d;
    }
    let li = Int::from(l);
    let out = v
        .iter()
        .map(|x| {
            let (n, d) = x.clone().into_parts();
            n * (&li / Int::from(d))
        })
        .collect();
    primitive(out)
}

/// Primitive vector with first nonzero coordinate positive; used to identify
/// hyperplanes given by normals of either sign.
pub fn normalize_line(v: Vec<Int>) -> Vec<Int> {
    let mut v = primitive(v);
    if let Some(x) = v.iter().find(|x| !x.is_zero()) {
        if x.signum() < Int::ZERO {
            for y in v.iter_mut() {
                *y = -&*y;
            }
        }
    }
    v
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn neg_vec(v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| -x).collect()
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from(x.clone())).collect()
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::ONE;
        }
        m
    }

    /// Build from rows; `cols` is needed to describe matrices with no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Int>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        IntMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| ints(r)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix acting on a column vector.
    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.rows).map(|i| dot_rat(self.row(i), v)).collect()
    }

    /// Row vector times matrix: the pullback of a linear form.
    pub fn pull_back(&self, form: &[Int]) -> Vec<Int> {
        assert_eq!(form.len(), self.rows, "dimension mismatch in pull_back");
        let mut out = vec![Int::ZERO; self.cols];
        for (i, a) in form.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.rows_vec(), self.cols)
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.rows_vec();
        let mut sign = Int::ONE;
        let mut prev = Int::ONE;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::ZERO;
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = Int::ZERO;
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            Int::ONE
        } else {
            sign * &a[n - 1][n - 1]
        }
    }

    fn row_combine(&mut self, r: usize, i: usize, s: &Int, t: &Int, u: &Int, v: &Int) {
        // (row_r, row_i) <- (s row_r + t row_i, u row_r + v row_i)
        for j in 0..self.cols {
            let a = self.data[r * self.cols + j].clone();
            let b = self.data[i * self.cols + j].clone();
            if a.is_zero() && b.is_zero() {
                continue;
            }
            self.data[r * self.cols + j] = s * &a + t * &b;
            self.data[i * self.cols + j] = u * &a + v * &b;
        }
    }

    fn row_axpy(&mut self, i: usize, q: &Int, r: usize) {
        // row_i -= q row_r
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let b = self.data[r * self.cols + j].clone();
            if !b.is_zero() {
                self.data[i * self.cols + j] -= q * &b;
            }
        }
    }

    fn row_negate(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = -&*x;
        }
    }
}

/// Row-style Hermite normal form. Returns `(h, u)` with `u` unimodular and
/// `u * m == h`; pivots are positive, entries above a pivot lie in
/// `[0, pivot)`, and zero rows sit at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        for i in r + 1..m.rows {
            if h.get(i, c).is_zero() {
                continue;
            }
            let a = h.get(r, c).clone();
            let b = h.get(i, c).clone();
            let (g, s, t) = (&a).gcd_ext(&b);
            let g = Int::from(g);
            let uu = -(&b / &g);
            let vv = &a / &g;
            h.row_combine(r, i, &s, &t, &uu, &vv);
            u.row_combine(r, i, &s, &t, &uu, &vv);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).signum() < Int::ZERO {
            h.row_negate(r);
            u.row_negate(r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = floor_div(h.get(i, c), &p);
            h.row_axpy(i, &q, r);
            u.row_axpy(i, &q, r);
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero invariant factors of the Smith normal form, in divisibility order.
pub fn snf_invariants(m: &IntMatrix) -> Vec<Int> {
    let mut a: Vec<Vec<Int>> = m.rows_vec();
    let (nr, nc) = (m.rows, m.cols);
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].clone().unsigned_abs() < a[bi][bj].clone().unsigned_abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for j in t..nc {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            let p = a[t][t].clone();
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..nc {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(Int::from(a[t][t].clone().unsigned_abs()));
        t += 1;
    }
    out
}

/// Rank of a list of rows over the rationals.
pub fn rank_of_rows(rows: &[Vec<Int>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = IntMatrix::from_rows(cols, rows.to_vec());
    let (h, _) = hnf(&m);
    (0..h.rows).filter(|&i| !is_zero_vec(h.row(i))).count()
}

/// Basis of the integer left kernel `{z : z m = 0}`, saturated.
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let (h, u) = hnf(m);
    (0..h.rows)
        .filter(|&i| is_zero_vec(h.row(i)))
        .map(|i| u.row(i).to_vec())
        .collect()
}

/// Integer basis of `{x : row . x = 0 for every row}`.
pub fn integer_kernel(rows: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    if rows.is_empty() {
        return IntMatrix::identity(cols).rows_vec();
    }
    left_kernel(&IntMatrix::from_rows(cols, rows.to_vec()).transpose())
}

/// A lattice given by its Hermite basis (independent rows).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeBasis {
    ambient: usize,
    basis: Vec<Vec<Int>>,
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", IntMatrix::from_rows(self.ambient, self.basis.clone()))
    }
}

impl LatticeBasis {
    pub fn from_generators(ambient: usize, gens: Vec<Vec<Int>>) -> Self {
        if gens.is_empty() {
            return Self::zero(ambient);
        }
        let (h, _) = hnf(&IntMatrix::from_rows(ambient, gens));
        let basis = (0..h.rows)
            .map(|i| h.row(i).to_vec())
            .filter(|r| !is_zero_vec(r))
            .collect();
        LatticeBasis { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        LatticeBasis {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        LatticeBasis {
            ambient,
            basis: IntMatrix::identity(ambient).rows_vec(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient, self.basis.clone())
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        let mut v = v.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if v[c].is_zero() {
                continue;
            }
            if !(&v[c] % &row[c]).is_zero() {
                return false;
            }
            let q = &v[c] / &row[c];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        is_zero_vec(&v)
    }

    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.basis.iter().all(|r| self.contains(r))
    }

    /// `span(self) ∩ Z^n`.
    pub fn saturate(&self) -> LatticeBasis {
        if self.basis.is_empty() {
            return self.clone();
        }
        let perp = integer_kernel(&self.basis, self.ambient);
        let sat = integer_kernel(&perp, self.ambient);
        LatticeBasis::from_generators(self.ambient, sat)
    }

    pub fn is_saturated(&self) -> bool {
        *self == self.saturate()
    }

    /// Index of `self` inside `outer`, assuming the same rank and `self ⊆ outer`.
    pub fn index_in(&self, outer: &LatticeBasis) -> Option<Int> {
        if self.rank() != outer.rank() || !outer.contains_lattice(self) {
            return None;
        }
        let coords = self.coordinates_in(outer)?;
        let m = IntMatrix::from_rows(outer.rank(), coords);
        Some(Int::from(m.det().unsigned_abs()))
    }

    /// Coordinates of each basis vector of `self` in the basis of `outer`.
    pub fn coordinates_in(&self, outer: &LatticeBasis) -> Option<Vec<Vec<Int>>> {
        let mut out = Vec::with_capacity(self.rank());
        for v in &self.basis {
            out.push(outer.coordinates(v)?);
        }
        Some(out)
    }

    /// Integer coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut v = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let c = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if !(&v[c] % &row[c]).is_zero() {
                return None;
            }
            let q = &v[c] / &row[c];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
            coeffs.push(q);
        }
        if is_zero_vec(&v) {
            Some(coeffs)
        } else {
            None
        }
    }
}

/// Intersection of two lattices in the same ambient space.
pub fn lattice_intersect(a: &LatticeBasis, b: &LatticeBasis) -> LatticeBasis {
    assert_eq!(a.ambient, b.ambient, "ambient mismatch in lattice_intersect");
    if a.rank() == 0 || b.rank() == 0 {
        return LatticeBasis::zero(a.ambient);
    }
    let mut stacked = a.basis.clone();
    stacked.extend(b.basis.iter().cloned());
    let ker = left_kernel(&IntMatrix::from_rows(a.ambient, stacked));
    let gens = ker
        .iter()
        .map(|z| {
            let mut v = vec![Int::ZERO; a.ambient];
            for (c, row) in z.iter().zip(&a.basis) {
                if c.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x += c * y;
                }
            }
            v
        })
        .collect();
    LatticeBasis::from_generators(a.ambient, gens)
}

/// Image of a lattice under `f` (target × source, acting on columns).
pub fn image_lattice(f: &IntMatrix, l: &LatticeBasis) -> LatticeBasis {
    assert_eq!(f.cols, l.ambient, "dimension mismatch in image_lattice");
    LatticeBasis::from_generators(f.rows, l.basis.iter().map(|v| f.apply(v)).collect())
}

/// `{v ∈ source : f v ∈ l}` intersected with `within`.
pub fn preimage_lattice(f: &IntMatrix, l: &LatticeBasis, within: &LatticeBasis) -> LatticeBasis {
    let n = within.ambient;
    if within.rank() == 0 {
        return LatticeBasis::zero(n);
    }
    let images: Vec<Vec<Int>> = within.basis.iter().map(|v| f.apply(v)).collect();
    let mut stacked = images.clone();
    stacked.extend(l.basis.iter().cloned());
    let ker = left_kernel(&IntMatrix::from_rows(f.rows, stacked));
    let k = within.rank();
    let gens = ker
        .iter()
        .map(|z| {
            let mut v = vec![Int::ZERO; n];
            for (c, row) in z[..k].iter().zip(&within.basis) {
                if c.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x += c * y;
                }
            }
            v
        })
        .collect();
    LatticeBasis::from_generators(n, gens)
}

/// Reduced row echelon form over the rationals.
#[derive(Clone, Debug)]
pub struct Rref {
    pub cols: usize,
    pub rows: Vec<(usize, Vec<Rat>)>,
}

impl Rref {
    pub fn new(rows: &[Vec<Int>], cols: usize) -> Self {
        let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| to_rat_vec(r)).collect();
        let mut out: Vec<(usize, Vec<Rat>)> = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = Rat::ONE / &a[r][c];
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            r += 1;
            if r == a.len() {
                break;
            }
        }
        for row in a.into_iter().take(r) {
            let c = row.iter().position(|x| !x.is_zero()).expect("pivot");
            out.push((c, row));
        }
        Rref { cols, rows: out }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` modulo the row space so that every pivot coordinate vanishes.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (c, row) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let f = v[*c].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn reduce_int(&self, v: &[Int]) -> Vec<Int> {
        if self.rows.is_empty() {
            return primitive(v.to_vec());
        }
        primitive_from_rat(&self.reduce(&to_rat_vec(v)))
    }

    pub fn in_span(&self, v: &[Int]) -> bool {
        self.reduce(&to_rat_vec(v)).iter().all(|x| x.is_zero())
    }
}

/// Solve `m x = b` over the rationals; free variables are set to zero.
pub fn solve_rational(m: &IntMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), m.rows, "dimension mismatch in solve_rational");
    let n = m.cols;
    let mut a: Vec<Vec<Rat>> = (0..m.rows)
        .map(|i| {
            let mut r = to_rat_vec(m.row(i));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rat::ONE / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    if a.iter().skip(r).any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::ZERO; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(x)
}

/// Lexicographic comparison of integer vectors.
pub fn cmp_vec(a: &[Int], b: &[Int]) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn hnf_small_example() {
        let (h, u) = hnf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m(&[&[2, 4], &[6, 8]])), h);
        assert_eq!(u.det().unsigned_abs(), UBig::ONE);
    }

    #[test]
    fn hnf_rank_deficient() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 5]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert!(is_zero_vec(h.row(2)));
        assert_eq!(h.row(0), ints(&[1, 2, 3]).as_slice());
        assert_eq!(h.row(1), ints(&[0, 0, 5]).as_slice());
    }

    #[test]
    fn gcd_ext_identity() {
        for (a, b) in [(0i64, 5i64), (-4, 6), (7, -3), (0, -2), (12, 0)] {
            let (g, s, t) = (&int(a)).gcd_ext(&int(b));
            assert_eq!(Int::from(g), s * int(a) + t * int(b));
        }
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf_invariants(&m(&[&[2, 4], &[6, 8]])), ints(&[2, 4]));
        assert_eq!(snf_invariants(&m(&[&[2, 0], &[0, 3]])), ints(&[1, 6]));
        assert_eq!(snf_invariants(&m(&[&[0, 0], &[0, 0]])), Vec::<Int>::new());
        assert_eq!(snf_invariants(&IntMatrix::identity(3)), ints(&[1, 1, 1]));
    }

    #[test]
    fn lattice_ops() {
        let a = LatticeBasis::from_generators(2, vec![ints(&[2, 0]), ints(&[0, 1])]);
        let b = LatticeBasis::from_generators(2, vec![ints(&[1, 0]), ints(&[0, 3])]);
        let c = lattice_intersect(&a, &b);
        assert_eq!(c, LatticeBasis::from_generators(2, vec![ints(&[2, 0]), ints(&[0, 3])]));
        let s = LatticeBasis::from_generators(3, vec![ints(&[2, 2, 0])]).saturate();
        assert_eq!(s.basis(), &[ints(&[1, 1, 0])]);
        assert_eq!(a.index_in(&LatticeBasis::full(2)), Some(int(2)));
        let f = m(&[&[1, 1]]);
        assert_eq!(image_lattice(&f, &a), LatticeBasis::full(1));
        let pre = preimage_lattice(
            &f,
            &LatticeBasis::from_generators(1, vec![ints(&[2])]),
            &LatticeBasis::full(2),
        );
        assert!(pre.contains(&ints(&[1, 1])));
        assert!(!pre.contains(&ints(&[1, 0])));
    }

    #[test]
    fn kernels_and_solve() {
        let k = integer_kernel(&[ints(&[1, 1, 1])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot(v, &ints(&[1, 1, 1])).is_zero());
        }
        let x = solve_rational(&m(&[&[2, 0], &[0, 3]]), &[rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 3)]);
        assert!(solve_rational(&m(&[&[1, 1], &[1, 1]]), &[rat(1, 1), rat(2, 1)]).is_none());
    }

    #[test]
    fn primitive_and_lines() {
        assert_eq!(primitive(ints(&[4, -6, 0])), ints(&[2, -3, 0]));
        assert_eq!(normalize_line(ints(&[0, -2, 4])), ints(&[0, 1, -2]));
        assert_eq!(primitive_from_rat(&[rat(1, 2), rat(-1, 3)]), ints(&[3, -2]));
        assert_eq!(floor_div(&int(-3), &int(2)), int(-2));
        assert_eq!(floor_div(&int(3), &int(2)), int(1));
    }
}
