//! Exact integer linear algebra: 2x2 matrices, Hermite and Smith normal
//! forms, Hecke coset representatives and right divisors of pairs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::pairspace::PairB;

/// A 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2([[a, b], [c, d]])
    }
}

impl<T: Clone> Mat2<T> {
    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        let m = &self.0;
        Mat2::new(f(&m[0][0]), f(&m[0][1]), f(&m[1][0]), f(&m[1][1]))
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].clone(), m[1][0].clone(), m[0][1].clone(), m[1][1].clone())
    }
}

impl<T> Mat2<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Mat2::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
    }

    /// Adjugate, so that `M * adj(M) = det(M) * I`.
    pub fn adj(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[1][1].clone(), -m[0][1].clone(), -m[1][0].clone(), m[0][0].clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][j].clone() + b[i][j].clone();
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][j].clone() - b[i][j].clone();
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s.clone() * x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_zero())
    }
}

impl Mat2<i64> {
    /// Inverse of a unimodular integer matrix.
    pub fn inv_unimodular(&self) -> Option<Self> {
        match self.det() {
            1 => Some(self.adj()),
            -1 => Some(self.adj().scale(&-1)),
            _ => None,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "({},{};{},{})", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = &out.data[i * o.cols + j] + a * o.get(k, j);
                    out.data[i * o.cols + j] = v;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[dst * self.cols + j] + k * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(k, k) * a.get(i, j) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * prev
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * M = H`,
/// `U` unimodular, `H` in echelon form with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let nz: Vec<usize> = (pivot_row..m.rows).filter(|&i| !h.get(i, col).is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| h.get(i, col).abs()).unwrap();
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..m.rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(h.get(pivot_row, col));
                let k = -q;
                h.add_row(i, pivot_row, &k);
                u.add_row(i, pivot_row, &k);
                if !h.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(pivot_row, col).is_zero() {
            continue;
        }
        if h.get(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h.get(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = h.get(i, col).div_floor(&p);
            if !q.is_zero() {
                let k = -q;
                h.add_row(i, pivot_row, &k);
                u.add_row(i, pivot_row, &k);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    (h, u)
}

/// Invariant factors `d1 | d2 | ...` (nonzero ones only) of an integer matrix.
pub fn snf_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pick smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        for i in 0..rows {
            a.data.swap(i * cols + t, i * cols + bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a.get(i, t).div_floor(a.get(t, t));
            a.add_row(i, t, &-q);
            if !a.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = a.get(t, j).div_floor(a.get(t, t));
            for i in 0..rows {
                let v = a.get(i, j) - &q * a.get(i, t);
                a.set(i, j, v);
            }
            if !a.get(t, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the rest of the block
        let p = a.get(t, t).clone();
        let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| !a.get(i, j).is_multiple_of(&p));
        if let Some((i, _)) = bad {
            a.add_row(t, i, &BigInt::one());
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Gcd of all k x k minors of `m` (zero if every minor vanishes).
pub fn gcd_of_minors(m: &IntMatrix, k: usize) -> BigInt {
    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(s: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in s..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }
    let mut g = BigInt::zero();
    for rs in combos(m.rows, k) {
        for cs in combos(m.cols, k) {
            let sub = IntMatrix::from_rows(&rs.iter().map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect::<Vec<_>>()).collect::<Vec<_>>());
            g = g.gcd(&sub.det());
        }
    }
    g
}

/// Upper-triangular representatives `(a,b;0,d)`, `ad = n`, `0 <= b < d`, of
/// the left cosets of `GL2(Z)` in the integer matrices of determinant `n`.
pub fn hecke_coset_reps(n: i64) -> Result<Vec<Mat2<i64>>> {
    if n <= 0 {
        return domain(format!("hecke_coset_reps needs n >= 1, got {n}"));
    }
    let mut out = Vec::new();
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let d = n / a;
        for b in 0..d {
            out.push(Mat2::new(a, b, 0, d));
        }
    }
    Ok(out)
}

/// `B * s` where `B` is read as a 1x2 row `[T1, T2]` over matrices and `s`
/// is a 2x2 scalar matrix: `[s11 T1 + s21 T2, s12 T1 + s22 T2]`.
pub fn pair_times<T>(b: &crate::pairspace::Pair<T>, s: &Mat2<T>) -> crate::pairspace::Pair<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let s = &s.0;
    crate::pairspace::Pair {
        t1: b.t1.scale(&s[0][0]).add(&b.t2.scale(&s[1][0])),
        t2: b.t1.scale(&s[0][1]).add(&b.t2.scale(&s[1][1])),
    }
}

/// The Hecke representatives `r` of determinant `n` for which `B r^{-1}` is
/// integral, together with `B' = B * adj(r) / n`.
pub fn right_divisors(b: &PairB, n: i64) -> Result<Vec<(Mat2<i64>, PairB)>> {
    let reps = hecke_coset_reps(n)?;
    Ok(reps
        .into_iter()
        .filter_map(|r| {
            let p = pair_times(b, &r.adj());
            let ok = p.t1.0.iter().chain(p.t2.0.iter()).flatten().all(|x| x % n == 0);
            ok.then(|| (r, crate::pairspace::Pair { t1: p.t1.map(|x| x / n), t2: p.t2.map(|x| x / n) }))
        })
        .collect())
}

/// All right divisors of `B` over every admissible determinant: `n` runs
/// over the positive divisors of the gcd of the 2x2 minors of `B`.
pub fn all_right_divisors(b: &PairB) -> Vec<(Mat2<i64>, PairB)> {
    let g = crate::pairspace::minor_gcd(b);
    if g == 0 {
        return right_divisors(b, 1).unwrap_or_default();
    }
    let mut out = Vec::new();
    for n in divisors(g) {
        out.extend(right_divisors(b, n).expect("positive n"));
    }
    out
}

/// Positive divisors of `|n|` in increasing order.
pub fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Sum of `d^k` over the positive divisors `d` of `n`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n as i64).into_iter().map(|d| BigInt::from(d).pow(k)).sum()
}

/// Extended gcd returning `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// An `SL2(Z)` matrix whose first column is the primitive vector `(x, y)`.
pub fn complete_to_sl2(x: i64, y: i64) -> Option<Mat2<i64>> {
    let (g, a, b) = ext_gcd(x, y);
    if g != 1 {
        return None;
    }
    // x*a + y*b = 1  =>  det [[x, -b], [y, a]] = 1
    Some(Mat2::new(x, -b, y, a))
}
