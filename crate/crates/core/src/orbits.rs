//! Orbit reductions: primitive vectors of the split `(3,3)` lattice, the
//! two-parameter normal form `[y_alpha, -n b4 - m b-4 + r b-3]` for pairs,
//! and the rank stratification of pairs over `Q`.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::{complete_to_sl2, pair_times, IntMatrix, Mat2};
use crate::pairspace::{content, from_coords, is_pos_def, psd_status, q, q_of_b, Pair, PairB, PairQ, PsdStatus};

const MOVE_BUDGET: usize = 10_000;

/// A vector of `V33` in the basis `b2, b3, b4, b-4, b-3, b-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct V33Vector(pub [i64; 6]);

impl V33Vector {
    pub fn pairing(&self, o: &Self) -> i64 {
        (0..6).map(|i| self.0[i] * o.0[5 - i]).sum()
    }

    pub fn norm(&self) -> i64 {
        self.pairing(self)
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, x| g.gcd(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrbitKind {
    Isotropic,
    Anisotropic,
}

/// `n b2` (isotropic) or `n y_alpha = n b3 + (n alpha / 2) b-3`, with an
/// integral isometry `transform` carrying the input onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCanonical {
    pub kind: OrbitKind,
    pub n: i64,
    pub alpha: i64,
    pub transform: [[i64; 6]; 6],
}

impl OrbitCanonical {
    pub fn vector(&self) -> V33Vector {
        let mut c = [0; 6];
        match self.kind {
            OrbitKind::Isotropic => c[0] = self.n,
            OrbitKind::Anisotropic => {
                c[1] = self.n;
                c[4] = self.n * self.alpha / 2;
            }
        }
        V33Vector(c)
    }
}

fn partner(i: usize) -> usize {
    5 - i
}

fn plane(i: usize) -> usize {
    i.min(5 - i)
}

struct V33State {
    c: [i128; 6],
    g: [[i128; 6]; 6],
    moves: usize,
}

impl V33State {
    fn apply(&mut self, m: [[i128; 6]; 6]) -> Result<()> {
        self.moves += 1;
        if self.moves > MOVE_BUDGET {
            return Err(Error::ReductionIncomplete(format!("move budget {MOVE_BUDGET} exhausted")));
        }
        let mv = |v: &[i128; 6]| std::array::from_fn(|i| (0..6).map(|j| m[i][j] * v[j]).sum());
        self.c = mv(&self.c);
        let cols: Vec<[i128; 6]> = (0..6).map(|j| mv(&std::array::from_fn(|i| self.g[i][j]))).collect();
        self.g = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]));
        Ok(())
    }

    /// `x -> x + k((x, e_a) e_b - (x, e_b) e_a)`: adds `k c_{p(a)}` to `c_b`
    /// and `-k c_{p(b)}` to `c_a`.
    fn eichler(&mut self, a: usize, b: usize, k: i128) -> Result<()> {
        debug_assert!(plane(a) != plane(b));
        let mut m = ident6();
        m[b][partner(a)] += k;
        m[a][partner(b)] -= k;
        self.apply(m)
    }

    fn swap_planes(&mut self, p: usize, q: usize) -> Result<()> {
        let mut perm: [usize; 6] = std::array::from_fn(|i| i);
        perm.swap(p, q);
        perm.swap(partner(p), partner(q));
        self.apply(std::array::from_fn(|i| std::array::from_fn(|j| i128::from(perm[i] == j))))
    }

    fn negate_plane(&mut self, p: usize) -> Result<()> {
        let mut m = ident6();
        m[p][p] = -1;
        m[partner(p)][partner(p)] = -1;
        self.apply(m)
    }

    /// Exchange `b_i` and `b_-i` in two planes at once.
    fn flip_planes(&mut self, p: usize, q: usize) -> Result<()> {
        let mut perm: [usize; 6] = std::array::from_fn(|i| i);
        for x in [p, q] {
            perm.swap(x, partner(x));
        }
        self.apply(std::array::from_fn(|i| std::array::from_fn(|j| i128::from(perm[i] == j))))
    }
}

fn ident6() -> [[i128; 6]; 6] {
    std::array::from_fn(|i| std::array::from_fn(|j| i128::from(i == j)))
}

fn round_div(a: i128, b: i128) -> i128 {
    let (q, r) = a.div_mod_floor(&b);
    if 2 * r.abs() > b.abs() {
        q + if (r > 0) == (b > 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Canonical representative of the orbit of a nonzero integral vector.
pub fn reduce_v33(y: &V33Vector) -> Result<OrbitCanonical> {
    let n = y.content();
    if n == 0 {
        return domain("reduce_v33 needs a nonzero vector");
    }
    let mut st = V33State { c: std::array::from_fn(|i| (y.0[i] / n) as i128), g: ident6(), moves: 0 };
    loop {
        let s = (0..6).filter(|&i| st.c[i] != 0).min_by_key(|&i| st.c[i].abs()).expect("nonzero");
        for t in 0..6 {
            if plane(t) != plane(s) && st.c[t] != 0 {
                let k = -round_div(st.c[t], st.c[s]);
                if k != 0 {
                    st.eichler(partner(s), t, k)?;
                }
            }
        }
        if (0..6).any(|t| plane(t) != plane(s) && st.c[t] != 0) {
            continue;
        }
        if st.c[s].abs() == 1 {
            break;
        }
        if st.c[partner(s)] % st.c[s] == 0 {
            return Err(Error::ReductionIncomplete("vector is not primitive after scaling".into()));
        }
        let t = (0..6).find(|&t| plane(t) != plane(s)).expect("another plane");
        st.eichler(s, t, 1)?;
    }
    let s = (0..6).find(|&i| st.c[i].abs() == 1 && (0..6).all(|t| plane(t) == plane(i) || st.c[t] == 0)).expect("unit coordinate");
    if st.c[s] < 0 {
        st.negate_plane(plane(s))?;
    }
    let mut s = s;
    if s > 2 {
        let other = (0..3).find(|&p| p != plane(s)).expect("another plane");
        st.flip_planes(plane(s), other)?;
        s = partner(s);
    }
    let x = st.c[partner(s)];
    let (kind, target) = if x == 0 { (OrbitKind::Isotropic, 0) } else { (OrbitKind::Anisotropic, 1) };
    if s != target {
        st.swap_planes(s, target)?;
    }
    let out = OrbitCanonical {
        kind,
        n,
        alpha: if x == 0 { 0 } else { (2 * x) as i64 },
        transform: std::array::from_fn(|i| std::array::from_fn(|j| st.g[i][j] as i64)),
    };
    verify_v33(y, &out)?;
    Ok(out)
}

fn verify_v33(y: &V33Vector, o: &OrbitCanonical) -> Result<()> {
    let g = &o.transform;
    let image: [i64; 6] = std::array::from_fn(|i| (0..6).map(|j| g[i][j] * y.0[j]).sum());
    let isometry = (0..6).all(|i| (0..6).all(|j| (0..6).map(|k| g[k][i] * g[5 - k][j]).sum::<i64>() == i64::from(i + j == 5)));
    let det = IntMatrix::from_rows(&g.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).det();
    if image != o.vector().0 || !isometry || !det.is_one() {
        return Err(Error::ReductionIncomplete("transform failed verification".into()));
    }
    Ok(())
}

/// An element `(g, h, u)` of `SL2(Z)^3` acting by
/// `[T1, T2] -> [g T1 h, g T2 h] * u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeTransform {
    pub left: Mat2<i64>,
    pub right: Mat2<i64>,
    pub pair: Mat2<i64>,
}

impl CubeTransform {
    pub fn identity() -> Self {
        CubeTransform { left: Mat2::identity(), right: Mat2::identity(), pair: Mat2::identity() }
    }

    pub fn apply(&self, b: &PairB) -> PairB {
        let side = |t: &Mat2<i64>| self.left.mul(t).mul(&self.right);
        pair_times(&Pair::new(side(&b.t1), side(&b.t2)), &self.pair)
    }

    /// `self` followed by `(g, h, u)`.
    fn then(&mut self, g: &Mat2<i64>, h: &Mat2<i64>, u: &Mat2<i64>) {
        self.left = g.mul(&self.left);
        self.right = self.right.mul(h);
        self.pair = self.pair.mul(u);
    }
}

/// `[y_alpha, -n b4 - m b-4 + r b-3]` and a transform reaching it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank3Canonical {
    pub alpha: i64,
    pub n: i64,
    pub m: i64,
    pub r: i64,
    pub transform: CubeTransform,
}

impl Rank3Canonical {
    pub fn pair(&self) -> PairB {
        normal_form_pair(self.alpha, self.n, self.m, self.r)
    }
}

/// `[y_alpha, -n b4 - m b-4 + r b-3]`.
pub fn normal_form_pair(alpha: i64, n: i64, m: i64, r: i64) -> PairB {
    Pair::new(Mat2::new(1, 0, 0, alpha / 2), from_coords([0, -n, -m, r]))
}

/// `g, h` in `SL2(Z)` with `g x h = diag(1, det x)` for primitive `x`.
fn snf2(x: &Mat2<i64>) -> Result<(Mat2<i64>, Mat2<i64>)> {
    let mut a = x.clone();
    let (mut g, mut h) = (Mat2::identity(), Mat2::identity());
    let rot = Mat2::new(0, -1, 1, 0);
    for _ in 0..MOVE_BUDGET {
        let m = &a.0;
        if m[0][1] == 0 && m[1][0] == 0 && m[0][0].abs() == 1 {
            if m[0][0] == -1 {
                g = Mat2::new(-1, 0, 0, -1).mul(&g);
            }
            return Ok((g, h));
        }
        let (i, j) = (0..4).map(|k| (k / 2, k % 2)).filter(|&(i, j)| m[i][j] != 0).min_by_key(|&(i, j)| m[i][j].abs()).ok_or_else(|| Error::ReductionIncomplete("zero matrix".into()))?;
        if i == 1 {
            g = rot.mul(&g);
            a = rot.mul(&a);
        }
        if j == 1 {
            h = h.mul(&rot.transpose());
            a = a.mul(&rot.transpose());
        }
        let p = a.0[0][0];
        let kr = round_div(a.0[1][0] as i128, p as i128) as i64;
        let el = Mat2::new(1, 0, -kr, 1);
        g = el.mul(&g);
        a = el.mul(&a);
        let kc = round_div(a.0[0][1] as i128, p as i128) as i64;
        let er = Mat2::new(1, -kc, 0, 1);
        h = h.mul(&er);
        a = a.mul(&er);
        if a.0[0][1] == 0 && a.0[1][0] == 0 && p.abs() > 1 {
            if a.0[1][1] % p == 0 {
                return Err(Error::ReductionIncomplete("matrix is not primitive".into()));
            }
            // bring the (1,1) entry into the first row
            let e = Mat2::new(1, 1, 0, 1);
            g = e.mul(&g);
            a = e.mul(&a);
        }
    }
    Err(Error::ReductionIncomplete("2x2 Smith form did not converge".into()))
}

fn nf_params(b: &PairB) -> (i64, i64, i64) {
    let t = &b.t2.0;
    (t[1][0], -t[0][1], t[1][1])
}

fn rank3_candidate(b: &PairB, x: i64, y: i64) -> Result<Rank3Canonical> {
    let mut tr = CubeTransform::identity();
    let u = complete_to_sl2(x, y).expect("coprime");
    tr.then(&Mat2::identity(), &Mat2::identity(), &u);
    let (g, h) = snf2(&tr.apply(b).t1)?;
    tr.then(&g, &h, &Mat2::identity());
    let alpha = 2 * tr.apply(b).t1.0[1][1];
    let shift = |tr: &mut CubeTransform| {
        let p = tr.apply(b).t2.0[0][0];
        tr.then(&Mat2::identity(), &Mat2::identity(), &Mat2::new(1, -p, 0, 1));
    };
    shift(&mut tr);
    let half = alpha / 2;
    for _ in 0..MOVE_BUDGET {
        let (n, m, r) = nf_params(&tr.apply(b));
        if n != 0 && 2 * r.abs() > (n * alpha).abs() {
            let k = round_div(r as i128, (n * alpha) as i128) as i64;
            tr.then(&Mat2::new(1, k, 0, 1), &Mat2::new(1, -k * half, 0, 1), &Mat2::identity());
        } else if m != 0 && 2 * r.abs() > (m * alpha).abs() {
            let k = round_div(r as i128, (m * alpha) as i128) as i64;
            tr.then(&Mat2::new(1, 0, k * half, 1), &Mat2::new(1, 0, -k, 1), &Mat2::identity());
        } else {
            let out = tr.apply(b);
            let (n, m, r) = nf_params(&out);
            let c = Rank3Canonical { alpha, n, m, r, transform: tr };
            if c.pair() != out {
                return Err(Error::ReductionIncomplete("normal form failed verification".into()));
            }
            return Ok(c);
        }
        shift(&mut tr);
    }
    Err(Error::ReductionIncomplete("normal form reduction did not converge".into()))
}

/// Reduce a primitive positive semi-definite pair of rank 3 (or 4) to
/// `[y_alpha, -n b4 - m b-4 + r b-3]` with `alpha >= 2`.
pub fn reduce_pair_rank3(b: &PairB) -> Result<Rank3Canonical> {
    if b.is_zero() || content(b) != 1 {
        return domain("reduce_pair_rank3 needs a primitive pair");
    }
    let rk = rank(&b.to_q())?;
    if rk < 3 {
        return domain(format!("pair has rank {rk}, need 3 or 4"));
    }
    if !is_pos_def(b) && matches!(psd_status(&b.to_q(), 1e-9, 0)?, PsdStatus::NotPsd { .. }) {
        return domain("pair is not positive semi-definite");
    }
    const BOX: i64 = 12;
    let mut cands = Vec::new();
    for x in -BOX..=BOX {
        for y in -BOX..=BOX {
            if x.gcd(&y) != 1 {
                continue;
            }
            let t = b.t1.scale(&x).add(&b.t2.scale(&y));
            let qt = q(&t);
            if qt > 0 && t.0.iter().flatten().fold(0i64, |g, v| g.gcd(v)) == 1 {
                cands.push((qt, x.abs() + y.abs(), x, y));
            }
        }
    }
    cands.sort();
    let best = cands.first().ok_or_else(|| Error::ReductionIncomplete("no primitive combination of positive norm in search box".into()))?.0;
    let mut out: Option<Rank3Canonical> = None;
    for &(_, _, x, y) in cands.iter().take_while(|c| c.0 == best) {
        let c = rank3_candidate(b, x, y)?;
        let key = |c: &Rank3Canonical| (c.n.abs() + c.m.abs(), c.r.abs(), -c.r, c.n, c.m);
        if out.as_ref().map_or(true, |o| key(&c) < key(o)) {
            out = Some(c);
        }
    }
    Ok(out.expect("at least one candidate"))
}

/// `(0, 0, C, d)` form of a pair with `Q(B) = 0` over `Q`, reached through
/// bases `f, g, h` of the three factors.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeReduction {
    pub c: [BigRational; 3],
    pub d: BigRational,
    pub bases: [Mat2<BigRational>; 3],
}

fn trilinear(b: &PairQ, f: &[BigRational; 2], g: &[BigRational; 2], h: &[BigRational; 2]) -> BigRational {
    let mut s = BigRational::zero();
    for (k, t) in [&b.t1, &b.t2].into_iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                s += &f[i] * &g[j] * &h[k] * &t.0[i][j];
            }
        }
    }
    s
}

fn complete(v: &[BigRational; 2]) -> [BigRational; 2] {
    let one = BigRational::one();
    let zero = BigRational::zero();
    if !v[0].is_zero() {
        [zero, one / &v[0]]
    } else {
        [-one / &v[1], zero]
    }
}

fn kernel(m: &Mat2<BigRational>) -> [BigRational; 2] {
    let r = if m.0[0].iter().any(|x| !x.is_zero()) { &m.0[0] } else { &m.0[1] };
    if r.iter().all(Zero::is_zero) {
        return [BigRational::one(), BigRational::zero()];
    }
    [-r[1].clone(), r[0].clone()]
}

/// Move a nonzero pair with `Q(B) = 0` to `(0, 0, C, d)` by locating a
/// singular point of the associated trilinear form.
pub fn reduce_cube(b: &PairQ) -> Result<CubeReduction> {
    if b.is_zero() {
        return domain("reduce_cube needs a nonzero pair");
    }
    if !q_of_b(b).is_zero() {
        return domain("reduce_cube needs Q(B) = 0");
    }
    let zero = BigRational::zero;
    let one = BigRational::one;
    let slice = |h: &[BigRational; 2]| b.t1.scale(&h[0]).add(&b.t2.scale(&h[1]));
    let (qa, qb, qc) = (q(&b.t1), q(&b.t1.add(&b.t2)) - q(&b.t1) - q(&b.t2), q(&b.t2));
    let h0: [BigRational; 2] = if qa.is_zero() && qb.is_zero() && qc.is_zero() {
        [[one(), zero()], [zero(), one()], [one(), one()]].into_iter().find(|h| !slice(h).is_zero()).expect("nonzero pair")
    } else if qa.is_zero() {
        [one(), zero()]
    } else {
        [-qb.clone(), &qa * BigRational::from_integer(2.into())]
    };
    let a0 = slice(&h0);
    let (f0, g0) = if a0.is_zero() {
        let b1 = slice(&complete(&h0));
        let g0 = [one(), zero()];
        let v = [b1.0[0][0].clone(), b1.0[1][0].clone()];
        let f0 = if v.iter().all(Zero::is_zero) { [one(), zero()] } else { [-v[1].clone(), v[0].clone()] };
        (f0, g0)
    } else {
        (kernel(&a0.transpose()), kernel(&a0))
    };
    let (f1, g1, h1) = (complete(&f0), complete(&g0), complete(&h0));
    let fs = [&f0, &f1];
    let gs = [&g0, &g1];
    let hs = [&h0, &h1];
    let x = |i: usize, j: usize, k: usize| trilinear(b, fs[i], gs[j], hs[k]);
    if [x(0, 0, 0), x(1, 0, 0), x(0, 1, 0), x(0, 0, 1)].iter().any(|v| !v.is_zero()) {
        return Err(Error::ReductionIncomplete("singular point search failed".into()));
    }
    let m = |u: &[BigRational; 2], v: &[BigRational; 2]| Mat2::new(u[0].clone(), v[0].clone(), u[1].clone(), v[1].clone());
    Ok(CubeReduction {
        c: [x(0, 1, 1), x(1, 0, 1), x(1, 1, 0)],
        d: x(1, 1, 1),
        bases: [m(&f0, &f1), m(&g0, &g1), m(&h0, &h1)],
    })
}

/// Rank of a rational pair: 0 for zero, 4 when `Q(B) != 0`, otherwise the
/// rank of `C` in the reduced form `(0, 0, C, d)`.
pub fn rank(b: &PairQ) -> Result<u8> {
    if b.is_zero() {
        return Ok(0);
    }
    if !q_of_b(b).is_zero() {
        return Ok(4);
    }
    let red = reduce_cube(b)?;
    let c = &red.c;
    let nz = c.iter().filter(|x| !x.is_zero()).count();
    Ok(match nz {
        3 => 3,
        2 => 2,
        _ => 1,
    })
}

pub fn rank_int(b: &PairB) -> Result<u8> {
    rank(&b.to_q())
}

/// Ranks of the three `2 x 4` flattenings of the cube of `B`.
pub fn flattening_ranks(b: &PairQ) -> [usize; 3] {
    let e = |i: usize, j: usize, k: usize| if k == 0 { b.t1.0[i][j].clone() } else { b.t2.0[i][j].clone() };
    let rank2x4 = |rows: [[BigRational; 4]; 2]| {
        let nz = |r: &[BigRational; 4]| r.iter().any(|x| !x.is_zero());
        if !nz(&rows[0]) && !nz(&rows[1]) {
            return 0;
        }
        let dep = (0..4).all(|p| (0..4).all(|q| &rows[0][p] * &rows[1][q] == &rows[0][q] * &rows[1][p]));
        if dep {
            1
        } else {
            2
        }
    };
    let flat = |axis: usize| {
        let rows: [[BigRational; 4]; 2] = std::array::from_fn(|a| {
            std::array::from_fn(|p| {
                let (u, v) = (p / 2, p % 2);
                match axis {
                    0 => e(a, u, v),
                    1 => e(u, a, v),
                    _ => e(u, v, a),
                }
            })
        });
        rank2x4(rows)
    };
    [flat(0), flat(1), flat(2)]
}
