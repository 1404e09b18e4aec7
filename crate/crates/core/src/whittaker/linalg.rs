//! Small dense real matrices on `V = R^8` in the basis
//! `b1, b2, b3, b4, b-4, b-3, b-2, b-1`.

use std::f64::consts::FRAC_1_SQRT_2;

pub type Mat8 = [[f64; 8]; 8];
pub type Vec8 = [f64; 8];
pub type Mat4 = [[f64; 4]; 4];
pub type Mat2f = [[f64; 2]; 2];

pub fn ident8() -> Mat8 {
    let mut m = [[0.0; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// Gram matrix: `(b_i, b_-i) = 1`.
pub fn gram8() -> Mat8 {
    let mut m = [[0.0; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[7 - i] = 1.0;
    }
    m
}

pub fn mul8(a: &Mat8, b: &Mat8) -> Mat8 {
    let mut c = [[0.0; 8]; 8];
    for i in 0..8 {
        for k in 0..8 {
            let x = a[i][k];
            if x == 0.0 {
                continue;
            }
            for j in 0..8 {
                c[i][j] += x * b[k][j];
            }
        }
    }
    c
}

pub fn add8(a: &Mat8, b: &Mat8, s: f64) -> Mat8 {
    let mut c = *a;
    for i in 0..8 {
        for j in 0..8 {
            c[i][j] += s * b[i][j];
        }
    }
    c
}

pub fn transpose8(a: &Mat8) -> Mat8 {
    let mut t = [[0.0; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn apply8(a: &Mat8, v: &Vec8) -> Vec8 {
    let mut out = [0.0; 8];
    for i in 0..8 {
        out[i] = (0..8).map(|j| a[i][j] * v[j]).sum();
    }
    out
}

/// `(x, y)` on `V`.
pub fn pair8(x: &Vec8, y: &Vec8) -> f64 {
    (0..8).map(|i| x[i] * y[7 - i]).sum()
}

pub fn max_abs8(a: &Mat8) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn diff8(a: &Mat8, b: &Mat8) -> f64 {
    max_abs8(&add8(a, b, -1.0))
}

/// Inverse of an element of `O(V)`: `G g^T G`.
pub fn inv_orth8(g: &Mat8) -> Mat8 {
    let gm = gram8();
    mul8(&gm, &mul8(&transpose8(g), &gm))
}

/// `max |g^T G g - G|`.
pub fn orth_defect(g: &Mat8) -> f64 {
    let gm = gram8();
    diff8(&mul8(&transpose8(g), &mul8(&gm, g)), &gm)
}

/// Determinant by partial-pivot elimination.
pub fn det_n<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut m = *a;
    let mut det = 1.0;
    for k in 0..N {
        let p = (k..N).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..N {
            let f = m[i][k] / m[k][k];
            for j in k..N {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// General inverse by Gauss-Jordan.
pub fn inv_n<const N: usize>(a: &[[f64; N]; N]) -> Option<[[f64; N]; N]> {
    let mut m = *a;
    let mut inv = [[0.0; N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for k in 0..N {
        let p = (k..N).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        if m[p][k].abs() < 1e-300 {
            return None;
        }
        m.swap(p, k);
        inv.swap(p, k);
        let d = m[k][k];
        for j in 0..N {
            m[k][j] /= d;
            inv[k][j] /= d;
        }
        for i in 0..N {
            if i != k {
                let f = m[i][k];
                if f != 0.0 {
                    for j in 0..N {
                        m[i][j] -= f * m[k][j];
                        inv[i][j] -= f * inv[k][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

pub fn mul_n<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut c = [[0.0; N]; N];
    for i in 0..N {
        for k in 0..N {
            for j in 0..N {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn transpose_n<const N: usize>(a: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut t = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            t[j][i] = a[i][j];
        }
    }
    t
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn exp8(x: &Mat8) -> Mat8 {
    let norm = max_abs8(x) * 8.0;
    let mut s = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        s += 1;
    }
    let y = add8(&[[0.0; 8]; 8], x, scale);
    let mut term = ident8();
    let mut sum = ident8();
    for k in 1..30 {
        term = mul8(&term, &y);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        sum = add8(&sum, &term, 1.0);
        if max_abs8(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        sum = mul8(&sum, &sum);
    }
    sum
}

/// The endomorphism `v ^ w : x -> (x, w) v - (x, v) w`.
pub fn wedge(v: &Vec8, w: &Vec8) -> Mat8 {
    let gm = gram8();
    let gv = apply8(&gm, v);
    let gw = apply8(&gm, w);
    let mut m = [[0.0; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            m[i][j] = v[i] * gw[j] - w[i] * gv[j];
        }
    }
    m
}

/// `exp(t v ^ w)`; exact polynomial when the wedge is nilpotent.
pub fn wedge_exp(v: &Vec8, w: &Vec8, t: f64) -> Mat8 {
    let x = add8(&[[0.0; 8]; 8], &wedge(v, w), t);
    let x2 = mul8(&x, &x);
    let x3 = mul8(&x2, &x);
    if max_abs8(&x3) == 0.0 {
        return add8(&add8(&ident8(), &x, 1.0), &x2, 0.5);
    }
    exp8(&x)
}

/// Basis vector `b_i`, `i` in `{1,2,3,4,-4,-3,-2,-1}`.
pub fn bvec(i: i32) -> Vec8 {
    let mut v = [0.0; 8];
    v[index(i)] = 1.0;
    v
}

pub fn index(i: i32) -> usize {
    match i {
        1 => 0,
        2 => 1,
        3 => 2,
        4 => 3,
        -4 => 4,
        -3 => 5,
        -2 => 6,
        -1 => 7,
        _ => panic!("no basis vector b{i}"),
    }
}

/// Orthonormal basis `u1, u2, v1, v2 | u1', u2', v1', v2'` of `V+ | V-` as
/// the columns of an orthogonal matrix.
pub fn on_basis() -> Mat8 {
    let s = FRAC_1_SQRT_2;
    let mut c = [[0.0; 8]; 8];
    for (col, (i, sign)) in [(1, 1.0), (2, 1.0), (3, 1.0), (4, 1.0), (1, -1.0), (2, -1.0), (3, -1.0), (4, -1.0)].iter().enumerate() {
        c[index(*i)][col] = s;
        c[index(-*i)][col] = s * sign;
    }
    c
}

pub fn u_vec(i: i32) -> Vec8 {
    let c = on_basis();
    let col = (i - 1) as usize;
    std::array::from_fn(|r| c[r][col])
}

pub fn v_vec(i: i32) -> Vec8 {
    u_vec(i + 2)
}

/// Orthonormal basis of `V22` (coordinates `b3, b4, b-4, b-3`): columns
/// `v1, v2, v1', v2'`.
pub fn on_basis4() -> Mat4 {
    let s = FRAC_1_SQRT_2;
    [[s, 0.0, s, 0.0], [0.0, s, 0.0, s], [0.0, s, 0.0, -s], [s, 0.0, -s, 0.0]]
}

/// Block-diagonal Levi element acting by `a` on `U = span{b1, b2}`, by `h`
/// on `V22` and by the contragredient on `U^ = span{b-2, b-1}`.
pub fn levi(a: &Mat2f, h: &Mat4) -> Mat8 {
    let ai = inv_n(a).expect("invertible U block");
    let ait = transpose_n(&ai);
    let mut m = [[0.0; 8]; 8];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j];
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            m[2 + i][2 + j] = h[i][j];
        }
    }
    // dual basis order (b-1, b-2) sits at indices (7, 6)
    let d = [7usize, 6];
    for i in 0..2 {
        for j in 0..2 {
            m[d[i]][d[j]] = ait[i][j];
        }
    }
    m
}

/// `SO(V22)` element `X -> g1 X g2^{-1}` in coordinates.
pub fn h_from_sl2(g1: &Mat2f, g2: &Mat2f) -> Mat4 {
    let g2i = inv_n(g2).expect("invertible");
    let mut h = [[0.0; 4]; 4];
    for col in 0..4 {
        let mut c = [0.0; 4];
        c[col] = 1.0;
        let x = from_coords_f(&c);
        let y = mul_n(&mul_n(g1, &x), &g2i);
        let yc = coords_f(&y);
        for row in 0..4 {
            h[row][col] = yc[row];
        }
    }
    h
}

pub fn coords_f(x: &Mat2f) -> [f64; 4] {
    [x[0][0], -x[1][0], x[0][1], x[1][1]]
}

pub fn from_coords_f(c: &[f64; 4]) -> Mat2f {
    [[c[0], c[2]], [-c[1], c[3]]]
}

pub fn bilinear_f(x: &Mat2f, y: &Mat2f) -> f64 {
    x[0][0] * y[1][1] + x[1][1] * y[0][0] - x[0][1] * y[1][0] - x[1][0] * y[0][1]
}

pub fn apply4(h: &Mat4, x: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| (0..4).map(|j| h[i][j] * x[j]).sum())
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations: returns
/// `(eigenvalues, eigenvectors as columns)`.
pub fn sym_eigen<const N: usize>(a: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut m = *a;
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..100 {
        let off: f64 = (0..N).flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..N {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..N {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    (std::array::from_fn(|i| m[i][i]), v)
}

/// Polar decomposition `a = p o` with `p` symmetric positive definite and
/// `o` orthogonal.
pub fn polar<const N: usize>(a: &[[f64; N]; N]) -> ([[f64; N]; N], [[f64; N]; N]) {
    let aat = mul_n(a, &transpose_n(a));
    let (ev, vecs) = sym_eigen(&aat);
    let mut p = [[0.0; N]; N];
    let mut pinv = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            for k in 0..N {
                let s = ev[k].max(0.0).sqrt();
                p[i][j] += vecs[i][k] * s * vecs[j][k];
                pinv[i][j] += vecs[i][k] / s * vecs[j][k];
            }
        }
    }
    (p, mul_n(&pinv, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_and_on_basis() {
        let c = on_basis();
        let g = gram8();
        let d = mul8(&transpose8(&c), &mul8(&g, &c));
        for i in 0..8 {
            for j in 0..8 {
                let e = if i != j { 0.0 } else if i < 4 { 1.0 } else { -1.0 };
                assert!((d[i][j] - e).abs() < 1e-15);
            }
        }
        assert!(diff8(&mul8(&transpose8(&c), &c), &ident8()) < 1e-15);
    }

    #[test]
    fn wedge_exp_examples() {
        let (b1, b2, bm2) = (bvec(1), bvec(2), bvec(-2));
        let s = 1.7;
        let x = wedge_exp(&b1, &bm2, s);
        let img = apply8(&x, &b2);
        let want = add_v(&b2, &b1, s);
        assert!(img.iter().zip(want.iter()).all(|(a, b)| (a - b).abs() < 1e-15));
        assert_eq!(apply8(&x, &b1), b1);
        assert_eq!(wedge_exp(&b1, &bm2, 0.0), ident8());
        assert!(orth_defect(&x) < 1e-12);
        let y = wedge_exp(&u_vec(1), &v_vec(2), 0.8);
        assert!(orth_defect(&y) < 1e-12);
        assert!((det_n(&y) - 1.0).abs() < 1e-12);
    }

    fn add_v(a: &Vec8, b: &Vec8, s: f64) -> Vec8 {
        std::array::from_fn(|i| a[i] + s * b[i])
    }

    #[test]
    fn levi_is_orthogonal() {
        let a = [[2.0, 0.5], [-1.0, 3.0]];
        let h = h_from_sl2(&[[1.0, 2.0], [0.5, 2.0]], &[[3.0, 1.0], [2.0, 1.0]]);
        let m = levi(&a, &h);
        assert!(orth_defect(&m) < 1e-12);
    }

    #[test]
    fn polar_roundtrip() {
        let a = [[2.0, 1.0, 0.0], [0.5, 3.0, 1.0], [0.0, -1.0, 1.5]];
        let (p, o) = polar(&a);
        let r = mul_n(&p, &o);
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[i][j] - a[i][j]).abs() < 1e-12);
                assert!((p[i][j] - p[j][i]).abs() < 1e-12);
            }
        }
        let oot = mul_n(&o, &transpose_n(&o));
        for i in 0..3 {
            assert!((oot[i][i] - 1.0).abs() < 1e-12);
        }
    }
}
