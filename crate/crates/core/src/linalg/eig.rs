//! Eigen-decomposition for the 4×4 case: closed-form quartic roots of the
//! characteristic polynomial, then inverse iteration for the vectors.

use num_traits::{One, Zero};

use super::matrix::{CMat4, CMatrix, CVec4, CVector};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

const INVERSE_ITERATIONS: usize = 12;

/// Coefficients `[c0, c1, c2, c3]` of `det(xI − M) = x⁴ + c3x³ + c2x² + c1x + c0`
/// (Faddeev–LeVerrier).
pub fn char_poly4<T: Real>(m: &CMat4<T>) -> [Cx<T>; 4] {
    let mut c = [Cx::zero(); 5];
    c[4] = Cx::one();
    let mut mk = CMat4::<T>::zeros();
    let id = CMat4::<T>::identity();
    for k in 1..=4 {
        mk = *m * mk + id.scale(c[5 - k]);
        let amk = *m * mk;
        c[4 - k] = -amk.trace() / T::lit(k as f64);
    }
    [c[0], c[1], c[2], c[3]]
}

fn cbrt_principal<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.norm() == T::zero() {
        return z;
    }
    Cx::from_polar(z.norm().cbrt(), z.arg() / T::lit(3.0))
}

fn newton_cubic<T: Real>(a: [Cx<T>; 3], mut x: Cx<T>) -> Cx<T> {
    // x³ + a2 x² + a1 x + a0
    for _ in 0..4 {
        let f = ((x + a[2]) * x + a[1]) * x + a[0];
        let df = (x.scale(T::lit(3.0)) + a[2].scale(T::lit(2.0))) * x + a[1];
        if df.norm() == T::zero() {
            break;
        }
        let nx = x - f / df;
        if !(nx.re.is_finite() && nx.im.is_finite()) {
            break;
        }
        x = nx;
    }
    x
}

/// Roots of the monic cubic `x³ + a2x² + a1x + a0` (Cardano, then Newton).
fn cubic_roots<T: Real>(a: [Cx<T>; 3]) -> [Cx<T>; 3] {
    let three = T::lit(3.0);
    let shift = a[2] / three;
    // depressed: t³ + p t + q
    let p = a[1] - a[2] * a[2] / three;
    let q = a[2] * a[2] * a[2] * T::lit(2.0 / 27.0) - a[2] * a[1] / three + a[0];
    let disc = (q * q / T::lit(4.0) + p * p * p / T::lit(27.0)).sqrt();
    let mut u3 = -q / T::lit(2.0) + disc;
    let alt = -q / T::lit(2.0) - disc;
    if alt.norm() > u3.norm() {
        u3 = alt;
    }
    let omega = Cx::new(T::lit(-0.5), T::lit(0.75).sqrt());
    let u = cbrt_principal(u3);
    let mut out = [Cx::zero(); 3];
    let mut uk = u;
    for r in out.iter_mut() {
        let t = if uk.norm() == T::zero() { Cx::zero() } else { uk - p / (uk * three) };
        *r = newton_cubic(a, t - shift);
        uk = uk * omega;
    }
    out
}

fn eval_quartic<T: Real>(c: &[Cx<T>; 4], x: Cx<T>) -> (Cx<T>, Cx<T>) {
    let f = (((x + c[3]) * x + c[2]) * x + c[1]) * x + c[0];
    let df = ((x.scale(T::lit(4.0)) + c[3].scale(T::lit(3.0))) * x + c[2].scale(T::lit(2.0))) * x + c[1];
    (f, df)
}

/// Roots of the monic quartic with coefficients `[c0, c1, c2, c3]`
/// (Ferrari's method with a Cardano resolvent, Newton-polished).
pub fn quartic_roots<T: Real>(c: &[Cx<T>; 4]) -> [Cx<T>; 4] {
    let two = T::lit(2.0);
    let s = c[3] / T::lit(4.0);
    // depressed: y⁴ + p y² + q y + r, x = y − s
    let p = c[2] - c[3] * c[3] * T::lit(3.0 / 8.0);
    let q = c[3] * c[3] * c[3] / T::lit(8.0) - c[3] * c[2] / two + c[1];
    let r = -c[3] * c[3] * c[3] * c[3] * T::lit(3.0 / 256.0) + c[3] * c[3] * c[2] / T::lit(16.0)
        - c[3] * c[1] / T::lit(4.0)
        + c[0];

    let scale = p.norm().max(q.norm().sqrt()).max(r.norm().sqrt().sqrt()).max(T::min_positive_value());
    let mut ys = [Cx::zero(); 4];
    if q.norm() <= T::epsilon() * scale * scale * scale {
        // biquadratic
        let d = (p * p - r.scale(T::lit(4.0))).sqrt();
        let z1 = (-p + d) / two;
        let z2 = (-p - d) / two;
        ys = [z1.sqrt(), -z1.sqrt(), z2.sqrt(), -z2.sqrt()];
    } else {
        // resolvent: m³ + p m² + (p²/4 − r) m − q²/8 = 0
        let ms = cubic_roots([-q * q / T::lit(8.0), p * p / T::lit(4.0) - r, p]);
        let m = ms.iter().copied().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap();
        let s2m = (m * two).sqrt();
        for (k, sign) in [T::one(), -T::one()].into_iter().enumerate() {
            // y² + sign·√(2m) y + (p/2 + m − sign·q/(2√(2m))) = 0
            let b = s2m * sign;
            let cc = p / two + m - q * sign / (s2m * two);
            let d = (b * b - cc.scale(T::lit(4.0))).sqrt();
            ys[2 * k] = (-b + d) / two;
            ys[2 * k + 1] = (-b - d) / two;
        }
    }
    let mut xs = ys.map(|y| y - s);
    for x in xs.iter_mut() {
        for _ in 0..3 {
            let (f, df) = eval_quartic(c, *x);
            if df.norm() <= T::epsilon() * scale * scale * scale || f.norm() == T::zero() {
                break;
            }
            let nx = *x - f / df;
            if eval_quartic(c, nx).0.norm() < f.norm() {
                *x = nx;
            } else {
                break;
            }
        }
    }
    xs
}

/// Eigen-decomposition result: `values[j]` pairs with column `j` of `vectors`.
#[derive(Clone, Copy, Debug)]
pub struct Eig4<T> {
    pub values: [Cx<T>; 4],
    pub vectors: CMat4<T>,
}

fn residual<T: Real>(m: &CMat4<T>, lambda: Cx<T>, v: &CVec4<T>) -> T {
    (m.mul_vec(v) - v.scale(lambda)).norm()
}

/// Eigenvalues and eigenvectors of a 4×4 complex matrix, sorted by
/// principal phase of the eigenvalue (ascending).
///
/// Repeated eigenvalues of normal matrices get orthonormal vectors; for
/// defective matrices the returned vectors may be linearly dependent.
pub fn eig4<T: Real>(m: &CMat4<T>) -> Result<Eig4<T>> {
    if !m.is_finite() {
        return Err(Error::InvalidArgument("eig4 input has non-finite entries".into()));
    }
    let scale = m.max_abs().max(T::min_positive_value());
    let coeffs = char_poly4(m);
    let mut lams = quartic_roots(&coeffs);
    lams.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap().then(a.norm().partial_cmp(&b.norm()).unwrap()));

    let normal = (*m * m.adjoint()).max_abs_diff(&(m.adjoint() * *m)) < T::tol(1e-10) * scale * scale;
    // quartic roots of a k-fold eigenvalue are only good to about eps^(1/k)
    let cluster = T::tol(1e-3) * scale;
    let target = T::epsilon() * T::lit(64.0) * scale;
    let accept = T::tol(1e-8) * scale;

    let mut vecs: [CVec4<T>; 4] = [CVector::zeros(); 4];
    for j in 0..4 {
        // eigenvectors of a normal matrix can always be chosen orthonormal
        let peers: Vec<usize> =
            if normal { (0..j).collect() } else { (0..j).filter(|&i| (lams[i] - lams[j]).norm() < cluster).collect() };
        let nudge = Cx::new(T::one(), T::lit(0.5)).scale(T::epsilon().sqrt() * scale * T::lit(1e-3));
        let mut lam = lams[j];
        let mut v = CVector::basis(j) + CVector::<T, 4>([Cx::new(T::lit(0.1), T::lit(0.05)); 4]);
        let mut best: Option<(T, Cx<T>, CVec4<T>)> = None;
        for _ in 0..INVERSE_ITERATIONS {
            let shifted = *m - CMat4::identity().scale(lam + nudge);
            let mut w = shifted.solve(&v);
            if normal {
                for _ in 0..2 {
                    for &i in &peers {
                        let proj = vecs[i].dot(&w);
                        w = w - vecs[i].scale(proj);
                    }
                }
            }
            let n = w.norm();
            if !(n > T::zero()) || !n.is_finite() {
                w = CVector::basis((j + 1) % 4);
            }
            v = w.normalized();
            let rq = v.dot(&m.mul_vec(&v));
            let (r_old, r_rq) = (residual(m, lam, &v), residual(m, rq, &v));
            if r_rq < r_old && (normal || (rq - lams[j]).norm() < cluster) {
                lam = rq;
            }
            let r = residual(m, lam, &v);
            if best.as_ref().is_none_or(|b| r < b.0) {
                best = Some((r, lam, v));
            }
            if r <= target {
                break;
            }
        }
        let (r, lam, v) = best.unwrap();
        if r > accept {
            return Err(Error::NoConvergence { iterations: INVERSE_ITERATIONS });
        }
        lams[j] = lam;
        vecs[j] = v;
    }

    let mut order: [usize; 4] = [0, 1, 2, 3];
    order.sort_by(|&a, &b| lams[a].arg().partial_cmp(&lams[b].arg()).unwrap());
    let mut vectors = CMatrix::zeros();
    for (k, &o) in order.iter().enumerate() {
        vectors.set_col(k, &vecs[o]);
    }
    Ok(Eig4 { values: order.map(|o| lams[o]), vectors })
}

/// Cyclic Jacobi for a real symmetric 4×4 matrix. Returns `(eigenvalues, P)`
/// with `Pᵀ A P = diag(eigenvalues)` and `det P = +1`.
pub fn jacobi_sym4<T: Real>(a: &[[T; 4]; 4]) -> ([T; 4], [[T; 4]; 4]) {
    let mut a = *a;
    let mut p = [[T::zero(); 4]; 4];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = T::one();
    }
    for _sweep in 0..64 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..4 {
            diag = diag + a[i][i] * a[i][i];
            for j in 0..4 {
                if i != j {
                    off = off + a[i][j] * a[i][j];
                }
            }
        }
        if off <= T::epsilon() * T::epsilon() * (diag + off) || off == T::zero() {
            break;
        }
        for i in 0..3 {
            for j in i + 1..4 {
                if a[i][j] == T::zero() {
                    continue;
                }
                let theta = (a[j][j] - a[i][i]) / (a[i][j] + a[i][j]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (aki, akj) = (a[k][i], a[k][j]);
                    a[k][i] = c * aki - s * akj;
                    a[k][j] = s * aki + c * akj;
                }
                for k in 0..4 {
                    let (aik, ajk) = (a[i][k], a[j][k]);
                    a[i][k] = c * aik - s * ajk;
                    a[j][k] = s * aik + c * ajk;
                }
                for row in p.iter_mut() {
                    let (pki, pkj) = (row[i], row[j]);
                    row[i] = c * pki - s * pkj;
                    row[j] = s * pki + c * pkj;
                }
            }
        }
    }
    if det_real4(&p) < T::zero() {
        for row in p.iter_mut() {
            row[3] = -row[3];
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], p)
}

pub(crate) fn det_real4<T: Real>(p: &[[T; 4]; 4]) -> T {
    let m: CMat4<T> = CMatrix::from_fn(|i, j| Cx::new(p[i][j], T::zero()));
    m.det().re
}
