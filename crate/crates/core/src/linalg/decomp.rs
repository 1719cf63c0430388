use super::matrix::{CMat2, CMat2x4, CMat4, CMat4x2, CMatrix, CVec4, CVector};
use crate::error::{Error, Result};
use crate::scalar::{cis, Cx, Real};

const GS_SKIP: f64 = 1e-8;

/// Extends a 4×2 isometry `V` to a unitary `[V W]` by Gram–Schmidt over the
/// canonical basis vectors in index order.
pub fn complete_to_unitary<T: Real>(v: &CMat4x2<T>) -> Result<CMat4<T>> {
    let dev = v.isometry_deviation();
    if !(dev < T::tol(1e-10)) {
        return Err(Error::NonIsometry { deviation: dev.to_f64_lossy() });
    }
    let mut cols: Vec<CVec4<T>> = vec![v.col(0), v.col(1)];
    for k in 0..4 {
        if cols.len() == 4 {
            break;
        }
        let mut e = CVector::basis(k);
        // two passes keep the result orthogonal to working precision
        for _ in 0..2 {
            for c in &cols {
                let p = c.dot(&e);
                e = e - c.scale(p);
            }
        }
        let n = e.norm();
        if n >= T::lit(GS_SKIP) {
            cols.push(e.scale_re(T::one() / n));
        }
    }
    let mut u = CMatrix::zeros();
    for (j, c) in cols.iter().enumerate() {
        u.set_col(j, c);
    }
    Ok(u)
}

/// Singular values of a 4×2 matrix, descending.
pub fn singular_values_4x2<T: Real>(w: &CMat4x2<T>) -> [T; 2] {
    let g = w.adjoint() * *w;
    let a = g[(0, 0)].re;
    let d = g[(1, 1)].re;
    let b = g[(0, 1)].norm();
    let mean = (a + d) / T::lit(2.0);
    let rad = (((a - d) / T::lit(2.0)).powi(2) + b * b).sqrt();
    [(mean + rad).max(T::zero()).sqrt(), (mean - rad).max(T::zero()).sqrt()]
}

/// Moore–Penrose inverse of a full-column-rank 4×2 matrix.
pub fn pseudo_inverse<T: Real>(w: &CMat4x2<T>) -> Result<CMat2x4<T>> {
    let s = singular_values_4x2(w);
    if !(s[1] > T::tol(1e-10)) {
        return Err(Error::RankDeficient { sigma_min: s[1].to_f64_lossy() });
    }
    let g: CMat2<T> = w.adjoint() * *w;
    Ok(inverse2(&g) * w.adjoint())
}

pub fn inverse2<T: Real>(m: &CMat2<T>) -> CMat2<T> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    CMatrix([[m[(1, 1)] / det, -m[(0, 1)] / det], [-m[(1, 0)] / det, m[(0, 0)] / det]])
}

/// Rescales `U` into SU(4): returns `(e^{−iφ/4}U, φ)` with `φ = arg det U`.
pub fn to_su4<T: Real>(u: &CMat4<T>) -> Result<(CMat4<T>, T)> {
    let dev = u.isometry_deviation();
    if !(dev < T::tol(1e-10)) {
        return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
    }
    let mut phase = u.det().arg();
    // keep the branch half-open at −π even when det U ≈ −1 carries a
    // negative rounding residue in its imaginary part
    if phase <= -T::PI() + T::tol(1e-12) {
        phase = phase + T::PI() + T::PI();
    }
    Ok((u.scale(cis(-phase / T::lit(4.0))), phase))
}

/// Splits a 4×4 matrix of the form `e^{iφ}(A ⊗ B)` with `A, B ∈ SU(2)` into
/// its factors. Returns `(A, B, e^{iφ})`.
pub fn factor_local<T: Real>(m: &CMat4<T>) -> (CMat2<T>, CMat2<T>, Cx<T>) {
    let mut best = (0, 0);
    let mut bn = -T::one();
    for bi in 0..2 {
        for bj in 0..2 {
            let blk: CMat2<T> = m.block(2 * bi, 2 * bj);
            let n = blk.frobenius();
            if n > bn {
                bn = n;
                best = (bi, bj);
            }
        }
    }
    let blk: CMat2<T> = m.block(2 * best.0, 2 * best.1);
    let mut b = blk.scale_re(T::lit(2.0).sqrt() / bn);
    let db = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
    b = b.scale(cis(-db.arg() / T::lit(2.0)));
    let mut a = CMat2::zeros();
    for bi in 0..2 {
        for bj in 0..2 {
            let blk: CMat2<T> = m.block(2 * bi, 2 * bj);
            a[(bi, bj)] = (b.adjoint() * blk).trace() / T::lit(2.0);
        }
    }
    let da = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let half = cis(da.arg() / T::lit(2.0));
    let a = if half.norm().is_zero() { a } else { a.scale(half.conj()) };
    (a, b, half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::scalar::cx;

    #[test]
    fn identity_columns_complete_to_identity() {
        let v: CMat4x2<f64> = CMat4::identity().block(0, 0);
        let u = complete_to_unitary(&v).unwrap();
        assert!(u.max_abs_diff(&CMat4::identity()) < 1e-15);
    }

    #[test]
    fn non_isometry_is_rejected() {
        let mut v: CMat4x2<f64> = CMat4::identity().block(0, 0);
        v[(1, 0)] = cx(0.5, 0.0);
        assert!(matches!(complete_to_unitary(&v), Err(Error::NonIsometry { .. })));
    }

    #[test]
    fn pinv_of_isometry_is_adjoint() {
        let v: CMat4x2<f64> = CMat4::identity().block(0, 2);
        let p = pseudo_inverse(&v).unwrap();
        assert!(p.max_abs_diff(&v.adjoint()) < 1e-15);
        let z = CMat4x2::<f64>::zeros();
        assert!(matches!(pseudo_inverse(&z), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn su4_of_cnot_and_identity() {
        let cnot = CMat4::<f64>::from_real([[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.]]);
        let (s, ph) = to_su4(&cnot).unwrap();
        assert!((s.det() - cx(1.0, 0.0)).norm() < 1e-12);
        assert!((ph - std::f64::consts::PI).abs() < 1e-12);
        let (s, ph) = to_su4(&CMat4::<f64>::identity()).unwrap();
        assert_eq!(ph, 0.0);
        assert!(s.max_abs_diff(&CMat4::identity()) < 1e-15);
    }

    #[test]
    fn factor_local_round_trip() {
        let a = CMat2::<f64>::from_fn(|i, j| match (i, j) {
            (0, 0) => cx(0.6, 0.0),
            (0, 1) => cx(0.0, 0.8),
            (1, 0) => cx(0.0, 0.8),
            _ => cx(0.6, 0.0),
        });
        let b = CMat2::<f64>::from_fn(|i, j| match (i, j) {
            (0, 0) => cx(0.0, 0.0),
            (0, 1) => cx(-1.0, 0.0),
            (1, 0) => cx(1.0, 0.0),
            _ => cx(0.0, 0.0),
        });
        let m = kron(&a, &b).scale(cx(0.0, 1.0));
        let (fa, fb, ph) = factor_local(&m);
        assert!(kron(&fa, &fb).scale(ph).max_abs_diff(&m) < 1e-14);
    }
}
