use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Cx, Real};

/// Dense row-major complex matrix with compile-time shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<T, const R: usize, const C: usize>(pub [[Cx<T>; C]; R]);

/// Complex column vector with compile-time length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVector<T, const N: usize>(pub [Cx<T>; N]);

pub type CMat2<T> = CMatrix<T, 2, 2>;
pub type CMat4<T> = CMatrix<T, 4, 4>;
pub type CMat4x2<T> = CMatrix<T, 4, 2>;
pub type CMat2x4<T> = CMatrix<T, 2, 4>;
pub type CVec2<T> = CVector<T, 2>;
pub type CVec4<T> = CVector<T, 4>;

impl<T: Real, const R: usize, const C: usize> CMatrix<T, R, C> {
    pub fn zeros() -> Self {
        CMatrix([[Cx::zero(); C]; R])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..R {
            for j in 0..C {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; C]; R]) -> Self {
        Self::from_fn(|i, j| Cx::new(T::lit(rows[i][j]), T::zero()))
    }

    pub fn map(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self::from_fn(|i, j| f(self.0[i][j]))
    }

    pub fn adjoint(&self) -> CMatrix<T, C, R> {
        CMatrix::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> CMatrix<T, C, R> {
        CMatrix::from_fn(|i, j| self.0[j][i])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn col(&self, j: usize) -> CVector<T, R> {
        CVector(std::array::from_fn(|i| self.0[i][j]))
    }

    pub fn row(&self, i: usize) -> CVector<T, C> {
        CVector(self.0[i])
    }

    pub fn set_col(&mut self, j: usize, v: &CVector<T, R>) {
        for i in 0..R {
            self.0[i][j] = v.0[i];
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for row in &self.0 {
            for z in row {
                m = m.max(z.norm());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn frobenius(&self) -> T {
        let mut s = T::zero();
        for row in &self.0 {
            for z in row {
                s = s + z.norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, v: &CVector<T, C>) -> CVector<T, R> {
        CVector(std::array::from_fn(|i| (0..C).fold(Cx::zero(), |acc, k| acc + self.0[i][k] * v.0[k])))
    }

    /// `‖A†A − I‖_max`; zero for a matrix with orthonormal columns.
    pub fn isometry_deviation(&self) -> T {
        let g = self.adjoint() * *self;
        g.max_abs_diff(&CMatrix::identity())
    }

    /// Sub-block starting at `(r0, c0)`.
    pub fn block<const BR: usize, const BC: usize>(&self, r0: usize, c0: usize) -> CMatrix<T, BR, BC> {
        CMatrix::from_fn(|i, j| self.0[r0 + i][c0 + j])
    }

    pub fn set_block<const BR: usize, const BC: usize>(&mut self, r0: usize, c0: usize, b: &CMatrix<T, BR, BC>) {
        for i in 0..BR {
            for j in 0..BC {
                self.0[r0 + i][c0 + j] = b.0[i][j];
            }
        }
    }

    /// Elementwise closeness up to one shared phase; returns the residual
    /// after aligning `self` onto `other` at their largest common entry.
    pub fn phase_aligned_diff(&self, other: &Self) -> T {
        let mut best = (0, 0);
        let mut bmag = -T::one();
        for i in 0..R {
            for j in 0..C {
                let m = self.0[i][j].norm() * other.0[i][j].norm();
                if m > bmag {
                    bmag = m;
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        let a = self.0[i][j];
        let b = other.0[i][j];
        if a.norm() == T::zero() || b.norm() == T::zero() {
            return self.max_abs_diff(other);
        }
        let ph = b / a;
        let ph = ph / ph.norm();
        self.scale(ph).max_abs_diff(other)
    }
}

impl<T: Real, const N: usize> CMatrix<T, N, N> {
    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Cx::one() } else { Cx::zero() })
    }

    pub fn diag(d: [Cx<T>; N]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { Cx::zero() })
    }

    pub fn diagonal(&self) -> [Cx<T>; N] {
        std::array::from_fn(|i| self.0[i][i])
    }

    pub fn trace(&self) -> Cx<T> {
        (0..N).fold(Cx::zero(), |acc, i| acc + self.0[i][i])
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Cx<T> {
        let mut a = self.0;
        let mut det = Cx::<T>::one();
        for k in 0..N {
            let p = (k..N).max_by(|&x, &y| a[x][k].norm().partial_cmp(&a[y][k].norm()).unwrap()).unwrap();
            if a[p][k].norm() == T::zero() {
                return Cx::zero();
            }
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det = det * a[k][k];
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let t = a[k][j];
                    a[i][j] = a[i][j] - f * t;
                }
            }
        }
        det
    }

    /// Solves `self · x = b`. Zero pivots are replaced by a tiny value so
    /// that near-singular shifted systems (inverse iteration) still produce
    /// a usable direction.
    pub fn solve(&self, b: &CVector<T, N>) -> CVector<T, N> {
        let mut a = self.0;
        let mut x = b.0;
        let scale = self.max_abs().max(T::min_positive_value());
        let tiny = scale * T::epsilon() * T::epsilon();
        for k in 0..N {
            let p = (k..N).max_by(|&u, &v| a[u][k].norm().partial_cmp(&a[v][k].norm()).unwrap()).unwrap();
            a.swap(p, k);
            x.swap(p, k);
            if a[k][k].norm() < tiny {
                a[k][k] = Cx::new(tiny, T::zero());
            }
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let t = a[k][j];
                    a[i][j] = a[i][j] - f * t;
                }
                let t = x[k];
                x[i] = x[i] - f * t;
            }
        }
        for k in (0..N).rev() {
            let mut s = x[k];
            for j in k + 1..N {
                s = s - a[k][j] * x[j];
            }
            x[k] = s / a[k][k];
        }
        CVector(x)
    }

    /// Inverse by column-wise solves; caller guarantees non-singularity.
    pub fn inverse(&self) -> Self {
        let mut out = Self::zeros();
        for j in 0..N {
            let mut e = CVector([Cx::zero(); N]);
            e.0[j] = Cx::one();
            out.set_col(j, &self.solve(&e));
        }
        out
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.isometry_deviation() < tol
    }
}

/// Kronecker product `a ⊗ b`; `a` acts on the more significant qubit.
pub fn kron<T: Real>(a: &CMat2<T>, b: &CMat2<T>) -> CMat4<T> {
    CMatrix::from_fn(|i, j| a.0[i / 2][j / 2] * b.0[i % 2][j % 2])
}

impl<T: Real, const R: usize, const K: usize, const C: usize> Mul<CMatrix<T, K, C>> for CMatrix<T, R, K> {
    type Output = CMatrix<T, R, C>;
    fn mul(self, rhs: CMatrix<T, K, C>) -> CMatrix<T, R, C> {
        CMatrix::from_fn(|i, j| (0..K).fold(Cx::zero(), |acc, k| acc + self.0[i][k] * rhs.0[k][j]))
    }
}

impl<T: Real, const R: usize, const C: usize> Add for CMatrix<T, R, C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<T: Real, const R: usize, const C: usize> Sub for CMatrix<T, R, C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<T: Real, const R: usize, const C: usize> Neg for CMatrix<T, R, C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<T, const R: usize, const C: usize> Index<(usize, usize)> for CMatrix<T, R, C> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.0[i][j]
    }
}

impl<T, const R: usize, const C: usize> IndexMut<(usize, usize)> for CMatrix<T, R, C> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real, const N: usize> CVector<T, N> {
    pub fn zeros() -> Self {
        CVector([Cx::zero(); N])
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Self::zeros();
        v.0[k] = Cx::one();
        v
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> Cx<T> {
        (0..N).fold(Cx::zero(), |acc, i| acc + self.0[i].conj() * other.0[i])
    }

    pub fn conj(&self) -> Self {
        CVector(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        CVector(self.0.map(|z| z * s))
    }

    pub fn scale_re(&self, s: T) -> Self {
        CVector(self.0.map(|z| z * s))
    }

    pub fn normalized(&self) -> Self {
        self.scale_re(T::one() / self.norm())
    }

    /// `|self⟩⟨self|`.
    pub fn outer(&self) -> CMatrix<T, N, N> {
        CMatrix::from_fn(|i, j| self.0[i] * self.0[j].conj())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (0..N).fold(T::zero(), |m, i| m.max((self.0[i] - other.0[i]).norm()))
    }

    /// Same ray with the first non-negligible component made real and
    /// non-negative.
    pub fn phase_fixed(&self) -> Self {
        let thr = self.norm() * T::tol(1e-12);
        for z in &self.0 {
            if z.norm() > thr {
                return self.scale(z.conj() / z.norm());
            }
        }
        *self
    }
}

impl<T: Real, const N: usize> Add for CVector<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        CVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl<T: Real, const N: usize> Sub for CVector<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        CVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl<T, const N: usize> Index<usize> for CVector<T, N> {
    type Output = Cx<T>;
    fn index(&self, i: usize) -> &Cx<T> {
        &self.0[i]
    }
}

impl<T, const N: usize> IndexMut<usize> for CVector<T, N> {
    fn index_mut(&mut self, i: usize) -> &mut Cx<T> {
        &mut self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn det_and_inverse_agree_on_small_case() {
        let m: CMat4<f64> = CMatrix::from_fn(|i, j| cx((i * 4 + j) as f64 % 7.0 + 1.0, (i as f64) - (j as f64)));
        let inv = m.inverse();
        assert!((m * inv).max_abs_diff(&CMatrix::identity()) < 1e-12);
        let d = m.det();
        let di = inv.det();
        assert!((d * di - Cx::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn kron_puts_first_factor_on_high_bit() {
        let x: CMat2<f64> = CMatrix::from_real([[0.0, 1.0], [1.0, 0.0]]);
        let k = kron(&x, &CMatrix::identity());
        assert_eq!(k[(0, 2)], Cx::new(1.0, 0.0));
        assert_eq!(k[(0, 1)], Cx::new(0.0, 0.0));
    }

    #[test]
    fn phase_aligned_diff_ignores_global_phase() {
        let m: CMat2<f64> = CMatrix::from_fn(|i, j| cx(i as f64 + 1.0, j as f64));
        let p = m.scale(cx(0.6, 0.8));
        assert!(m.phase_aligned_diff(&p) < 1e-15);
    }
}
