#![allow(dead_code)]

use icpovm::linalg::{CMat2, CMat4, CMatrix};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary by Gram–Schmidt on a complex Gaussian matrix.
pub fn haar<const N: usize, R: Rng>(rng: &mut R) -> CMatrix<f64, N, N> {
    let mut cols: Vec<[C64; N]> = Vec::with_capacity(N);
    while cols.len() < N {
        let mut v: [C64; N] = std::array::from_fn(|_| gaussian(rng));
        for c in &cols {
            let ip: C64 = (0..N).map(|i| c[i].conj() * v[i]).sum();
            for i in 0..N {
                v[i] -= ip * c[i];
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.map(|z| z / n));
        }
    }
    CMatrix::from_fn(|i, j| cols[j][i])
}

pub fn haar2<R: Rng>(rng: &mut R) -> CMat2<f64> {
    haar::<2, R>(rng)
}

pub fn haar4<R: Rng>(rng: &mut R) -> CMat4<f64> {
    haar::<4, R>(rng)
}

fn mat_mul<const N: usize>(a: &CMatrix<f64, N, N>, b: &CMatrix<f64, N, N>) -> CMatrix<f64, N, N> {
    CMatrix::from_fn(|i, j| (0..N).map(|k| a.0[i][k] * b.0[k][j]).sum())
}

/// `a ⊗ b` written out index by index.
pub fn kron2(a: &CMat2<f64>, b: &CMat2<f64>) -> CMat4<f64> {
    CMatrix::from_fn(|i, j| a.0[i / 2][j / 2] * b.0[i % 2][j % 2])
}

pub fn paulis() -> [CMat2<f64>; 4] {
    let c = |re: f64, im: f64| C64::new(re, im);
    [
        CMatrix([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]]),
        CMatrix([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]),
        CMatrix([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]),
        CMatrix([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]),
    ]
}

/// `exp(i(k1 XX + k2 YY + k3 ZZ))` as a product of commuting factors.
pub fn canonical_gate(k: [f64; 3]) -> CMat4<f64> {
    let p = paulis();
    let id = kron2(&p[0], &p[0]);
    (0..3).fold(id, |acc, j| {
        let pp = kron2(&p[j + 1], &p[j + 1]);
        let f = CMatrix::from_fn(|r, c| id.0[r][c] * k[j].cos() + pp.0[r][c] * C64::new(0.0, k[j].sin()));
        mat_mul(&acc, &f)
    })
}

/// `γ(U) = U (Y⊗Y) Uᵀ (Y⊗Y)` without library helpers.
pub fn gamma(u: &CMat4<f64>) -> CMat4<f64> {
    let p = paulis();
    let yy = kron2(&p[2], &p[2]);
    let ut = CMatrix::from_fn(|i, j| u.0[j][i]);
    mat_mul(&mat_mul(&mat_mul(u, &yy), &ut), &yy)
}

/// Coefficients `[c0, c1, c2, c3]` of `det(xI − M) = x⁴ + c3 x³ + c2 x² + c1 x + c0`
/// by Faddeev–LeVerrier.
pub fn char_poly(m: &CMat4<f64>) -> [C64; 4] {
    let id = CMatrix::<f64, 4, 4>::from_fn(|i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    let mut mk = id;
    let mut c = [C64::new(0.0, 0.0); 5];
    c[4] = C64::new(1.0, 0.0);
    for k in 1..=4 {
        let am = mat_mul(m, &mk);
        let tr: C64 = (0..4).map(|i| am.0[i][i]).sum();
        c[4 - k] = -tr / k as f64;
        mk = CMatrix::from_fn(|i, j| am.0[i][j] + id.0[i][j] * c[4 - k]);
    }
    [c[0], c[1], c[2], c[3]]
}

/// `max |a_ij − e^{iφ} b_ij|` with `φ` fixed by the largest entry of `b`.
pub fn phase_diff<const R: usize, const C: usize>(a: &CMatrix<f64, R, C>, b: &CMatrix<f64, R, C>) -> f64 {
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i in 0..R {
        for j in 0..C {
            if b.0[i][j].norm() > best {
                best = b.0[i][j].norm();
                bi = i;
                bj = j;
            }
        }
    }
    let ph = a.0[bi][bj] / b.0[bi][bj];
    let ph = ph / ph.norm();
    let mut r: f64 = 0.0;
    for i in 0..R {
        for j in 0..C {
            r = r.max((a.0[i][j] - ph * b.0[i][j]).norm());
        }
    }
    r
}
