//! Local equivalence of two-qubit gates: the γ invariant, its characteristic
//! polynomial, Weyl-chamber coordinates and CNOT counts.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gates::matrices::{pauli_x, pauli_y, pauli_z};
use crate::linalg::{char_poly4, eig4, jacobi_sym4, kron, to_su4, CMat2, CMat4, CMatrix};
use crate::scalar::{cis, Cx, Real};

/// Weyl-chamber coordinates `(k1, k2, k3)` in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalVector<T> {
    pub k: [T; 3],
}

#[derive(Clone, Copy, Debug)]
pub struct GammaInvariant<T> {
    pub gamma: CMat4<T>,
    pub tr_gamma: Cx<T>,
    pub tr_gamma_sq: Cx<T>,
    pub det_u: Cx<T>,
}

/// Tolerances for classification (`one_cnot`, `k3`, `zero`) and for the
/// chamber boundary rule (`boundary`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub one_cnot: f64,
    pub k3: f64,
    pub zero: f64,
    pub boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { one_cnot: 1e-8, k3: 1e-8, zero: 1e-8, boundary: 1e-10 }
    }
}

/// `[XX, YY, ZZ]`
pub fn sigma_pairs<T: Real>() -> [CMat4<T>; 3] {
    [kron(&pauli_x(), &pauli_x()), kron(&pauli_y(), &pauli_y()), kron(&pauli_z(), &pauli_z())]
}

/// Magic basis; its columns are Bell states with phases chosen so that
/// local gates become real orthogonal matrices.
pub fn magic_basis<T: Real>() -> CMat4<T> {
    let o = Cx::<T>::one();
    let z = Cx::<T>::zero();
    let i = Cx::<T>::new(T::zero(), T::one());
    CMatrix([[o, z, z, i], [z, i, o, z], [z, i, -o, z], [o, z, z, -i]]).scale_re(T::FRAC_1_SQRT_2())
}

/// `A[j][i]`: eigenvalue of `Σ_i` on magic-basis vector `j` (each ±1).
fn magic_signs<T: Real>() -> [[T; 3]; 4] {
    let b = magic_basis::<T>();
    let s = sigma_pairs::<T>();
    let d: [[T; 4]; 3] = std::array::from_fn(|i| {
        let m = b.adjoint() * s[i] * b;
        std::array::from_fn(|j| m[(j, j)].re)
    });
    std::array::from_fn(|j| std::array::from_fn(|i| d[i][j]))
}

impl<T: Real> GammaInvariant<T> {
    /// χ coefficients `[c0, c1, c2, c3]` of `x⁴ + c3x³ + c2x² + c1x + c0`
    /// from the closed form valid for unitary `U`.
    pub fn chi(&self) -> [Cx<T>; 4] {
        let t = self.tr_gamma;
        let d2 = self.det_u * self.det_u;
        [d2, -d2 * t.conj(), (t * t - self.tr_gamma_sq) / T::lit(2.0), -t]
    }

    /// χ coefficients from expanding `det(xI − γ)` directly.
    pub fn chi_direct(&self) -> [Cx<T>; 4] {
        char_poly4(&self.gamma)
    }

    /// `|tr γ|` and `|tr γ² + 4 det U|`; both vanish exactly for gates
    /// locally equivalent to CNOT.
    pub fn one_cnot_residuals(&self) -> (T, T) {
        (self.tr_gamma.norm(), (self.tr_gamma_sq + self.det_u.scale(T::lit(4.0))).norm())
    }
}

/// `γ(U) = U (Y⊗Y) Uᵀ (Y⊗Y)`.
pub fn gamma_of<T: Real>(u: &CMat4<T>) -> Result<GammaInvariant<T>> {
    let dev = u.isometry_deviation();
    if !(dev < T::tol(1e-10)) {
        return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
    }
    Ok(gamma_unchecked(u))
}

pub(crate) fn gamma_unchecked<T: Real>(u: &CMat4<T>) -> GammaInvariant<T> {
    let yy = sigma_pairs::<T>()[1];
    let g = *u * yy * u.transpose() * yy;
    GammaInvariant { gamma: g, tr_gamma: g.trace(), tr_gamma_sq: (g * g).trace(), det_u: u.det() }
}

/// `exp(i(k1 XX + k2 YY + k3 ZZ))`, evaluated in the magic basis.
pub fn nonlocal_gate<T: Real>(k: [T; 3]) -> CMat4<T> {
    let a = magic_signs::<T>();
    let b = magic_basis::<T>();
    let d = CMat4::diag(std::array::from_fn(|j| cis(a[j][0] * k[0] + a[j][1] * k[1] + a[j][2] * k[2])));
    b * d * b.adjoint()
}

fn thetas_to_k<T: Real>(mut th: [T; 4]) -> [T; 3] {
    let sum: T = th.iter().copied().sum();
    let m = (sum / T::PI()).round();
    th[0] = th[0] - m * T::PI();
    let a = magic_signs::<T>();
    std::array::from_fn(|i| (0..4).map(|j| a[j][i] * th[j]).sum::<T>() / T::lit(4.0))
}

fn reduce_quarter<T: Real>(x: T) -> (T, i64) {
    let half = T::FRAC_PI_2();
    let n = ((x + T::FRAC_PI_4()) / half).floor();
    (x - n * half, n.to_i64().unwrap_or(0))
}

/// One elementary chamber move applied to the coordinates.
#[derive(Clone, Copy, Debug)]
enum Move {
    /// `k_i -= n·π/2`
    Shift(usize, i64),
    Swap(usize, usize),
    /// negate `k_a` and `k_b`
    Flip(usize, usize),
}

fn apply_move<T: Real>(k: &mut [T; 3], m: Move) {
    match m {
        Move::Shift(i, n) => k[i] = k[i] - T::lit(n as f64) * T::FRAC_PI_2(),
        Move::Swap(a, b) => k.swap(a, b),
        Move::Flip(a, b) => {
            k[a] = -k[a];
            k[b] = -k[b];
        }
    }
}

/// The moves that take raw coordinates into the chamber
/// `π/4 ≥ k1 ≥ k2 ≥ |k3|`, with `k3 ≥ 0` on the `k1 = π/4` face.
fn chamber_moves<T: Real>(k0: [T; 3], boundary: T) -> Vec<Move> {
    let mut k = k0;
    let mut moves = Vec::new();
    let mut push = |k: &mut [T; 3], m: Move| {
        apply_move(k, m);
        moves.push(m);
    };
    for i in 0..3 {
        let (_, n) = reduce_quarter(k[i]);
        if n != 0 {
            push(&mut k, Move::Shift(i, n));
        }
    }
    for _ in 0..3 {
        for i in 0..2 {
            if k[i].abs() < k[i + 1].abs() {
                push(&mut k, Move::Swap(i, i + 1));
            }
        }
    }
    if k[0] < T::zero() && k[1] < T::zero() {
        push(&mut k, Move::Flip(0, 1));
    } else if k[0] < T::zero() {
        push(&mut k, Move::Flip(0, 2));
    } else if k[1] < T::zero() {
        push(&mut k, Move::Flip(1, 2));
    }
    if (k[0] - T::FRAC_PI_4()).abs() < boundary && k[2] < T::zero() {
        push(&mut k, Move::Shift(0, 1));
        push(&mut k, Move::Flip(0, 2));
    }
    moves
}

/// Reduces arbitrary coordinates into the Weyl chamber.
pub fn canonicalize_k<T: Real>(k: [T; 3], tol: &Tolerances) -> [T; 3] {
    let mut out = k;
    for m in chamber_moves(k, T::lit(tol.boundary)) {
        apply_move(&mut out, m);
    }
    out
}

/// Magic-basis image of `U` in SU(4) and `MᵀM`.
fn magic_square<T: Real>(u: &CMat4<T>) -> Result<(CMat4<T>, CMat4<T>, Cx<T>)> {
    let (s, ph) = to_su4(u)?;
    let b = magic_basis::<T>();
    let up = b.adjoint() * s * b;
    Ok((up, up.transpose() * up, cis(ph / T::lit(4.0))))
}

pub fn canonical_vector<T: Real>(u: &CMat4<T>) -> Result<CanonicalVector<T>> {
    canonical_vector_with(u, &Tolerances::default())
}

/// Chamber coordinates from the eigenphases of `MᵀM`; the pairing of
/// eigenvalues with magic-basis slots only changes the raw coordinates by a
/// chamber symmetry, so sorting by phase is harmless.
pub fn canonical_vector_with<T: Real>(u: &CMat4<T>, tol: &Tolerances) -> Result<CanonicalVector<T>> {
    let (_, m2, _) = magic_square(u)?;
    let e = eig4(&m2)?;
    let th = e.values.map(|d| d.arg() / T::lit(2.0));
    Ok(CanonicalVector { k: canonicalize_k(thetas_to_k(th), tol) })
}

pub fn cnot_count<T: Real>(u: &CMat4<T>) -> Result<u8> {
    cnot_count_with(u, &Tolerances::default())
}

pub fn cnot_count_with<T: Real>(u: &CMat4<T>, tol: &Tolerances) -> Result<u8> {
    let k = canonical_vector_with(u, tol)?.k;
    Ok(classify(&gamma_of(u)?, k, tol))
}

pub(crate) fn classify<T: Real>(g: &GammaInvariant<T>, k: [T; 3], tol: &Tolerances) -> u8 {
    let zero = T::tol(tol.zero);
    if k.iter().all(|x| x.abs() < zero) {
        return 0;
    }
    let (r1, r2) = g.one_cnot_residuals();
    let t1 = T::tol(tol.one_cnot);
    if r1 < t1 && r2 < t1 {
        return 1;
    }
    if k[2].abs() < T::tol(tol.k3) {
        return 2;
    }
    3
}

/// `U = phase · K1 · exp(i k·Σ) · K2` with `K1`, `K2` local.
#[derive(Clone, Copy, Debug)]
pub struct Kak<T> {
    pub phase: Cx<T>,
    pub k1: CMat4<T>,
    pub k: [T; 3],
    pub k2: CMat4<T>,
}

impl<T: Real> Kak<T> {
    pub fn reconstruct(&self) -> CMat4<T> {
        (self.k1 * nonlocal_gate(self.k) * self.k2).scale(self.phase)
    }

    fn apply(&mut self, m: Move) {
        let id = CMat2::<T>::identity();
        let paulis = [pauli_x::<T>(), pauli_y(), pauli_z()];
        match m {
            Move::Shift(i, n) => {
                // exp(i·nπ/2·Σ_i) = (iΣ_i)^n
                let step = sigma_pairs::<T>()[i].scale(Cx::new(T::zero(), T::one()));
                let mut p = CMat4::identity();
                for _ in 0..n.rem_euclid(4) {
                    p = step * p;
                }
                self.k2 = p * self.k2;
            }
            Move::Swap(a, b) => {
                let u = (paulis[a] + paulis[b]).scale_re(T::FRAC_1_SQRT_2());
                let l = kron(&u, &u);
                self.k1 = self.k1 * l.adjoint();
                self.k2 = l * self.k2;
            }
            Move::Flip(a, b) => {
                let c = 3 - a - b;
                let l = kron(&paulis[c], &id);
                self.k1 = self.k1 * l.adjoint();
                self.k2 = l * self.k2;
            }
        }
        apply_move(&mut self.k, m);
    }

    /// Moves the coordinates into the Weyl chamber, updating the local
    /// factors so that `reconstruct` is unchanged.
    pub fn canonicalize(&mut self, tol: &Tolerances) {
        for m in chamber_moves(self.k, T::lit(tol.boundary)) {
            self.apply(m);
        }
    }

    /// Exchanges `k2` and `k3`, keeping the product fixed.
    pub fn swap_k2_k3(&mut self) {
        self.apply(Move::Swap(1, 2));
    }
}

/// Cartan decomposition through the magic basis. The coordinates are raw
/// (not reduced into the chamber).
pub fn kak<T: Real>(u: &CMat4<T>) -> Result<Kak<T>> {
    let (up, m2, phase) = magic_square(u)?;
    let b = magic_basis::<T>();
    let re: [[T; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| m2[(i, j)].re));
    let im: [[T; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| m2[(i, j)].im));

    // Re and Im of MᵀM commute; a generic real mix shares their eigenbasis.
    let mut best: Option<(T, [[T; 4]; 4])> = None;
    for mix in [0.573_218_f64, 1.732_05, -0.311_7, 2.645_75, 0.090_1] {
        let mix = T::lit(mix);
        let a: [[T; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| re[i][j] + mix * im[i][j]));
        let (_, p) = jacobi_sym4(&a);
        let pm = real_to_cx(&p);
        let d = pm.transpose() * m2 * pm;
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .fold(T::zero(), |acc, (i, j)| acc.max(d[(i, j)].norm()));
        if best.as_ref().is_none_or(|(o, _)| off < *o) {
            best = Some((off, p));
        }
        if off < T::tol(1e-12) {
            break;
        }
    }
    let (off, p) = best.unwrap();
    if !(off < T::tol(1e-7)) {
        return Err(Error::NoConvergence { iterations: 5 });
    }
    let pm = real_to_cx(&p);
    let d = pm.transpose() * m2 * pm;
    let mut th: [T; 4] = std::array::from_fn(|j| d[(j, j)].arg() / T::lit(2.0));
    let sum: T = th.iter().copied().sum();
    th[0] = th[0] - (sum / T::PI()).round() * T::PI();
    let dinv = CMat4::diag(th.map(|t| cis(-t)));
    let o1 = up * pm * dinv;
    let o2 = pm.transpose();
    let k = thetas_to_k(th);
    Ok(Kak { phase, k1: b * o1 * b.adjoint(), k, k2: b * o2 * b.adjoint() })
}

fn real_to_cx<T: Real>(p: &[[T; 4]; 4]) -> CMat4<T> {
    CMatrix::from_fn(|i, j| Cx::new(p[i][j], T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::matrices::{cnot_as, swap};
    use crate::linalg::factor_local;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn magic_signs_are_a_hadamard_pattern() {
        let a = magic_signs::<f64>();
        for i in 0..3 {
            let col_sum: f64 = (0..4).map(|j| a[j][i]).sum();
            assert!(col_sum.abs() < 1e-15);
            for j in 0..4 {
                assert!((a[j][i].abs() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cnot_invariants() {
        let u = cnot_as::<f64>().scale(cis(PI / 4.0));
        let g = gamma_of(&u).unwrap();
        assert!(g.tr_gamma.norm() < 1e-14);
        assert!((g.tr_gamma_sq + Cx::new(4.0, 0.0)).norm() < 1e-14);
        let k = canonical_vector(&cnot_as::<f64>()).unwrap().k;
        assert!((k[0] - PI / 4.0).abs() < 1e-10 && k[1].abs() < 1e-10 && k[2].abs() < 1e-10, "{k:?}");
        assert_eq!(cnot_count(&cnot_as::<f64>()).unwrap(), 1);
    }

    #[test]
    fn identity_and_swap() {
        let id = CMat4::<f64>::identity();
        let g = gamma_of(&id).unwrap();
        assert!(g.gamma.max_abs_diff(&id) < 1e-15);
        assert_eq!(cnot_count(&id).unwrap(), 0);
        let k = canonical_vector(&swap::<f64>()).unwrap().k;
        for x in k {
            assert!((x - PI / 4.0).abs() < 1e-9, "{k:?}");
        }
        assert_eq!(cnot_count(&swap::<f64>()).unwrap(), 3);
    }

    #[test]
    fn closed_form_chi_matches_expansion() {
        let u = nonlocal_gate([0.3f64, 0.2, -0.1]) * kron(&pauli_x(), &pauli_z());
        let g = gamma_of(&u).unwrap();
        let (a, b) = (g.chi(), g.chi_direct());
        for i in 0..4 {
            assert!((a[i] - b[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn canonicalization_examples() {
        let t = Tolerances::default();
        let k = canonicalize_k([-0.1f64, 0.5, 0.05], &t);
        assert!((k[0] - 0.5).abs() < 1e-15 && (k[1] - 0.1).abs() < 1e-15 && (k[2] + 0.05).abs() < 1e-15);
        let k = canonicalize_k([PI / 4.0, 0.2, -0.1], &t);
        assert!((k[0] - PI / 4.0).abs() < 1e-15 && (k[2] - 0.1).abs() < 1e-15);
        let k = canonicalize_k([PI / 2.0 + 0.1, 0.0, 0.0], &t);
        assert!((k[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn kak_reconstructs_and_factors_are_local() {
        let u = cnot_as::<f64>()
            * kron(&crate::gates::matrices::ry(0.4), &crate::gates::matrices::rx(1.3))
            * nonlocal_gate([0.7, -0.2, 0.4])
            * swap();
        let mut d = kak(&u).unwrap();
        assert!(d.reconstruct().max_abs_diff(&u) < 1e-12);
        d.canonicalize(&Tolerances::default());
        assert!(d.reconstruct().max_abs_diff(&u) < 1e-12);
        let want = canonical_vector(&u).unwrap().k;
        for i in 0..3 {
            assert!((d.k[i] - want[i]).abs() < 1e-9);
        }
        for l in [d.k1, d.k2] {
            let (a, b, ph) = factor_local(&l);
            assert!(kron(&a, &b).scale(ph).max_abs_diff(&l) < 1e-12);
        }
    }
}
