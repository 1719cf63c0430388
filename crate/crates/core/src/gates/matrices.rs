//! Standard one- and two-qubit gate matrices. Two-qubit matrices use the
//! ancilla as the more significant qubit.

use num_traits::{One, Zero};

use crate::linalg::{kron, CMat2, CMat4, CMatrix};
use crate::scalar::{cis, Cx, Real};

pub fn pauli_x<T: Real>() -> CMat2<T> {
    CMatrix::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y<T: Real>() -> CMat2<T> {
    let i = Cx::new(T::zero(), T::one());
    CMatrix([[Cx::zero(), -i], [i, Cx::zero()]])
}

pub fn pauli_z<T: Real>() -> CMat2<T> {
    CMatrix::from_real([[1.0, 0.0], [0.0, -1.0]])
}

pub fn hadamard<T: Real>() -> CMat2<T> {
    CMatrix::from_real([[1.0, 1.0], [1.0, -1.0]]).scale_re(T::FRAC_1_SQRT_2())
}

/// `exp(−iθX/2)`
pub fn rx<T: Real>(theta: T) -> CMat2<T> {
    let (s, c) = (theta / T::lit(2.0)).sin_cos();
    let mis = Cx::new(T::zero(), -s);
    CMatrix([[Cx::new(c, T::zero()), mis], [mis, Cx::new(c, T::zero())]])
}

/// `exp(−iθY/2)`
pub fn ry<T: Real>(theta: T) -> CMat2<T> {
    let (s, c) = (theta / T::lit(2.0)).sin_cos();
    CMatrix([[Cx::new(c, T::zero()), Cx::new(-s, T::zero())], [Cx::new(s, T::zero()), Cx::new(c, T::zero())]])
}

/// `exp(−iθZ/2)`
pub fn rz<T: Real>(theta: T) -> CMat2<T> {
    let h = theta / T::lit(2.0);
    CMat2::diag([cis(-h), cis(h)])
}

/// `diag(1, e^{iβ})`
pub fn phase<T: Real>(beta: T) -> CMat2<T> {
    CMat2::diag([Cx::one(), cis(beta)])
}

/// `exp(i(γ0 I + γ1 X + γ2 Y + γ3 Z))`
pub fn pauli_exp<T: Real>(g: [T; 4]) -> CMat2<T> {
    let r = (g[1] * g[1] + g[2] * g[2] + g[3] * g[3]).sqrt();
    let (s, c) = r.sin_cos();
    let f = if r > T::zero() { s / r } else { T::one() };
    let gen = pauli_x().scale_re(g[1] * f) + pauli_y().scale_re(g[2] * f) + pauli_z().scale_re(g[3] * f);
    (CMat2::identity().scale_re(c) + gen.scale(Cx::new(T::zero(), T::one()))).scale(cis(g[0]))
}

/// `e^{iα} Rz(a) Ry(b) Rz(c)`
pub fn zyz<T: Real>(alpha: T, a: T, b: T, c: T) -> CMat2<T> {
    (rz(a) * ry(b) * rz(c)).scale(cis(alpha))
}

/// CNOT with the ancilla (high qubit) as control.
pub fn cnot_as<T: Real>() -> CMat4<T> {
    CMatrix::from_real([[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.]])
}

/// CNOT with the system (low qubit) as control.
pub fn cnot_sa<T: Real>() -> CMat4<T> {
    CMatrix::from_real([[1., 0., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.], [0., 1., 0., 0.]])
}

pub fn swap<T: Real>() -> CMat4<T> {
    CMatrix::from_real([[1., 0., 0., 0.], [0., 0., 1., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.]])
}

/// `diag(1, 1, 1, e^{iβ})`
pub fn crz<T: Real>(beta: T) -> CMat4<T> {
    CMat4::diag([Cx::one(), Cx::one(), Cx::one(), cis(beta)])
}

/// `blockdiag(I, Q)`: `Q` on the system, controlled by the ancilla.
pub fn controlled_as<T: Real>(q: &CMat2<T>) -> CMat4<T> {
    let mut m = CMat4::identity();
    m.set_block(2, 2, q);
    m
}

/// `Q` on the ancilla, controlled by the system.
pub fn controlled_sa<T: Real>(q: &CMat2<T>) -> CMat4<T> {
    let s = swap();
    s * controlled_as(q) * s
}

pub fn on_ancilla<T: Real>(u: &CMat2<T>) -> CMat4<T> {
    kron(u, &CMat2::identity())
}

pub fn on_system<T: Real>(u: &CMat2<T>) -> CMat4<T> {
    kron(&CMat2::identity(), u)
}
