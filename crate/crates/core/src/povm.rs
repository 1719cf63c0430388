//! Single-qubit rank-1 POVMs with four outcomes.

use num_traits::Zero;

use crate::dilation::{extract_povm, u_sic1_reference};
use crate::error::{Error, Result};
use crate::gates::matrices::{pauli_x, pauli_y, pauli_z, rx, ry, rz};
use crate::linalg::{jacobi_sym4, CMat2, CVec2, CVector};
use crate::scalar::{cis, Cx, Real};

/// Four subnormalized kets `|φ_i⟩`; the elements are `Π_i = |φ_i⟩⟨φ_i|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitPovm4<T> {
    pub kets: [CVec2<T>; 4],
}

/// Bloch-cone coordinates `a²·(cosθ, sinθcosφ, sinθsinφ)` of one ket
/// `a(cos(θ/2)|0⟩ + e^{−iφ}sin(θ/2)|1⟩)`. The norm is the weight `a²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaVector<T>(pub [T; 3]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SicParams<T> {
    pub theta1: T,
    pub phi1: T,
    pub delta: T,
    pub c: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceSet {
    Set1,
    Set2,
}

/// Angle between any two η vectors of a qubit SIC, `arccos(−1/3)`.
pub fn sic_angle<T: Real>() -> T {
    T::lit(-1.0 / 3.0).acos()
}

impl<T: Real> EtaVector<T> {
    pub fn from_angles(weight: T, theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        EtaVector([weight * ct, weight * st * cp, weight * st * sp])
    }

    pub fn weight(&self) -> T {
        let [a, b, c] = self.0;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn from_ket(k: &CVec2<T>) -> Self {
        let a2 = k.norm_sqr();
        let (c0, c1) = (k[0], k[1]);
        let nz = c0.norm_sqr() - c1.norm_sqr();
        let off = c0.conj() * c1;
        let two = T::lit(2.0);
        EtaVector([nz, two * off.re, -two * off.im]).scaled(if a2 > T::zero() { T::one() } else { T::zero() })
    }

    fn scaled(&self, s: T) -> Self {
        EtaVector(self.0.map(|x| x * s))
    }

    /// The ket for this η with a real non-negative `|0⟩` amplitude.
    pub fn to_ket(&self) -> CVec2<T> {
        let a2 = self.weight();
        if a2 == T::zero() {
            return CVector::zeros();
        }
        let a = a2.sqrt();
        let cos_t = (self.0[0] / a2).max(-T::one()).min(T::one());
        let half = cos_t.acos() / T::lit(2.0);
        let phi = self.0[2].atan2(self.0[1]);
        CVector([Cx::new(a * half.cos(), T::zero()), cis(-phi).scale(a * half.sin())])
    }
}

impl<T: Real> QubitPovm4<T> {
    pub fn new(kets: [CVec2<T>; 4]) -> Self {
        QubitPovm4 { kets }
    }

    pub fn elements(&self) -> [CMat2<T>; 4] {
        self.kets.map(|k| k.outer())
    }

    /// `‖Σ Π_i − I‖_max`.
    pub fn validate(&self) -> T {
        let s = self.elements().into_iter().fold(CMat2::zeros(), |acc, p| acc + p);
        s.max_abs_diff(&CMat2::identity())
    }

    /// Hilbert–Schmidt overlaps `tr(Π_i Π_j)`.
    pub fn overlaps(&self) -> [[T; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.kets[i].dot(&self.kets[j]).norm_sqr()))
    }

    /// Largest deviation of the overlaps from `(2δ_ij + 1)/12`.
    pub fn sic_residual(&self) -> T {
        let ov = self.overlaps();
        let mut r = T::zero();
        for (i, row) in ov.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let want = if i == j { T::lit(0.25) } else { T::lit(1.0 / 12.0) };
                r = r.max((v - want).abs());
            }
        }
        r
    }

    /// Real frame matrix: row `i` holds `tr(P Π_i)/√2` for `P ∈ {I, X, Y, Z}`.
    pub fn frame(&self) -> [[T; 4]; 4] {
        let paulis = [CMat2::identity(), pauli_x(), pauli_y(), pauli_z()];
        let s = T::FRAC_1_SQRT_2();
        let el = self.elements();
        std::array::from_fn(|i| std::array::from_fn(|k| (paulis[k] * el[i]).trace().re * s))
    }

    /// Singular values of the frame matrix, descending.
    pub fn frame_singular_values(&self) -> [T; 4] {
        let f = self.frame();
        let g: [[T; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|b| (0..4).map(|i| f[i][a] * f[i][b]).sum()));
        let (w, _) = jacobi_sym4(&g);
        let mut s = w.map(|x| x.max(T::zero()).sqrt());
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }

    pub fn is_ic(&self) -> bool {
        self.frame_singular_values()[3] > T::tol(1e-8)
    }

    pub fn is_sic(&self) -> bool {
        self.sic_residual() < T::tol(1e-9)
    }

    pub fn etas(&self) -> [EtaVector<T>; 4] {
        self.kets.map(|k| EtaVector::from_ket(&k))
    }

    /// Kets with each leading amplitude made real and non-negative.
    pub fn phase_fixed(&self) -> Self {
        QubitPovm4 { kets: self.kets.map(|k| k.phase_fixed()) }
    }

    /// Largest element-wise difference `‖Π_i − Π'_i‖_max` in the given order.
    pub fn element_distance(&self, other: &Self) -> T {
        let (a, b) = (self.elements(), other.elements());
        (0..4).fold(T::zero(), |m, i| m.max(a[i].max_abs_diff(&b[i])))
    }

    /// The permutation `p` with `Π_i = Π'_{p[i]}`, if the element sets agree
    /// within `tol`.
    pub fn match_elements(&self, other: &Self, tol: T) -> Option<[usize; 4]> {
        let (a, b) = (self.elements(), other.elements());
        let mut used = [false; 4];
        let mut p = [0; 4];
        for i in 0..4 {
            let j = (0..4).find(|&j| !used[j] && a[i].max_abs_diff(&b[j]) < tol)?;
            used[j] = true;
            p[i] = j;
        }
        Some(p)
    }

    /// Applies a single-qubit unitary to every ket.
    pub fn rotated(&self, u: &CMat2<T>) -> Self {
        QubitPovm4 { kets: self.kets.map(|k| u.mul_vec(&k)) }
    }

    pub fn permuted(&self, p: [usize; 4]) -> Self {
        QubitPovm4 { kets: p.map(|i| self.kets[i]) }
    }
}

/// Builds a POVM from three η vectors; the fourth closes the polygon and
/// all weights are rescaled so that they sum to 2. A zero closing vector
/// is allowed and yields an empty fourth element.
pub fn construct_from_eta<T: Real>(etas: &[EtaVector<T>; 3]) -> Result<QubitPovm4<T>> {
    let mut all = [etas[0], etas[1], etas[2], EtaVector([T::zero(); 3])];
    for k in 0..3 {
        all[3].0[k] = -(etas[0].0[k] + etas[1].0[k] + etas[2].0[k]);
    }
    let total: T = all.iter().map(|e| e.weight()).sum();
    if !(total > T::zero()) {
        return Err(Error::DegenerateElement { index: 0 });
    }
    let s = T::lit(2.0) / total;
    for (i, e) in all.iter_mut().enumerate() {
        *e = e.scaled(s);
        // the closing vector may vanish (a trine); the chosen three may not
        if i < 3 && e.weight() < T::tol(1e-12) {
            return Err(Error::DegenerateElement { index: i });
        }
    }
    Ok(QubitPovm4 { kets: all.map(|e| e.to_ket()) })
}

/// `Rz(φ1) Ry(θ1) Rz(δ)`.
pub fn sic_rotation<T: Real>(p: &SicParams<T>) -> CMat2<T> {
    rz(p.phi1) * ry(p.theta1) * rz(p.delta)
}

/// SIC obtained by rotating the reference set of the `c`-branch reference
/// dilation.
pub fn construct_sic<T: Real>(params: &SicParams<T>) -> QubitPovm4<T> {
    let base = extract_povm(&u_sic1_reference::<T>(params.c).u).expect("reference dilation is unitary");
    base.rotated(&sic_rotation(params))
}

/// Qubit displacement `τ^{kl} X^k Z^l` with `τ = −e^{iπ/2}`.
pub fn displacement<T: Real>(k: u8, l: u8) -> CMat2<T> {
    let mut d = CMat2::identity();
    if k == 1 {
        d = d * pauli_x();
    }
    if l == 1 {
        d = d * pauli_z();
    }
    if k * l == 1 {
        d = d.scale(Cx::new(T::zero(), -T::one()));
    }
    d
}

/// Weyl–Heisenberg orbit `(1/√2) D_kl |f⟩`, ordered (0,0), (0,1), (1,0), (1,1).
pub fn wh_covariant_sic<T: Real>(fiducial: &CVec2<T>) -> Result<QubitPovm4<T>> {
    let n = fiducial.norm();
    if !((n - T::one()).abs() < T::tol(1e-10)) {
        return Err(Error::InvalidArgument(format!("fiducial norm {n} is not 1")));
    }
    let s = T::FRAC_1_SQRT_2();
    let kets = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(k, l)| displacement::<T>(k, l).mul_vec(fiducial).scale_re(s));
    let p = QubitPovm4 { kets };
    if !p.is_sic() {
        return Err(Error::NotFiducial { residual: p.sic_residual().to_f64_lossy() });
    }
    Ok(p)
}

/// Preparation unitary on the ancilla whose output conjugates to the
/// Set 2 fiducial: `Rz(3π/4) Rx(arccos(1/√3))`.
pub fn fiducial_prep<T: Real>() -> CMat2<T> {
    rz(T::lit(0.75) * T::PI()) * rx(T::lit(1.0 / 3.0).sqrt().acos())
}

pub fn set2_fiducial<T: Real>() -> CVec2<T> {
    fiducial_prep::<T>().col(0).conj()
}

pub fn reference_set<T: Real>(which: ReferenceSet) -> QubitPovm4<T> {
    match which {
        ReferenceSet::Set1 => {
            let first = CVector([Cx::new(T::FRAC_1_SQRT_2(), T::zero()), Cx::zero()]);
            let a = T::one() / T::lit(6.0).sqrt();
            let b = T::SQRT_2() * a;
            let rest = |j: f64| CVector([Cx::new(a, T::zero()), cis(T::lit(2.0 * (j - 2.0) / 3.0) * T::PI()).scale(b)]);
            QubitPovm4 { kets: [first, rest(2.0), rest(3.0), rest(4.0)] }
        }
        ReferenceSet::Set2 => wh_covariant_sic(&set2_fiducial()).expect("Set 2 fiducial is valid"),
    }
}

impl<T: Real> Default for SicParams<T> {
    fn default() -> Self {
        SicParams { theta1: T::zero(), phi1: T::zero(), delta: T::zero(), c: 0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn set1() -> QubitPovm4<f64> {
        reference_set(ReferenceSet::Set1)
    }

    #[test]
    fn reference_sets_are_complete_sics() {
        for w in [ReferenceSet::Set1, ReferenceSet::Set2] {
            let p: QubitPovm4<f64> = reference_set(w);
            assert!(p.validate() < 1e-12);
            assert!(p.is_sic());
            assert!(p.is_ic());
        }
        let ov = set1().overlaps();
        assert!((ov[0][0] - 0.25).abs() < 1e-15);
        assert!((ov[0][1] - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_povms_fail_predicates() {
        let z = CVector::zeros();
        let proj =
            QubitPovm4::new([CVector([cx(1.0, 0.0), cx(0.0, 0.0)]), CVector([cx(0.0, 0.0), cx(1.0, 0.0)]), z, z]);
        assert!(proj.validate() < 1e-15);
        assert!(!proj.is_ic());
        let zero = QubitPovm4::<f64>::new([z; 4]);
        assert_eq!(zero.validate(), 1.0);
        let h = 0.5f64.sqrt();
        let same = QubitPovm4::<f64>::new([CVector([cx(h, 0.0), cx(0.0, 0.0)]); 4]);
        assert!(!same.is_ic());
    }

    #[test]
    fn eta_round_trip_reproduces_set1() {
        let e = set1().etas();
        let p = construct_from_eta(&[e[0], e[1], e[2]]).unwrap();
        assert!(p.element_distance(&set1()) < 1e-12);
        assert!(p.kets.iter().all(|k| k[0].im == 0.0 && k[0].re >= 0.0));
    }

    #[test]
    fn coplanar_equal_weights_close_exactly() {
        let w = 0.5;
        let pi = std::f64::consts::PI;
        let etas = [0.0, 2.0 * pi / 3.0, 4.0 * pi / 3.0].map(|t| EtaVector::from_angles(w, pi / 2.0, t));
        let p = construct_from_eta(&etas).unwrap();
        assert!(p.validate() < 1e-12);
        assert!(!p.is_sic());
    }

    #[test]
    fn antiparallel_pair_with_empty_third_is_degenerate() {
        let a = EtaVector([0.3, 0.1, 0.2]);
        let b = EtaVector([-0.3, -0.1, -0.2]);
        let z = EtaVector([0.0, 0.0, 0.0]);
        assert!(matches!(construct_from_eta(&[a, b, z]), Err(Error::DegenerateElement { .. })));
    }

    #[test]
    fn zero_state_is_not_a_fiducial() {
        let f: CVec2<f64> = CVector([cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert!(matches!(wh_covariant_sic(&f), Err(Error::NotFiducial { .. })));
    }

    #[test]
    fn construct_sic_identity_params_give_set1_elements() {
        let p0 = construct_sic::<f64>(&SicParams::default());
        assert!(p0.match_elements(&set1(), 1e-12).is_some());
        let p1 = construct_sic::<f64>(&SicParams { c: 1, ..Default::default() });
        let e0 = p0.elements();
        let e1 = p1.elements();
        assert!(e0[0].max_abs_diff(&e1[0]) < 1e-12);
        assert!(e0[1].max_abs_diff(&e1[1]) < 1e-12);
        assert!(e0[2].max_abs_diff(&e1[3]) < 1e-12);
        assert!(e0[3].max_abs_diff(&e1[2]) < 1e-12);
    }

    #[test]
    fn set2_fiducial_bloch_vector_is_diagonal() {
        let f = set2_fiducial::<f64>();
        let eta = EtaVector::from_ket(&f).0;
        // (z, x, −y) ordering
        let s = 1.0 / 3.0f64.sqrt();
        assert!((eta[0] - s).abs() < 1e-12);
        assert!((eta[1] - s).abs() < 1e-12);
        assert!((eta[2] - s).abs() < 1e-12);
    }

    #[test]
    fn single_precision_smoke() {
        let p: QubitPovm4<f32> = reference_set(ReferenceSet::Set1);
        assert!(p.validate() < 1e-6);
        assert!(p.is_sic());
    }
}
