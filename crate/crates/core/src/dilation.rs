//! Neumark dilations of four-outcome qubit POVMs.
//!
//! Row `r = 2·b_A + b_S` of a dilation `U = [V W]` holds `⟨φ_r|` in its
//! first two columns, so measuring ancilla and system after `U` acting on
//! `|0⟩_A|ψ⟩_S` realizes the POVM.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gates::matrices::{cnot_as, controlled_as, crz, hadamard, on_ancilla, phase, rx, rz};
use crate::linalg::{complete_to_unitary, kron, CMat2, CMat4, CMat4x2, CMatrix, CVector};
use crate::povm::{fiducial_prep, QubitPovm4};
use crate::scalar::{cis, wrap_angle, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DilationUnitary<T> {
    pub u: CMat4<T>,
    /// Unobservable global phase carried alongside `u`; never compared.
    pub global_phase: T,
}

/// Free-parameter adjustment `[γ0 γ1 γ2 γ3 β1 β2 β3]`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ThetaDelta<T> {
    pub gamma: [T; 4],
    pub beta: [T; 3],
}

impl<T: Real> ThetaDelta<T> {
    pub fn zero() -> Self {
        ThetaDelta { gamma: [T::zero(); 4], beta: [T::zero(); 3] }
    }

    pub fn from_array(a: [T; 7]) -> Self {
        ThetaDelta { gamma: [a[0], a[1], a[2], a[3]], beta: [a[4], a[5], a[6]] }
    }

    pub fn to_array(&self) -> [T; 7] {
        let (g, b) = (self.gamma, self.beta);
        [g[0], g[1], g[2], g[3], b[0], b[1], b[2]]
    }

    /// Every angle wrapped into `(−π, π]`.
    pub fn normalized(&self) -> Self {
        Self::from_array(self.to_array().map(wrap_angle))
    }

    /// `Q = e^{iγ0} Rx(γ1) Rz(γ2) Rx(γ3)`
    pub fn q(&self) -> CMat2<T> {
        let g = self.gamma;
        (rx(g[1]) * rz(g[2]) * rx(g[3])).scale(cis(g[0]))
    }

    /// `C_Rz(β3) (Ph(β1) ⊗ Ph(β2))`
    pub fn u_ph(&self) -> CMat4<T> {
        let b = self.beta;
        crz(b[2]) * kron(&phase(b[0]), &phase(b[1]))
    }
}

impl<T: Real> DilationUnitary<T> {
    pub fn new(u: CMat4<T>) -> Result<Self> {
        let dev = u.isometry_deviation();
        if !(dev < T::tol(1e-10)) {
            return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
        }
        Ok(DilationUnitary { u, global_phase: T::zero() })
    }

    pub fn v_block(&self) -> CMat4x2<T> {
        self.u.block(0, 0)
    }

    pub fn w_block(&self) -> CMat4x2<T> {
        self.u.block(0, 2)
    }

    pub fn povm(&self) -> QubitPovm4<T> {
        povm_of_rows(&self.u)
    }
}

fn povm_of_rows<T: Real>(u: &CMat4<T>) -> QubitPovm4<T> {
    QubitPovm4 { kets: std::array::from_fn(|r| CVector([u[(r, 0)].conj(), u[(r, 1)].conj()])) }
}

/// `V` with row `i` equal to `⟨φ_i|`.
pub fn build_v<T: Real>(povm: &QubitPovm4<T>) -> Result<CMat4x2<T>> {
    let res = povm.validate();
    if !(res < T::tol(1e-9)) {
        return Err(Error::IncompletePovm { residual: res.to_f64_lossy() });
    }
    Ok(CMatrix::from_fn(|i, j| povm.kets[i][j].conj()))
}

pub fn build_dilation<T: Real>(povm: &QubitPovm4<T>) -> Result<DilationUnitary<T>> {
    let v = build_v(povm)?;
    let u = complete_to_unitary(&v).map_err(|e| match e {
        Error::NonIsometry { deviation } => Error::IncompletePovm { residual: deviation },
        other => other,
    })?;
    Ok(DilationUnitary { u, global_phase: T::zero() })
}

/// POVM realized by `U` acting on `|0⟩_A`: ket `r` is the conjugated row
/// `r` restricted to the first two columns.
pub fn extract_povm<T: Real>(u: &CMat4<T>) -> Result<QubitPovm4<T>> {
    let dev = u.isometry_deviation();
    if !(dev < T::tol(1e-10)) {
        return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
    }
    Ok(povm_of_rows(u))
}

/// `U_ph · U_base · C_Q`.
pub fn apply_theta<T: Real>(base: &DilationUnitary<T>, d: &ThetaDelta<T>) -> DilationUnitary<T> {
    DilationUnitary { u: d.u_ph() * base.u * controlled_as(&d.q()), global_phase: base.global_phase }
}

/// Reference dilation of Set 1 with branch `c`.
pub fn u_sic1_reference<T: Real>(c: u8) -> DilationUnitary<T> {
    let s = if c.is_multiple_of(2) { T::one() } else { -T::one() };
    let a = Cx::new(T::one() / T::lit(3.0).sqrt(), T::zero());
    let b = T::SQRT_2() / T::lit(3.0).sqrt();
    let o = Cx::<T>::one();
    let z = Cx::<T>::zero();
    let third = T::PI() / T::lit(3.0);
    let e = |k: T| cis(s * k * third);
    let rows = [
        [o, z, o, z],
        [a, Cx::new(b, T::zero()), -a, Cx::new(b, T::zero())],
        [a, e(T::lit(2.0)).scale(b), -a, -e(T::one()).scale(b)],
        [a, e(T::lit(-2.0)).scale(b), -a, -e(-T::one()).scale(b)],
    ];
    let u = CMatrix(rows).scale_re(T::FRAC_1_SQRT_2());
    DilationUnitary { u, global_phase: T::zero() }
}

/// Bell-measurement dilation of Set 2: `(H ⊗ I) · CNOT · (U_A ⊗ I)`.
pub fn u_sic2_reference<T: Real>() -> DilationUnitary<T> {
    let u = on_ancilla(&hadamard()) * cnot_as() * on_ancilla(&fiducial_prep());
    DilationUnitary { u, global_phase: T::zero() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::{reference_set, ReferenceSet};
    use crate::scalar::cx;

    #[test]
    fn reference_dilations_are_unitary() {
        for c in 0..2 {
            assert!(u_sic1_reference::<f64>(c).u.isometry_deviation() < 1e-15);
        }
        assert!(u_sic2_reference::<f64>().u.isometry_deviation() < 1e-15);
        let r = u_sic1_reference::<f64>(0).u;
        let h = 0.5f64.sqrt();
        assert!((r[(0, 0)] - cx(h, 0.0)).norm() < 1e-15 && (r[(0, 2)] - cx(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_extracts_projective_pattern() {
        let p = extract_povm(&CMat4::<f64>::identity()).unwrap();
        assert!(p.validate() < 1e-15);
        assert_eq!(p.kets[2].norm(), 0.0);
        assert_eq!(p.kets[3].norm(), 0.0);
    }

    #[test]
    fn set1_dilation_round_trip() {
        let s1: QubitPovm4<f64> = reference_set(ReferenceSet::Set1);
        let d = build_dilation(&s1).unwrap();
        assert!(d.u.isometry_deviation() < 1e-12);
        assert!(d.povm().element_distance(&s1) < 1e-12);
        assert!((0..4).all(|r| d.u[(r, 0)].im == 0.0));
    }

    #[test]
    fn incomplete_povm_is_rejected() {
        let mut s1: QubitPovm4<f64> = reference_set(ReferenceSet::Set1);
        s1.kets[0] = s1.kets[0].scale_re(0.9);
        assert!(matches!(build_v(&s1), Err(Error::IncompletePovm { .. })));
    }

    #[test]
    fn sic1_references_give_set1_elements() {
        let s1: QubitPovm4<f64> = reference_set(ReferenceSet::Set1);
        let p0 = extract_povm(&u_sic1_reference::<f64>(0).u).unwrap();
        let p1 = extract_povm(&u_sic1_reference::<f64>(1).u).unwrap();
        // conjugated rows: c=1 is the labelled order 1234, c=0 is 1243
        assert_eq!(p1.match_elements(&s1, 1e-12), Some([0, 1, 2, 3]));
        assert_eq!(p0.match_elements(&s1, 1e-12), Some([0, 1, 3, 2]));
    }

    #[test]
    fn sic2_reference_gives_set2_elements() {
        let s2: QubitPovm4<f64> = reference_set(ReferenceSet::Set2);
        let p = u_sic2_reference::<f64>().povm();
        // Bell rows come out as D_00, D_10, D_01, D_11
        assert_eq!(p.match_elements(&s2, 1e-12), Some([0, 2, 1, 3]));
    }

    #[test]
    fn zero_delta_is_identity() {
        let b = u_sic1_reference::<f64>(0);
        let a = apply_theta(&b, &ThetaDelta::zero());
        assert!(a.u.max_abs_diff(&b.u) < 1e-15);
    }
}
