//! CNOT-count reduction by choosing the free dilation parameters.

use std::fmt;
use std::str::FromStr;

use crate::dilation::{apply_theta, u_sic2_reference, DilationUnitary, ThetaDelta};
use crate::equivalence::{canonical_vector, gamma_unchecked};
use crate::error::{Error, Result};
use crate::gates::matrices::{cnot_as, cnot_sa, on_ancilla, on_system, pauli_x, swap};
use crate::gates::{general_circuit, verify_circuit};
use crate::linalg::{kron, pseudo_inverse, to_su4, CMat2, CMat4, CMat4x2, CMatrix, CVector};
use crate::scalar::{cis, Cx, Real};

/// One of the 24 relabelling operators: an X-circuit case (1–4) followed by
/// a CNOT-circuit case (a–f).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RelabelCode {
    pub digit: u8,
    pub letter: char,
}

impl RelabelCode {
    pub fn all() -> Vec<RelabelCode> {
        (1..=4).flat_map(|d| "abcdef".chars().map(move |l| RelabelCode { digit: d, letter: l })).collect()
    }
}

impl fmt::Display for RelabelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.digit, self.letter)
    }
}

impl FromStr for RelabelCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut ch = s.chars();
        let (d, l) = (ch.next(), ch.next());
        match (d, l, ch.next()) {
            (Some(d @ '1'..='4'), Some(l @ 'a'..='f'), None) => Ok(RelabelCode { digit: d as u8 - b'0', letter: l }),
            _ => Err(Error::InvalidArgument(format!("bad relabel code {s:?}"))),
        }
    }
}

fn digit_unitary<T: Real>(d: u8) -> CMat4<T> {
    let x = pauli_x::<T>();
    match d {
        1 => CMat4::identity(),
        2 => on_system(&x),
        3 => on_ancilla(&x),
        _ => kron(&x, &x),
    }
}

fn letter_unitary<T: Real>(l: char) -> CMat4<T> {
    match l {
        'a' => CMat4::identity(),
        'b' => cnot_as(),
        'c' => cnot_sa(),
        'd' => cnot_sa() * cnot_as(),
        'e' => cnot_as() * cnot_sa(),
        _ => swap(),
    }
}

/// `U_rel = P_letter · P_digit`.
pub fn relabel_unitary<T: Real>(code: RelabelCode) -> CMat4<T> {
    letter_unitary(code.letter) * digit_unitary(code.digit)
}

/// Row `r` of `U_rel · V` is row `σ(r)` of `V`; returns the 1-based `σ`
/// as a string such as `"3241"`.
pub fn permutation_string<T: Real>(u_rel: &CMat4<T>) -> String {
    (0..4)
        .map(|r| {
            let j = (0..4).find(|&j| u_rel[(r, j)].norm() > T::lit(0.5)).unwrap_or(r);
            char::from(b'1' + j as u8)
        })
        .collect()
}

/// `Im tr γ` in the SU(4) gauge. Along any scan of γ1..γ3 it is continuous,
/// and it vanishes exactly where the chamber coordinate `k3` does.
pub fn k3_surrogate<T: Real>(u: &CMat4<T>) -> T {
    let (s, _) = to_su4(u).expect("dilation is unitary");
    gamma_unchecked(&s).tr_gamma.im
}

const GRID: usize = 64;
const SCAN_AXES: [usize; 3] = [2, 1, 3];

fn delta_on_axis<T: Real>(axis: usize, x: T) -> ThetaDelta<T> {
    let mut d = ThetaDelta::zero();
    d.gamma[axis] = x;
    d
}

/// Finds `Θ*` with `|k3| < 1e−8` by scanning one γ parameter at a time for
/// a sign change of [`k3_surrogate`] and bisecting it.
pub fn find_2cnot_theta<T: Real>(base: &DilationUnitary<T>) -> Result<(ThetaDelta<T>, DilationUnitary<T>)> {
    let k3_tol = T::tol(1e-8);
    if canonical_vector(&base.u)?.k[2].abs() < k3_tol {
        return Ok((ThetaDelta::zero(), *base));
    }
    let s_at = |axis: usize, x: T| k3_surrogate(&apply_theta(base, &delta_on_axis(axis, x)).u);
    let two_pi = T::PI() + T::PI();
    let (mut lo_seen, mut hi_seen) = (T::infinity(), T::neg_infinity());
    for axis in SCAN_AXES {
        let xs: Vec<T> = (0..=GRID).map(|i| -T::PI() + two_pi * T::lit(i as f64 / GRID as f64)).collect();
        let vals: Vec<T> = xs.iter().map(|&x| s_at(axis, x)).collect();
        for &v in &vals {
            lo_seen = lo_seen.min(v);
            hi_seen = hi_seen.max(v);
        }
        for i in 0..GRID {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            let (mut fa, fb) = (vals[i], vals[i + 1]);
            if fa == T::zero() {
                b = a;
            } else if fa.signum() == fb.signum() {
                continue;
            }
            while (b - a).abs() > T::tol(1e-12) {
                let m = (a + b) / T::lit(2.0);
                let fm = s_at(axis, m);
                if fm == T::zero() {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            let d = delta_on_axis(axis, (a + b) / T::lit(2.0));
            let u = apply_theta(base, &d);
            if canonical_vector(&u.u)?.k[2].abs() < k3_tol {
                return Ok((d, u));
            }
        }
    }
    Err(Error::SearchFailed { min: lo_seen.to_f64_lossy(), max: hi_seen.to_f64_lossy() })
}

/// Closed-form one-CNOT adjustment `[0, π, 0, 0, 0, 0, (−1)^c π/2]` for the
/// Set 1 reference dilation.
pub fn sic_1cnot_theta<T: Real>(c: u8) -> ThetaDelta<T> {
    let s = if c.is_multiple_of(2) { T::one() } else { -T::one() };
    ThetaDelta { gamma: [T::zero(), T::PI(), T::zero(), T::zero()], beta: [T::zero(), T::zero(), s * T::FRAC_PI_2()] }
}

#[derive(Clone, Copy, Debug)]
pub struct Algo1Result<T> {
    pub u_s: CMat2<T>,
    pub c: u8,
    /// `[α11, α12, α21, α22]`
    pub alpha: [T; 4],
    pub u_pr: CMat2<T>,
}

#[derive(Clone, Copy, Debug)]
pub struct Algo2Result<T> {
    pub beta: [T; 3],
    pub q: CMat2<T>,
}

/// `[φ1, φ1⊥]` for the first normalized ket, plus the phases of `⟨φ2|`
/// against its two columns.
fn frame_and_phases<T: Real>(u: &CMat4<T>) -> (CMat2<T>, [T; 2]) {
    let ket = |r: usize| CVector([u[(r, 0)].conj(), u[(r, 1)].conj()]).scale_re(T::SQRT_2());
    let p1 = ket(0);
    let perp = CVector([-p1[1].conj(), p1[0].conj()]).phase_fixed();
    let frame = CMatrix([[p1[0], perp[0]], [p1[1], perp[1]]]);
    let p2 = ket(1);
    (frame, [p2.dot(&frame.col(0)).arg(), p2.dot(&frame.col(1)).arg()])
}

/// Recovers `U_S` and `c` for a SIC dilation relative to the Bell
/// reference.
pub fn algo1<T: Real>(target: &DilationUnitary<T>) -> Result<Algo1Result<T>> {
    let povm = target.povm();
    if !povm.is_sic() {
        return Err(Error::NotSic { residual: povm.sic_residual().to_f64_lossy() });
    }
    let reference = u_sic2_reference::<T>();
    let (u1, [a11, a12]) = frame_and_phases(&target.u);
    let (u2, [a21, a22]) = frame_and_phases(&reference.u);
    let u_r = CMat2::diag([Cx::new(T::one(), T::zero()), cis(a12 - a22 - a11 + a21)]);
    let u_s = u2 * u_r * u1.adjoint();
    let vd1: CMat2<T> = target.u.block(2, 0);
    let vd2: CMat2<T> = reference.u.block(2, 0);
    let u_pr = vd1 * crate::linalg::inverse2(&(vd2 * u_s));
    let off = u_pr[(0, 1)].norm().max(u_pr[(1, 0)].norm());
    let c = if off < T::tol(1e-8) { 1 } else { 0 };
    Ok(Algo1Result { u_s, c, alpha: [a11, a12, a21, a22], u_pr })
}

/// Recovers the phase gates and `Q` of the general circuit.
pub fn algo2<T: Real>(target: &DilationUnitary<T>, a1: &Algo1Result<T>) -> Result<Algo2Result<T>> {
    let [a11, _, a21, _] = a1.alpha;
    let p = a1.u_pr;
    let b2 = a11 - a21;
    let b1 = (p[(0, 0)] + p[(1, 0)]).arg();
    let b3 = (p[(0, 1)] + p[(1, 1)]).arg() - b1 - b2;
    let beta = [b1, b2, b3];
    let u_ph = ThetaDelta { gamma: [T::zero(); 4], beta }.u_ph();
    let w_ref: CMat4x2<T> = u_sic2_reference::<T>().u.block(0, 2);
    let mut w2 = u_ph * w_ref * a1.u_s;
    if a1.c == 0 {
        w2 = cnot_as() * w2;
    }
    let q = pseudo_inverse(&w2)? * target.w_block();
    Ok(Algo2Result { beta, q })
}

/// Runs both algorithms and checks the general circuit against the target.
pub fn compile_sic<T: Real>(target: &DilationUnitary<T>) -> Result<(Algo1Result<T>, Algo2Result<T>, T)> {
    let a1 = algo1(target)?;
    let a2 = algo2(target, &a1)?;
    let circ = general_circuit(&a1.u_s, a1.c, a2.beta, &a2.q);
    let r = verify_circuit(&circ, &target.u, T::tol(1e-8))?;
    Ok((a1, a2, r))
}
