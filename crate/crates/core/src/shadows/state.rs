//! Dense N-qubit density matrices. Qubit 0 is the most significant bit.

use crate::error::{Error, Result};
use crate::linalg::{CMat2, CMat4, CVec2};
use num_complex::Complex64 as C64;

pub const MAX_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    pub n: usize,
    /// Row-major `2^n × 2^n`.
    pub rho: Vec<C64>,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl DensityState {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn from_pure(n: usize, psi: &[C64]) -> Result<Self> {
        check_size(n)?;
        let d = 1usize << n;
        if psi.len() != d {
            return Err(Error::InvalidArgument(format!("state vector has length {}, expected {d}", psi.len())));
        }
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let mut rho = vec![zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                rho[i * d + j] = psi[i] * psi[j].conj() / (norm * norm);
            }
        }
        Ok(DensityState { n, rho })
    }

    /// `|ψ1⟩^{⊗n}`-style product of single-qubit kets.
    pub fn product(kets: &[CVec2<f64>]) -> Result<Self> {
        let mut psi = vec![C64::new(1.0, 0.0)];
        for k in kets {
            psi = psi.iter().flat_map(|&a| [a * k[0], a * k[1]]).collect();
        }
        Self::from_pure(kets.len(), &psi)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_size(n)?;
        let d = 1usize << n;
        let mut rho = vec![zero(); d * d];
        for i in 0..d {
            rho[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Ok(DensityState { n, rho })
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.rho[i * d + i]).sum()
    }

    /// `Re tr(ρ σ)`.
    pub fn overlap(&self, other: &DensityState) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += (self.rho[i * d + j] * other.rho[j * d + i]).re;
            }
        }
        s
    }

    pub fn purity(&self) -> f64 {
        self.overlap(self)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let d = self.dim();
        let mut r: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                r = r.max((self.rho[i * d + j] - self.rho[j * d + i].conj()).norm());
            }
        }
        r
    }

    /// True if `ρ + tol·I` admits a Cholesky factorization.
    pub fn is_positive(&self, tol: f64) -> bool {
        let d = self.dim();
        let mut l = vec![zero(); d * d];
        for j in 0..d {
            let mut diag = self.rho[j * d + j].re + tol;
            for k in 0..j {
                diag -= l[j * d + k].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let ljj = diag.sqrt();
            l[j * d + j] = C64::new(ljj, 0.0);
            for i in j + 1..d {
                let mut s = self.rho[i * d + j];
                for k in 0..j {
                    s -= l[i * d + k] * l[j * d + k].conj();
                }
                l[i * d + j] = s / ljj;
            }
        }
        true
    }

    /// Checks the trace, Hermiticity and positivity invariants.
    pub fn validate(&self) -> Result<()> {
        let t = self.trace();
        if (t - C64::new(1.0, 0.0)).norm() > 1e-9 || self.hermiticity_residual() > 1e-10 || !self.is_positive(1e-9) {
            return Err(Error::InvalidArgument(format!("invalid density matrix (trace {t})")));
        }
        Ok(())
    }

    /// `ρ ← U ρ U†` for a `2^k × 2^k` operator on `qubits` (first listed is
    /// the high bit of `U`).
    pub fn apply(&mut self, qubits: &[usize], u: &[C64]) {
        self.rho = conjugate(self.n, &self.rho, qubits, u);
    }

    pub fn apply_1q(&mut self, q: usize, u: &CMat2<f64>) {
        self.apply(&[q], &flatten2(u));
    }

    pub fn apply_2q(&mut self, hi: usize, lo: usize, u: &CMat4<f64>) {
        self.apply(&[hi, lo], &flatten4(u));
    }

    /// `ρ ← Σ K ρ K†` for single-qubit Kraus operators on qubit `q`.
    pub fn apply_kraus_1q(&mut self, q: usize, kraus: &[CMat2<f64>]) {
        let mut acc = vec![zero(); self.rho.len()];
        for k in kraus {
            let term = conjugate(self.n, &self.rho, &[q], &flatten2(k));
            acc.iter_mut().zip(term).for_each(|(a, t)| *a += t);
        }
        self.rho = acc;
    }

    /// Prepends a fresh qubit in `|0⟩` as the new qubit 0.
    pub fn attach_zero(&self) -> Result<Self> {
        check_size(self.n + 1)?;
        let (d, d2) = (self.dim(), 2 * self.dim());
        let mut rho = vec![zero(); d2 * d2];
        for i in 0..d {
            rho[i * d2..i * d2 + d].copy_from_slice(&self.rho[i * d..(i + 1) * d]);
        }
        Ok(DensityState { n: self.n + 1, rho })
    }
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::TooLarge { n, max: MAX_QUBITS });
    }
    Ok(())
}

pub(crate) fn flatten2(m: &CMat2<f64>) -> Vec<C64> {
    m.0.iter().flatten().copied().collect()
}

pub(crate) fn flatten4(m: &CMat4<f64>) -> Vec<C64> {
    m.0.iter().flatten().copied().collect()
}

/// Full-register indices touched by a `k`-qubit operator, grouped per base.
fn groups(n: usize, qubits: &[usize]) -> Vec<Vec<usize>> {
    let k = qubits.len();
    let masks: Vec<usize> = qubits.iter().map(|&q| 1 << (n - 1 - q)).collect();
    let all: usize = masks.iter().sum();
    (0..1usize << n)
        .filter(|b| b & all == 0)
        .map(|base| {
            (0..1usize << k)
                .map(|j| base + (0..k).filter(|&t| j >> (k - 1 - t) & 1 == 1).map(|t| masks[t]).sum::<usize>())
                .collect()
        })
        .collect()
}

fn conjugate(n: usize, rho: &[C64], qubits: &[usize], u: &[C64]) -> Vec<C64> {
    let d = 1usize << n;
    let m = 1usize << qubits.len();
    let gs = groups(n, qubits);
    let mut left = rho.to_vec();
    let mut buf = vec![zero(); m];
    for c in 0..d {
        for g in &gs {
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = (0..m).map(|b| u[a * m + b] * rho[g[b] * d + c]).sum();
            }
            for a in 0..m {
                left[g[a] * d + c] = buf[a];
            }
        }
    }
    let mut out = left.clone();
    for r in 0..d {
        let row = &left[r * d..(r + 1) * d];
        for g in &gs {
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = (0..m).map(|b| row[g[b]] * u[a * m + b].conj()).sum();
            }
            for a in 0..m {
                out[r * d + g[a]] = buf[a];
            }
        }
    }
    out
}

/// `(|0…0⟩ + |1…1⟩)/√2` with optional per-gate noise on the H + CNOT-chain
/// preparation circuit.
pub fn prepare_ghz(n: usize, noise: Option<&super::NoiseModel>) -> Result<DensityState> {
    check_size(n)?;
    let d = 1usize << n;
    match noise {
        None => {
            let mut psi = vec![zero(); d];
            psi[0] = C64::new(1.0, 0.0);
            psi[d - 1] = C64::new(1.0, 0.0);
            DensityState::from_pure(n, &psi)
        }
        Some(nm) => {
            let mut psi = vec![zero(); d];
            psi[0] = C64::new(1.0, 0.0);
            let mut s = DensityState::from_pure(n, &psi)?;
            s.apply_1q(0, &crate::gates::matrices::hadamard());
            nm.idle(&mut s, 0, nm.t_1q)?;
            for q in 0..n - 1 {
                s.apply_2q(q, q + 1, &crate::gates::matrices::cnot_as());
                nm.idle(&mut s, q, nm.t_2q)?;
                nm.idle(&mut s, q + 1, nm.t_2q)?;
            }
            Ok(s)
        }
    }
}

/// `(u|0⟩)^{⊗n}`, one single-qubit gate per qubit, each followed by
/// relaxation when `noise` is given.
pub fn prepare_product(u: &CMat2<f64>, n: usize, noise: Option<&super::NoiseModel>) -> Result<DensityState> {
    check_size(n)?;
    let mut psi = vec![zero(); 1 << n];
    psi[0] = C64::new(1.0, 0.0);
    let mut s = DensityState::from_pure(n, &psi)?;
    for q in 0..n {
        s.apply_1q(q, u);
        if let Some(nm) = noise {
            nm.idle(&mut s, q, nm.t_1q)?;
        }
    }
    Ok(s)
}

/// `ρ ← p·I/2^N + (1−p)·ρ`.
pub fn depolarize(state: &DensityState, p: f64) -> DensityState {
    let d = state.dim();
    let mut out = state.clone();
    for (idx, v) in out.rho.iter_mut().enumerate() {
        *v *= 1.0 - p;
        if idx / d == idx % d {
            *v += C64::new(p / d as f64, 0.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::matrices::{cnot_as, hadamard};

    #[test]
    fn ghz_one_is_plus() {
        let s = prepare_ghz(1, None).unwrap();
        for v in &s.rho {
            assert!((v.re - 0.5).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
        assert!(matches!(prepare_ghz(13, None), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn circuit_prep_matches_closed_form() {
        let mut psi = vec![zero(); 8];
        psi[0] = C64::new(1.0, 0.0);
        let mut s = DensityState::from_pure(3, &psi).unwrap();
        s.apply_1q(0, &hadamard());
        s.apply_2q(0, 1, &cnot_as());
        s.apply_2q(1, 2, &cnot_as());
        let g = prepare_ghz(3, None).unwrap();
        assert!((s.overlap(&g) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depolarize_limits() {
        let g = prepare_ghz(6, None).unwrap();
        assert!((g.overlap(&g) - 1.0).abs() < 1e-12);
        assert_eq!(depolarize(&g, 0.0), g);
        let mixed = depolarize(&g, 1.0);
        assert!((mixed.overlap(&DensityState::maximally_mixed(6).unwrap()) - 1.0 / 64.0).abs() < 1e-15);
        assert!((depolarize(&g, 0.2).overlap(&g) - 0.803125).abs() < 1e-12);
    }

    #[test]
    fn positivity_check() {
        let g = prepare_ghz(2, None).unwrap();
        assert!(g.validate().is_ok());
        let mut bad = g.clone();
        bad.rho[0] = C64::new(-0.5, 0.0);
        bad.rho[15] = C64::new(1.5, 0.0);
        assert!(!bad.is_positive(1e-9));
    }
}
