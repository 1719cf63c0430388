//! Inverse-channel snapshots and fidelity estimators.

use super::measure::{joint_expectations, ShadowRecord};
use super::DensityState;
use crate::dilation::{apply_theta, build_dilation, extract_povm, u_sic1_reference};
use crate::error::{Error, Result};
use crate::gates::matrices::{pauli_x, pauli_y, pauli_z};
use crate::gates::{practical_circuit, synthesize, Circuit};
use crate::linalg::{CMat2, CMat4, CVec2, CVector};
use crate::optimizer::{algo1, find_2cnot_theta, sic_1cnot_theta};
use crate::povm::{construct_sic, QubitPovm4, SicParams};
use num_complex::Complex64 as C64;

pub type SnapshotTable = [CMat2<f64>; 4];

/// `M⁻¹(Π_b)` for each outcome. SICs use the closed form
/// `3Π_b/tr(Π_b) − I`; other IC POVMs go through [`snapshot_table_general`].
pub fn snapshot_table(povm: &QubitPovm4<f64>) -> Result<SnapshotTable> {
    if !povm.is_ic() {
        return Err(Error::NotIc);
    }
    if povm.is_sic() {
        return Ok(povm.elements().map(|p| p.scale_re(3.0 / p.trace().re) - CMat2::identity()));
    }
    snapshot_table_general(povm)
}

/// Inverts the frame superoperator `Σ_b |Π_b⟩⟩⟨⟨Π_b|` in the Pauli basis.
pub fn snapshot_table_general(povm: &QubitPovm4<f64>) -> Result<SnapshotTable> {
    if !povm.is_ic() {
        return Err(Error::NotIc);
    }
    let f = povm.frame();
    let s = CMat4::from_fn(|a, b| C64::new((0..4).map(|i| f[i][a] * f[i][b]).sum(), 0.0));
    let s_inv = s.inverse();
    let paulis = [CMat2::identity(), pauli_x(), pauli_y(), pauli_z()];
    Ok(std::array::from_fn(|b| {
        let coef = s_inv.mul_vec(&CVector(f[b].map(|x| C64::new(x, 0.0))));
        (0..4).fold(CMat2::zeros(), |acc, k| acc + paulis[k].scale_re(coef[k].re * std::f64::consts::FRAC_1_SQRT_2))
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityEstimate {
    pub estimates: Vec<f64>,
    pub mean: f64,
    /// Unbiased sample variance of the single-shot estimates.
    pub variance: f64,
    pub std_error: f64,
}

impl FidelityEstimate {
    pub fn from_estimates(estimates: Vec<f64>) -> Self {
        let m = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / m;
        let variance = if estimates.len() > 1 {
            estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (m - 1.0)
        } else {
            0.0
        };
        FidelityEstimate { std_error: (variance / m).sqrt(), estimates, mean, variance }
    }

    /// Mean of `(batch mean − x)²` over `batches` equal consecutive batches.
    pub fn mse_vs(&self, x: f64, batches: usize) -> f64 {
        let size = self.estimates.len() / batches.max(1);
        if size == 0 {
            return (self.mean - x).powi(2);
        }
        let chunks: Vec<f64> = self.estimates.chunks_exact(size).map(|c| c.iter().sum::<f64>() / size as f64).collect();
        chunks.iter().map(|m| (m - x) * (m - x)).sum::<f64>() / chunks.len() as f64
    }
}

/// Single-shot values `tr(Ψ ⊗_i table[b_i])` for every outcome string.
pub fn estimate_table(target: &DensityState, table: &SnapshotTable) -> Vec<f64> {
    joint_expectations(target, &vec![*table; target.n])
}

pub fn estimate_fidelity(target: &DensityState, records: &[ShadowRecord], table: &SnapshotTable) -> FidelityEstimate {
    let values = estimate_table(target, table);
    FidelityEstimate::from_estimates(records.iter().map(|r| values[r.index as usize]).collect())
}

/// A SIC with one element orthogonal to `psi1`.
pub fn optimal_sic_for_state(psi1: &CVec2<f64>) -> QubitPovm4<f64> {
    let p = CVector([-psi1[1].conj(), psi1[0].conj()]);
    let params =
        SicParams { theta1: 2.0 * p[1].norm().atan2(p[0].norm()), phi1: p[1].arg() - p[0].arg(), delta: 0.0, c: 0 };
    construct_sic(&params)
}

/// Pair circuit realizing `povm` with the requested number of CNOTs.
/// One CNOT needs a SIC; the returned circuit may use fewer CNOTs when the
/// plain dilation is already cheaper.
pub fn measurement_circuit(povm: &QubitPovm4<f64>, cnots: u8) -> Result<Circuit<f64>> {
    let base = build_dilation(povm)?;
    match cnots {
        1 => {
            let a1 = algo1(&base)?;
            Ok(practical_circuit(&a1.u_s, a1.c))
        }
        2 => synthesize(&find_2cnot_theta(&base)?.1.u),
        3 => synthesize(&base.u),
        _ => Err(Error::InvalidArgument(format!("unsupported CNOT count {cnots}"))),
    }
}

/// Ideal POVM read out by `circ`, in outcome order.
pub fn circuit_povm(circ: &Circuit<f64>) -> Result<QubitPovm4<f64>> {
    extract_povm(&circ.unitary())
}

/// Set 1 readout with one, two or three CNOTs, all sharing the outcome
/// order of the reference dilation.
pub fn set1_circuit(cnots: u8) -> Result<Circuit<f64>> {
    let base = u_sic1_reference::<f64>(0);
    let u = match cnots {
        1 => apply_theta(&base, &sic_1cnot_theta(0)),
        2 => find_2cnot_theta(&base)?.1,
        3 => base,
        _ => return Err(Error::InvalidArgument(format!("unsupported CNOT count {cnots}"))),
    };
    synthesize(&u.u)
}
