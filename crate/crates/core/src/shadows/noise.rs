//! T1/T2 thermal relaxation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::DensityState;
use crate::error::{Error, Result};
use crate::gates::matrices::{on_ancilla, on_system};
use crate::gates::{Circuit, Wire};
use crate::linalg::{CMat2, CMat4, CMatrix};
use num_complex::Complex64 as C64;

/// Operator-sum form of amplitude damping toward `|0⟩` combined with pure
/// dephasing, so that populations relax as `e^{−t/T1}` and coherences as
/// `e^{−t/T2}`.
pub fn thermal_relaxation_channel(t: f64, t1: f64, t2: f64) -> Result<Vec<CMat2<f64>>> {
    if !(t > 0.0 && t2 > 0.0 && t2 <= t1) || !t1.is_finite() {
        return Err(Error::InvalidTimes { t, t1, t2 });
    }
    let gamma = 1.0 - (-t / t1).exp();
    let lambda = (-t * (1.0 / t2 - 0.5 / t1)).exp();
    let c = |x: f64| C64::new(x, 0.0);
    let damp = [CMat2::diag([c(1.0), c((1.0 - gamma).sqrt())]), CMatrix([[c(0.0), c(gamma.sqrt())], [c(0.0), c(0.0)]])];
    let deph = [
        CMat2::identity().scale_re(((1.0 + lambda) / 2.0).sqrt()),
        crate::gates::matrices::pauli_z().scale_re(((1.0 - lambda) / 2.0).sqrt()),
    ];
    Ok(deph.iter().flat_map(|d| damp.iter().map(move |k| *d * *k)).collect())
}

/// `‖Σ K†K − I‖_max`.
pub fn kraus_completeness(kraus: &[CMat2<f64>]) -> f64 {
    kraus.iter().fold(CMat2::zeros(), |acc, k| acc + k.adjoint() * *k).max_abs_diff(&CMat2::identity())
}

/// Parameters from which per-qubit relaxation times are drawn. Times are in
/// seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseConfig {
    pub t1_mean: f64,
    pub t2_mean: f64,
    /// Standard deviation as a fraction of the mean.
    pub rel_sigma: f64,
    pub t_1q: f64,
    pub t_2q: f64,
    pub t_meas: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            t1_mean: 50e-3,
            t2_mean: 50e-3,
            rel_sigma: 0.1,
            t_1q: 100e-9,
            t_2q: 300e-9,
            t_meas: 1000e-9,
            seed: 0,
        }
    }
}

/// Sampled relaxation times for `n` system qubits plus the shared ancilla.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    pub ancilla_t1: f64,
    pub ancilla_t2: f64,
    pub t_1q: f64,
    pub t_2q: f64,
    pub t_meas: f64,
}

impl NoiseModel {
    pub fn sample(cfg: &NoiseConfig, n: usize) -> Result<Self> {
        if !(cfg.t_1q > 0.0 && cfg.t_2q > 0.0 && cfg.t_meas > 0.0 && cfg.t1_mean > 0.0 && cfg.t2_mean > 0.0) {
            return Err(Error::InvalidArgument("noise durations and means must be positive".into()));
        }
        let bad = |_| Error::InvalidArgument("invalid noise spread".into());
        let d1 = Normal::new(cfg.t1_mean, cfg.rel_sigma * cfg.t1_mean).map_err(bad)?;
        let d2 = Normal::new(cfg.t2_mean, cfg.rel_sigma * cfg.t2_mean).map_err(bad)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut draw = || {
            for _ in 0..10_000 {
                let (a, b) = (d1.sample(&mut rng), d2.sample(&mut rng));
                if a > 0.0 && b > 0.0 && b <= a {
                    return Ok((a, b));
                }
            }
            Err(Error::InvalidArgument("could not sample T2 <= T1".into()))
        };
        let mut t1 = Vec::with_capacity(n);
        let mut t2 = Vec::with_capacity(n);
        for _ in 0..n {
            let (a, b) = draw()?;
            t1.push(a);
            t2.push(b);
        }
        let (ancilla_t1, ancilla_t2) = draw()?;
        Ok(NoiseModel { t1, t2, ancilla_t1, ancilla_t2, t_1q: cfg.t_1q, t_2q: cfg.t_2q, t_meas: cfg.t_meas })
    }

    /// Relaxation of system qubit `q` of `state` for time `t`.
    pub fn idle(&self, state: &mut DensityState, q: usize, t: f64) -> Result<()> {
        let k = thermal_relaxation_channel(t, self.t1[q], self.t2[q])?;
        state.apply_kraus_1q(q, &k);
        Ok(())
    }

    fn channel(&self, wire: Wire, qubit: usize, t: f64) -> Result<Vec<CMat4<f64>>> {
        Ok(match wire {
            Wire::Ancilla => {
                thermal_relaxation_channel(t, self.ancilla_t1, self.ancilla_t2)?.iter().map(on_ancilla).collect()
            }
            Wire::System => {
                thermal_relaxation_channel(t, self.t1[qubit], self.t2[qubit])?.iter().map(on_system).collect()
            }
        })
    }
}

/// One step of a (possibly noisy) measurement circuit on the
/// ancilla–system pair.
#[derive(Clone, Debug)]
pub enum PairOp {
    Unitary(Box<CMat4<f64>>),
    Kraus(Vec<CMat4<f64>>),
}

/// Gate sequence of `circ` for system qubit `qubit`, with relaxation on the
/// involved wires after every gate and on both wires for the readout.
pub fn pair_ops(circ: &Circuit<f64>, noise: Option<&NoiseModel>, qubit: usize) -> Result<Vec<PairOp>> {
    let mut ops = Vec::new();
    for g in &circ.gates {
        ops.push(PairOp::Unitary(Box::new(g.matrix4())));
        if let Some(nm) = noise {
            let t = if g.is_two_qubit() { nm.t_2q } else { nm.t_1q };
            for w in g.wires() {
                ops.push(PairOp::Kraus(nm.channel(w, qubit, t)?));
            }
        }
    }
    if let Some(nm) = noise {
        for w in [Wire::Ancilla, Wire::System] {
            ops.push(PairOp::Kraus(nm.channel(w, qubit, nm.t_meas)?));
        }
    }
    Ok(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(k: &[CMat2<f64>], rho: &CMat2<f64>) -> CMat2<f64> {
        k.iter().fold(CMat2::zeros(), |acc, m| acc + *m * *rho * m.adjoint())
    }

    #[test]
    fn small_time_is_identity() {
        let k = thermal_relaxation_channel(1e-15, 50e-6, 40e-6).unwrap();
        let rho = CMatrix([[C64::new(0.3, 0.0), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), C64::new(0.7, 0.0)]]);
        assert!(apply(&k, &rho).max_abs_diff(&rho) < 1e-9);
    }

    #[test]
    fn t1_population_decay() {
        let k = thermal_relaxation_channel(1.0, 1.0, 1.0).unwrap();
        let one = CMat2::diag([C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let out = apply(&k, &one);
        assert!((out[(1, 1)].re - (-1.0f64).exp()).abs() < 1e-14);
        let plus = CMat2::from_fn(|_, _| C64::new(0.5, 0.0));
        let out = apply(&k, &plus);
        assert!((out[(0, 1)].re - 0.5 * (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_times() {
        assert!(matches!(thermal_relaxation_channel(0.0, 1.0, 1.0), Err(Error::InvalidTimes { .. })));
        assert!(matches!(thermal_relaxation_channel(1.0, 1.0, 2.0), Err(Error::InvalidTimes { .. })));
    }

    #[test]
    fn sampled_times_ordered() {
        let m = NoiseModel::sample(&NoiseConfig::default(), 12).unwrap();
        assert!(m.t1.iter().zip(&m.t2).all(|(a, b)| b <= a && *b > 0.0));
        assert!(m.ancilla_t2 <= m.ancilla_t1);
        assert_eq!(m, NoiseModel::sample(&NoiseConfig::default(), 12).unwrap());
    }

    proptest! {
        #[test]
        fn channel_is_cptp(t in 1e-9f64..10.0, t1 in 1e-6f64..5.0, r in 0.01f64..1.0,
                           th in 0.0f64..3.2, ph in -3.2f64..3.2, p in 0.0f64..1.0) {
            let k = thermal_relaxation_channel(t, t1, r * t1).unwrap();
            prop_assert!(kraus_completeness(&k) < 1e-12);
            let ket = crate::linalg::CVector([C64::new((th / 2.0).cos(), 0.0), C64::from_polar((th / 2.0).sin(), ph)]);
            let rho = ket.outer().scale_re(1.0 - p) + CMat2::identity().scale_re(p / 2.0);
            let out = apply(&k, &rho);
            let tr = out.trace().re;
            let det = (out.det()).re;
            let min_eig = tr / 2.0 - ((tr * tr / 4.0 - det).max(0.0)).sqrt();
            prop_assert!(min_eig >= -1e-9);
            prop_assert!((tr - 1.0).abs() < 1e-12);
        }
    }
}
