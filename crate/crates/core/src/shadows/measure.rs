//! Per-qubit ancilla-assisted POVM readout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::noise::{pair_ops, NoiseModel, PairOp};
use super::state::{flatten4, DensityState};
use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::linalg::{CMat2, CMat4};
use num_complex::Complex64 as C64;

/// Outcomes `b_0 … b_{N−1}` of one shot, packed base 4 with `b_0` most
/// significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShadowRecord {
    pub index: u32,
    pub n: u8,
}

impl ShadowRecord {
    pub fn from_outcomes(b: &[u8]) -> Self {
        let index = b.iter().fold(0u32, |acc, &x| acc * 4 + u32::from(x & 3));
        ShadowRecord { index, n: b.len() as u8 }
    }

    pub fn outcome(&self, i: usize) -> u8 {
        (self.index >> (2 * (self.n as usize - 1 - i)) & 3) as u8
    }

    pub fn outcomes(&self) -> Vec<u8> {
        (0..self.n as usize).map(|i| self.outcome(i)).collect()
    }
}

/// POVM realized on one system qubit by the noisy pair circuit:
/// `Π'_b = ⟨0|_A E†(|b⟩⟨b|) |0⟩_A`, with `b = 2·b_A + b_S`.
pub fn effective_povm(ops: &[PairOp]) -> [CMat2<f64>; 4] {
    std::array::from_fn(|b| {
        let mut x = CMat4::<f64>::zeros();
        x[(b, b)] = C64::new(1.0, 0.0);
        for op in ops.iter().rev() {
            x = match op {
                PairOp::Unitary(u) => u.adjoint() * x * **u,
                PairOp::Kraus(ks) => ks.iter().fold(CMat4::zeros(), |acc, k| acc + k.adjoint() * x * *k),
            };
        }
        x.block(0, 0)
    })
}

/// `Re tr(ρ · ⊗_i ops[i][b_i])` for every outcome string, in
/// [`ShadowRecord::index`] order.
pub fn joint_expectations(state: &DensityState, ops: &[[CMat2<f64>; 4]]) -> Vec<f64> {
    assert_eq!(ops.len(), state.n, "one operator set per qubit");
    let d = state.dim();
    let first: Vec<Vec<f64>> = (0..4)
        .into_par_iter()
        .map(|b| {
            let mut out = Vec::with_capacity(1 << (2 * (state.n - 1)));
            let m = partial_trace_first(&state.rho, d, &ops[0][b]);
            descend(&m, d / 2, &ops[1..], &mut out);
            out
        })
        .collect();
    first.concat()
}

fn descend(m: &[C64], d: usize, ops: &[[CMat2<f64>; 4]], out: &mut Vec<f64>) {
    if ops.is_empty() {
        out.push(m[0].re);
        return;
    }
    for o in &ops[0] {
        let next = partial_trace_first(m, d, o);
        descend(&next, d / 2, &ops[1..], out);
    }
}

/// `tr_0[(O ⊗ I) M]` for a `d × d` matrix `M`.
fn partial_trace_first(m: &[C64], d: usize, o: &CMat2<f64>) -> Vec<C64> {
    let h = d / 2;
    let mut x = vec![C64::new(0.0, 0.0); h * h];
    for s in 0..2 {
        for t in 0..2 {
            let w = o[(t, s)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..h {
                let row = &m[(s * h + i) * d + t * h..(s * h + i) * d + t * h + h];
                for (xj, &mj) in x[i * h..(i + 1) * h].iter_mut().zip(row) {
                    *xj += w * mj;
                }
            }
        }
    }
    x
}

/// Cumulative outcome distribution of a product readout.
#[derive(Clone, Debug)]
pub struct OutcomeSampler {
    n: u8,
    cdf: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(state: &DensityState, povms: &[[CMat2<f64>; 4]]) -> Result<Self> {
        let p = joint_expectations(state, povms);
        let mut acc = 0.0;
        let cdf: Vec<f64> = p
            .iter()
            .map(|&x| {
                acc += x.max(0.0);
                acc
            })
            .collect();
        if acc < 1e-15 {
            return Err(Error::ZeroProbabilityBranch { total: acc });
        }
        Ok(OutcomeSampler { n: state.n as u8, cdf })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total();
        let mut prev = 0.0;
        self.cdf
            .iter()
            .map(|&c| {
                let p = (c - prev) / total;
                prev = c;
                p
            })
            .collect()
    }

    fn total(&self) -> f64 {
        *self.cdf.last().expect("nonempty")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ShadowRecord {
        let u = rng.random::<f64>() * self.total();
        let i = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        ShadowRecord { index: i as u32, n: self.n }
    }

    /// Shots `offset .. offset + shots`; shot `k` draws from stream `k` of the
    /// generator seeded with `seed`, so the result does not depend on how
    /// the work is split across threads.
    pub fn sample_shots(&self, seed: u64, offset: u64, shots: usize) -> Vec<ShadowRecord> {
        (0..shots as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = shot_rng(seed, offset + k);
                self.sample(&mut rng)
            })
            .collect()
    }
}

pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Per-qubit effective POVMs of `circ` under `noise`.
pub fn effective_povms(circ: &Circuit<f64>, noise: Option<&NoiseModel>, n: usize) -> Result<Vec<[CMat2<f64>; 4]>> {
    (0..n).map(|q| Ok(effective_povm(&pair_ops(circ, noise, q)?))).collect()
}

/// Samples `shots` records of `state` measured qubit by qubit with `circ`.
pub fn run_shadow(
    state: &DensityState,
    circ: &Circuit<f64>,
    noise: Option<&NoiseModel>,
    shots: usize,
    seed: u64,
) -> Result<Vec<ShadowRecord>> {
    let sampler = OutcomeSampler::new(state, &effective_povms(circ, noise, state.n)?)?;
    Ok(sampler.sample_shots(seed, 0, shots))
}

fn evolve_pair(pair: &mut DensityState, ops: &[PairOp]) {
    for op in ops {
        match op {
            PairOp::Unitary(u) => pair.apply(&[0, 1], &flatten4(u)),
            PairOp::Kraus(ks) => {
                let mut acc = vec![C64::new(0.0, 0.0); pair.rho.len()];
                for k in ks {
                    let mut t = pair.clone();
                    t.apply(&[0, 1], &flatten4(k));
                    acc.iter_mut().zip(&t.rho).for_each(|(a, b)| *a += b);
                }
                pair.rho = acc;
            }
        }
    }
}

/// `p(b_A, b_S)` of the two leading qubits.
fn pair_probabilities(pair: &DensityState) -> [f64; 4] {
    let d = pair.dim();
    let h = d / 4;
    std::array::from_fn(|b| (0..h).map(|i| pair.rho[(b * h + i) * d + b * h + i].re).sum())
}

/// Outcome distribution of the first system qubit, from the explicit
/// ancilla simulation.
pub fn first_qubit_distribution(
    state: &DensityState,
    circ: &Circuit<f64>,
    noise: Option<&NoiseModel>,
) -> Result<[f64; 4]> {
    let mut pair = state.attach_zero()?;
    evolve_pair(&mut pair, &pair_ops(circ, noise, 0)?);
    Ok(pair_probabilities(&pair))
}

/// One shot by explicit simulation: attach an ancilla, run the pair
/// circuit, measure both qubits, keep the post-measurement remainder, and
/// move on to the next qubit.
pub fn measure_povm_sequential<R: Rng + ?Sized>(
    state: &DensityState,
    circ: &Circuit<f64>,
    noise: Option<&NoiseModel>,
    rng: &mut R,
) -> Result<ShadowRecord> {
    let n = state.n;
    let mut active = state.clone();
    let mut outcomes = Vec::with_capacity(n);
    for q in 0..n {
        let mut pair = active.attach_zero()?;
        evolve_pair(&mut pair, &pair_ops(circ, noise, q)?);
        let p = pair_probabilities(&pair);
        let total: f64 = p.iter().map(|x| x.max(0.0)).sum();
        if total < 1e-15 {
            return Err(Error::ZeroProbabilityBranch { total });
        }
        let u = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut b = 3;
        for (i, &pi) in p.iter().enumerate() {
            acc += pi.max(0.0);
            if u < acc {
                b = i;
                break;
            }
        }
        outcomes.push(b as u8);
        if q + 1 < n {
            let d = pair.dim();
            let h = d / 4;
            let mut rho = vec![C64::new(0.0, 0.0); h * h];
            for i in 0..h {
                for j in 0..h {
                    rho[i * h + j] = pair.rho[(b * h + i) * d + b * h + j] / p[b];
                }
            }
            active = DensityState { n: n - q - 1, rho };
        }
    }
    Ok(ShadowRecord::from_outcomes(&outcomes))
}
