//! Minimal-CNOT templates for arbitrary two-qubit unitaries.

use super::{verify_circuit, Circuit, Gate, Wire};
use crate::equivalence::{classify, gamma_of, kak, Kak, Tolerances};
use crate::error::Result;
use crate::gates::matrices::cnot_as;
use crate::linalg::{factor_local, CMat4};
use crate::scalar::Real;

fn push_local<T: Real>(c: &mut Circuit<T>, l: &CMat4<T>) {
    let (a, b, _) = factor_local(l);
    c.push(Gate::u2(Wire::Ancilla, &a)).push(Gate::u2(Wire::System, &b));
}

/// Three-CNOT circuit for `exp(i(a XX + b YY + c ZZ))`, up to global phase.
pub fn three_cnot_core<T: Real>(k: [T; 3]) -> Circuit<T> {
    let [a, b, c] = k;
    let (two, h) = (T::lit(2.0), T::FRAC_PI_2());
    let mut circ = Circuit::new();
    circ.push(Gate::Rz { wire: Wire::System, theta: h })
        .push(Gate::cnot(Wire::System))
        .push(Gate::Rz { wire: Wire::Ancilla, theta: h - two * c })
        .push(Gate::Ry { wire: Wire::System, theta: h - two * a })
        .push(Gate::cnot(Wire::Ancilla))
        .push(Gate::Ry { wire: Wire::System, theta: two * b - h })
        .push(Gate::cnot(Wire::System))
        .push(Gate::Rz { wire: Wire::Ancilla, theta: -h });
    circ
}

pub fn synthesize<T: Real>(u: &CMat4<T>) -> Result<Circuit<T>> {
    synthesize_with(u, &Tolerances::default())
}

/// Circuit with `cnot_count(u)` CNOTs reproducing `u` up to global phase.
pub fn synthesize_with<T: Real>(u: &CMat4<T>, tol: &Tolerances) -> Result<Circuit<T>> {
    let mut d = kak(u)?;
    d.canonicalize(tol);
    let count = classify(&gamma_of(u)?, d.k, tol);
    let mut c = Circuit::new();
    match count {
        0 => push_local(&mut c, &(d.k1 * d.k2)),
        1 => {
            let mut r: Kak<T> = kak(&cnot_as())?;
            r.canonicalize(tol);
            // exp(iπ/4 XX) = K1c† · CNOT · K2c† up to phase
            push_local(&mut c, &(r.k2.adjoint() * d.k2));
            c.push(Gate::cnot(Wire::Ancilla));
            push_local(&mut c, &(d.k1 * r.k1.adjoint()));
        }
        2 => {
            // rotate the ZZ slot into play: exp(i(k1 XX + k2 ZZ))
            d.swap_k2_k3();
            push_local(&mut c, &d.k2);
            c.push(Gate::cnot(Wire::Ancilla))
                .push(Gate::Rx { wire: Wire::Ancilla, theta: T::lit(-2.0) * d.k[0] })
                .push(Gate::Rz { wire: Wire::System, theta: T::lit(-2.0) * d.k[2] })
                .push(Gate::cnot(Wire::Ancilla));
            push_local(&mut c, &d.k1);
        }
        _ => {
            push_local(&mut c, &d.k2);
            c.extend(&three_cnot_core(d.k));
            push_local(&mut c, &d.k1);
        }
    }
    verify_circuit(&c, u, T::tol(1e-8))?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::u_sic1_reference;
    use crate::equivalence::{cnot_count, nonlocal_gate};
    use crate::gates::matrices::*;
    use crate::linalg::kron;

    #[test]
    fn three_cnot_core_matches_nonlocal_gate() {
        for k in [[0.3f64, -0.2, 0.11], [0.7, 0.7, 0.7], [0.0, 0.0, 0.0], [-1.2, 0.4, 2.0]] {
            let c = three_cnot_core(k);
            assert_eq!(c.cnot_count(), 3);
            assert!(c.unitary().phase_aligned_diff(&nonlocal_gate(k)) < 1e-12, "{k:?}");
        }
    }

    #[test]
    fn templates_per_count() {
        let local = kron(&ry(0.3f64), &rz(1.2)) * kron(&rx(-0.4), &ry(2.0));
        let cases: Vec<(CMat4<f64>, usize)> = vec![
            (local, 0),
            (cnot_as(), 1),
            (local * cnot_sa() * kron(&hadamard(), &rx(0.2)), 1),
            (local * nonlocal_gate([0.5, 0.2, 0.0]) * kron(&rz(0.3), &ry(0.9)), 2),
            (u_sic1_reference::<f64>(0).u, 3),
            (swap(), 3),
        ];
        for (u, n) in cases {
            let c = synthesize(&u).unwrap();
            assert_eq!(c.cnot_count(), n);
            assert_eq!(cnot_count(&u).unwrap() as usize, n);
            assert!(c.unitary().phase_aligned_diff(&u) < 1e-8);
        }
    }
}
