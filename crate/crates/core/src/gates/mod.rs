//! Two-wire circuit IR (ancilla, system), exact evaluation, single-qubit
//! decompositions and the measurement-circuit builders.

pub mod matrices;
mod synth;

pub use synth::{synthesize, synthesize_with, three_cnot_core};

use crate::error::{Error, Result};
use crate::linalg::{CMat2, CMat4};
use crate::scalar::{cis, Real};
use matrices::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wire {
    Ancilla,
    System,
}

impl Wire {
    pub fn other(self) -> Wire {
        match self {
            Wire::Ancilla => Wire::System,
            Wire::System => Wire::Ancilla,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Wire::Ancilla => "ancilla",
            Wire::System => "system",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate<T> {
    Rx {
        wire: Wire,
        theta: T,
    },
    Ry {
        wire: Wire,
        theta: T,
    },
    Rz {
        wire: Wire,
        theta: T,
    },
    /// `diag(1, e^{iβ})`
    Phase {
        wire: Wire,
        beta: T,
    },
    X {
        wire: Wire,
    },
    H {
        wire: Wire,
    },
    /// `e^{iα} Rz(a) Ry(b) Rz(c)` with `angles = [α, a, b, c]`.
    U2 {
        wire: Wire,
        angles: [T; 4],
    },
    Cnot {
        control: Wire,
        target: Wire,
    },
    /// `diag(1, 1, 1, e^{iβ})`; symmetric in its wires.
    CRz {
        beta: T,
    },
    /// `U2` on `target` controlled by `control`.
    ControlledU2 {
        control: Wire,
        target: Wire,
        angles: [T; 4],
    },
}

impl<T: Real> Gate<T> {
    pub fn u2(wire: Wire, u: &CMat2<T>) -> Self {
        Gate::U2 { wire, angles: decompose_1q(u, EulerAxes::Zyz) }
    }

    pub fn cnot(control: Wire) -> Self {
        Gate::Cnot { control, target: control.other() }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. } | Gate::CRz { .. } | Gate::ControlledU2 { .. })
    }

    pub fn wires(&self) -> Vec<Wire> {
        match *self {
            Gate::Rx { wire, .. }
            | Gate::Ry { wire, .. }
            | Gate::Rz { wire, .. }
            | Gate::Phase { wire, .. }
            | Gate::X { wire }
            | Gate::H { wire }
            | Gate::U2 { wire, .. } => vec![wire],
            Gate::Cnot { control, target } | Gate::ControlledU2 { control, target, .. } => vec![control, target],
            Gate::CRz { .. } => vec![Wire::Ancilla, Wire::System],
        }
    }

    /// The 2×2 matrix of a single-qubit gate.
    pub fn matrix2(&self) -> Option<CMat2<T>> {
        Some(match *self {
            Gate::Rx { theta, .. } => rx(theta),
            Gate::Ry { theta, .. } => ry(theta),
            Gate::Rz { theta, .. } => rz(theta),
            Gate::Phase { beta, .. } => phase(beta),
            Gate::X { .. } => pauli_x(),
            Gate::H { .. } => hadamard(),
            Gate::U2 { angles: [a, b, c, d], .. } => zyz(a, b, c, d),
            _ => return None,
        })
    }

    /// Embedding into the two-qubit space (ancilla most significant).
    pub fn matrix4(&self) -> CMat4<T> {
        if let Some(m) = self.matrix2() {
            return match self.wires()[0] {
                Wire::Ancilla => on_ancilla(&m),
                Wire::System => on_system(&m),
            };
        }
        match *self {
            Gate::Cnot { control: Wire::Ancilla, .. } => cnot_as(),
            Gate::Cnot { .. } => cnot_sa(),
            Gate::CRz { beta } => crz(beta),
            Gate::ControlledU2 { control, angles: [a, b, c, d], .. } => {
                let q = zyz(a, b, c, d);
                match control {
                    Wire::Ancilla => controlled_as(&q),
                    Wire::System => controlled_sa(&q),
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Ordered gate list; the first gate acts first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit<T> {
    pub gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new() -> Self {
        Circuit { gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate<T>) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn extend(&mut self, other: &Circuit<T>) -> &mut Self {
        self.gates.extend_from_slice(&other.gates);
        self
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn unitary(&self) -> CMat4<T> {
        unitary_of(self)
    }
}

/// Product of the gate matrices in circuit order.
pub fn unitary_of<T: Real>(c: &Circuit<T>) -> CMat4<T> {
    c.gates.iter().fold(CMat4::identity(), |acc, g| g.matrix4() * acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerAxes {
    Zxz,
    Xzx,
    Zyz,
}

/// `(α, θ1, θ2, θ3)` with `U = e^{iα} R_n(θ1) R_m(θ2) R_n(θ3)` and
/// `θ2 ∈ [0, π]`; gimbal-lock cases put everything into `θ1`.
pub fn decompose_1q<T: Real>(u: &CMat2<T>, axes: EulerAxes) -> [T; 4] {
    match axes {
        EulerAxes::Zyz => zyz_angles(u),
        EulerAxes::Zxz => {
            let s = phase(T::FRAC_PI_2());
            zyz_angles(&(s * *u * s.adjoint()))
        }
        EulerAxes::Xzx => {
            let h = hadamard();
            decompose_1q(&(h * *u * h), EulerAxes::Zxz)
        }
    }
}

fn zyz_angles<T: Real>(u: &CMat2<T>) -> [T; 4] {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let alpha = det.arg() / T::lit(2.0);
    let v = u.scale(cis(-alpha));
    let (c, s) = (v[(0, 0)].norm(), v[(1, 0)].norm());
    let theta = T::lit(2.0) * s.atan2(c);
    let eps = T::tol(1e-14);
    let (a, b) = if s < eps {
        (T::lit(2.0) * v[(1, 1)].arg(), T::zero())
    } else if c < eps {
        (T::lit(2.0) * v[(1, 0)].arg(), T::zero())
    } else {
        let (p, q) = (v[(1, 1)].arg(), v[(1, 0)].arg());
        (p + q, p - q)
    };
    [alpha, a, theta, b]
}

/// Factors for `U = e^{iα} A X B X C` with `ABC = I`.
#[derive(Clone, Copy, Debug)]
pub struct ControlledDecomposition<T> {
    pub a: CMat2<T>,
    pub b: CMat2<T>,
    pub c: CMat2<T>,
    pub alpha: T,
}

pub fn decompose_controlled_u<T: Real>(u: &CMat2<T>) -> ControlledDecomposition<T> {
    let [alpha, beta, gamma, delta] = zyz_angles(u);
    let two = T::lit(2.0);
    ControlledDecomposition {
        a: rz(beta) * ry(gamma / two),
        b: ry(-gamma / two) * rz(-(delta + beta) / two),
        c: rz((delta - beta) / two),
        alpha,
    }
}

/// Controlled-`U` as `C`, CNOT, `B`, CNOT, `A` on the target and a phase
/// gate on the control.
pub fn expand_controlled<T: Real>(control: Wire, u: &CMat2<T>) -> Circuit<T> {
    let d = decompose_controlled_u(u);
    let target = control.other();
    let mut c = Circuit::new();
    c.push(Gate::u2(target, &d.c))
        .push(Gate::cnot(control))
        .push(Gate::u2(target, &d.b))
        .push(Gate::cnot(control))
        .push(Gate::u2(target, &d.a))
        .push(Gate::Phase { wire: control, beta: d.alpha });
    c
}

fn commutes_forward<T>(g: &Gate<T>, control: Wire, target: Wire) -> bool {
    match *g {
        Gate::Rz { wire, .. } | Gate::Phase { wire, .. } => wire == control,
        Gate::Rx { wire, .. } | Gate::X { wire } => wire == target,
        _ => false,
    }
}

/// Moves `Rz`/`Phase` on a CNOT control and `Rx`/`X` on its target past the
/// CNOT, then merges rotations about the same axis that end up adjacent on
/// a wire.
pub fn commute_rz_rx_through_cnot<T: Real>(c: &Circuit<T>) -> Circuit<T> {
    let mut g = c.gates.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..g.len() {
            if let Gate::Cnot { control, target } = g[i] {
                if commutes_forward(&g[i - 1], control, target) {
                    g.swap(i - 1, i);
                    changed = true;
                }
            }
        }
    }
    Circuit { gates: merge_rotations(g) }
}

fn merge_rotations<T: Real>(mut g: Vec<Gate<T>>) -> Vec<Gate<T>> {
    let mut i = 0;
    while i < g.len() {
        let w = g[i].wires();
        let next = if w.len() == 1 { (i + 1..g.len()).find(|&j| g[j].wires().contains(&w[0])) } else { None };
        let merged = next.and_then(|j| {
            let m = match (g[i], g[j]) {
                (Gate::Rx { wire, theta: a }, Gate::Rx { theta: b, .. }) => Gate::Rx { wire, theta: a + b },
                (Gate::Ry { wire, theta: a }, Gate::Ry { theta: b, .. }) => Gate::Ry { wire, theta: a + b },
                (Gate::Rz { wire, theta: a }, Gate::Rz { theta: b, .. }) => Gate::Rz { wire, theta: a + b },
                (Gate::Phase { wire, beta: a }, Gate::Phase { beta: b, .. }) => Gate::Phase { wire, beta: a + b },
                _ => return None,
            };
            Some((j, m))
        });
        match merged {
            Some((j, m)) => {
                g[j] = m;
                g.remove(i);
            }
            None => i += 1,
        }
    }
    g
}

fn push_fiducial_prep<T: Real>(c: &mut Circuit<T>) {
    c.push(Gate::Rx { wire: Wire::Ancilla, theta: T::lit(1.0 / 3.0).sqrt().acos() })
        .push(Gate::Rz { wire: Wire::Ancilla, theta: T::lit(0.75) * T::PI() });
}

/// One-CNOT SIC measurement: `U_A` on the ancilla, `U_S` on the system,
/// CNOT from ancilla to system, Hadamard on the ancilla. The outcome
/// relabelling for `c` is applied classically, see [`practical_outcome_map`].
pub fn practical_circuit<T: Real>(u_s: &CMat2<T>, _c: u8) -> Circuit<T> {
    let mut c = Circuit::new();
    push_fiducial_prep(&mut c);
    c.push(Gate::u2(Wire::System, u_s)).push(Gate::cnot(Wire::Ancilla)).push(Gate::H { wire: Wire::Ancilla });
    c
}

/// `map[b]` is the target element reported when the practical circuit
/// returns outcome `b`.
pub fn practical_outcome_map(c: u8) -> [usize; 4] {
    if c == 0 {
        [0, 1, 3, 2]
    } else {
        [0, 1, 2, 3]
    }
}

/// Fixed-structure circuit `U_rel · U_ph · U_SIC-2 · (I ⊗ U_S) · C_Q`.
pub fn general_circuit<T: Real>(u_s: &CMat2<T>, c: u8, beta: [T; 3], q: &CMat2<T>) -> Circuit<T> {
    let mut circ = Circuit::new();
    circ.push(Gate::ControlledU2 {
        control: Wire::Ancilla,
        target: Wire::System,
        angles: decompose_1q(q, EulerAxes::Zyz),
    })
    .push(Gate::u2(Wire::System, u_s));
    push_fiducial_prep(&mut circ);
    circ.push(Gate::cnot(Wire::Ancilla))
        .push(Gate::H { wire: Wire::Ancilla })
        .push(Gate::Phase { wire: Wire::Ancilla, beta: beta[0] })
        .push(Gate::Phase { wire: Wire::System, beta: beta[1] })
        .push(Gate::CRz { beta: beta[2] });
    if c == 0 {
        circ.push(Gate::cnot(Wire::Ancilla));
    }
    circ
}

/// Checks a circuit against a target up to one global phase.
pub fn verify_circuit<T: Real>(c: &Circuit<T>, target: &CMat4<T>, tol: T) -> Result<T> {
    let r = c.unitary().phase_aligned_diff(target);
    if !(r < tol) {
        return Err(Error::SynthesisMismatch { residual: r.to_f64_lossy() });
    }
    Ok(r)
}
