//! JSON forms of POVMs, unitaries and circuits (`f64` only).
//!
//! Complex numbers are `[re, im]` pairs and every float is written with 17
//! significant digits.

use serde_json::{json, Map, Number, Value};

use crate::dilation::ThetaDelta;
use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate, Wire};
use crate::linalg::{CMat2, CMat4, CMatrix, CVector};
use crate::povm::QubitPovm4;
use num_complex::Complex64 as C64;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str::<Number>(&format!("{x:.16e}")).map(Value::Number).unwrap_or(Value::Null)
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn matrix<const R: usize, const C: usize>(m: &CMatrix<f64, R, C>) -> Value {
    Value::Array(m.0.iter().map(|row| Value::Array(row.iter().map(|&z| complex(z)).collect())).collect())
}

fn as_f64(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(format!("expected a number, got {v}")))
}

fn as_array<'a>(v: &'a Value, len: usize, what: &str) -> Result<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        _ => Err(parse_err(format!("expected {what} of length {len}"))),
    }
}

pub fn parse_complex(v: &Value) -> Result<C64> {
    let a = as_array(v, 2, "[re, im] pair")?;
    Ok(C64::new(as_f64(&a[0])?, as_f64(&a[1])?))
}

pub fn parse_matrix<const R: usize, const C: usize>(v: &Value) -> Result<CMatrix<f64, R, C>> {
    let rows = as_array(v, R, "matrix")?;
    let mut m = CMatrix::zeros();
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in as_array(row, C, "matrix row")?.iter().enumerate() {
            m[(i, j)] = parse_complex(z)?;
        }
    }
    Ok(m)
}

fn parse_reals<const N: usize>(v: &Value, what: &str) -> Result<[f64; N]> {
    let a = as_array(v, N, what)?;
    let mut out = [0.0; N];
    for (o, x) in out.iter_mut().zip(a) {
        *o = as_f64(x)?;
    }
    Ok(out)
}

pub fn povm_to_json(p: &QubitPovm4<f64>) -> Value {
    json!({ "kets": p.kets.iter().map(|k| json!([complex(k[0]), complex(k[1])])).collect::<Vec<_>>() })
}

pub fn povm_from_json(v: &Value) -> Result<QubitPovm4<f64>> {
    let kets = as_array(v.get("kets").ok_or_else(|| parse_err("missing \"kets\""))?, 4, "kets")?;
    let mut out = [CVector::zeros(); 4];
    for (o, k) in out.iter_mut().zip(kets) {
        let k = as_array(k, 2, "ket")?;
        *o = CVector([parse_complex(&k[0])?, parse_complex(&k[1])?]);
    }
    Ok(QubitPovm4::new(out))
}

pub fn theta_to_json(t: &ThetaDelta<f64>) -> Value {
    json!({ "gamma": reals(&t.gamma), "beta": reals(&t.beta) })
}

pub fn theta_from_json(v: &Value) -> Result<ThetaDelta<f64>> {
    let gamma = parse_reals(v.get("gamma").ok_or_else(|| parse_err("missing \"gamma\""))?, "gamma")?;
    let beta = parse_reals(v.get("beta").ok_or_else(|| parse_err("missing \"beta\""))?, "beta")?;
    Ok(ThetaDelta { gamma, beta })
}

/// `{"matrix": …, "theta"?: …}`.
pub fn unitary_to_json(u: &CMat4<f64>, theta: Option<&ThetaDelta<f64>>) -> Value {
    let mut m = Map::new();
    m.insert("matrix".into(), matrix(u));
    if let Some(t) = theta {
        m.insert("theta".into(), theta_to_json(t));
    }
    Value::Object(m)
}

/// Accepts either the object form or a bare nested array.
pub fn unitary_from_json(v: &Value) -> Result<(CMat4<f64>, Option<ThetaDelta<f64>>)> {
    match v {
        Value::Array(_) => Ok((parse_matrix(v)?, None)),
        Value::Object(o) => {
            let m = parse_matrix(o.get("matrix").ok_or_else(|| parse_err("missing \"matrix\""))?)?;
            let t = o.get("theta").map(theta_from_json).transpose()?;
            Ok((m, t))
        }
        _ => Err(parse_err("expected a unitary object or array")),
    }
}

fn wire_from(v: &Value) -> Result<Wire> {
    match v.as_str() {
        Some("ancilla") => Ok(Wire::Ancilla),
        Some("system") => Ok(Wire::System),
        _ => Err(parse_err(format!("unknown wire {v}"))),
    }
}

fn gate_to_json(g: &Gate<f64>) -> Value {
    let w = |ws: &[Wire]| Value::Array(ws.iter().map(|w| Value::from(w.name())).collect());
    let (kind, wires, angles): (&str, Value, Vec<f64>) = match *g {
        Gate::Rx { wire, theta } => ("rx", w(&[wire]), vec![theta]),
        Gate::Ry { wire, theta } => ("ry", w(&[wire]), vec![theta]),
        Gate::Rz { wire, theta } => ("rz", w(&[wire]), vec![theta]),
        Gate::Phase { wire, beta } => ("phase", w(&[wire]), vec![beta]),
        Gate::X { wire } => ("x", w(&[wire]), vec![]),
        Gate::H { wire } => ("h", w(&[wire]), vec![]),
        Gate::U2 { wire, angles } => ("u2", w(&[wire]), angles.to_vec()),
        Gate::Cnot { control, target } => ("cnot", w(&[control, target]), vec![]),
        Gate::CRz { beta } => ("crz", w(&[Wire::Ancilla, Wire::System]), vec![beta]),
        Gate::ControlledU2 { control, target, angles } => ("cu2", w(&[control, target]), angles.to_vec()),
    };
    json!({ "kind": kind, "wires": wires, "angles": reals(&angles) })
}

fn gate_from_json(v: &Value) -> Result<Gate<f64>> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("gate without \"kind\""))?;
    let wires: Vec<Wire> = match v.get("wires") {
        Some(Value::Array(a)) => a.iter().map(wire_from).collect::<Result<_>>()?,
        None => vec![],
        _ => return Err(parse_err("\"wires\" must be an array")),
    };
    let angles: Vec<f64> = match v.get("angles") {
        Some(Value::Array(a)) => a.iter().map(as_f64).collect::<Result<_>>()?,
        None => vec![],
        _ => return Err(parse_err("\"angles\" must be an array")),
    };
    let need = |nw: usize, na: usize| -> Result<()> {
        if wires.len() != nw || angles.len() != na {
            return Err(parse_err(format!("gate {kind} needs {nw} wire(s) and {na} angle(s)")));
        }
        if nw == 2 && wires[0] == wires[1] {
            return Err(parse_err(format!("gate {kind} needs two distinct wires")));
        }
        Ok(())
    };
    let four = |a: &[f64]| [a[0], a[1], a[2], a[3]];
    Ok(match kind {
        "rx" | "ry" | "rz" | "phase" => {
            need(1, 1)?;
            let (wire, theta) = (wires[0], angles[0]);
            match kind {
                "rx" => Gate::Rx { wire, theta },
                "ry" => Gate::Ry { wire, theta },
                "rz" => Gate::Rz { wire, theta },
                _ => Gate::Phase { wire, beta: theta },
            }
        }
        "x" | "h" => {
            need(1, 0)?;
            if kind == "x" {
                Gate::X { wire: wires[0] }
            } else {
                Gate::H { wire: wires[0] }
            }
        }
        "u2" => {
            need(1, 4)?;
            Gate::U2 { wire: wires[0], angles: four(&angles) }
        }
        "cnot" => {
            need(2, 0)?;
            Gate::Cnot { control: wires[0], target: wires[1] }
        }
        "crz" => {
            if angles.len() != 1 {
                return Err(parse_err("gate crz needs 1 angle"));
            }
            Gate::CRz { beta: angles[0] }
        }
        "cu2" => {
            need(2, 4)?;
            Gate::ControlledU2 { control: wires[0], target: wires[1], angles: four(&angles) }
        }
        other => return Err(parse_err(format!("unknown gate kind {other:?}"))),
    })
}

pub fn circuit_to_json(c: &Circuit<f64>) -> Value {
    json!({ "gates": c.gates.iter().map(gate_to_json).collect::<Vec<_>>() })
}

/// Accepts `{"gates": [...]}` or a bare gate list.
pub fn circuit_from_json(v: &Value) -> Result<Circuit<f64>> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(o) => o.get("gates").and_then(Value::as_array).ok_or_else(|| parse_err("missing \"gates\""))?,
        _ => return Err(parse_err("expected a circuit")),
    };
    let mut c = Circuit::new();
    for g in list {
        c.push(gate_from_json(g)?);
    }
    Ok(c)
}

pub fn mat2_from_json(v: &Value) -> Result<CMat2<f64>> {
    parse_matrix(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::synthesize;
    use crate::povm::{reference_set, ReferenceSet};

    #[test]
    fn floats_keep_17_digits() {
        let s = serde_json::to_string(&num(std::f64::consts::PI)).unwrap();
        assert_eq!(s, "3.1415926535897931e+0");
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn povm_round_trip() {
        let p = reference_set::<f64>(ReferenceSet::Set2);
        let text = serde_json::to_string(&povm_to_json(&p)).unwrap();
        let back = povm_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(matches!(povm_from_json(&json!({"kets": []})), Err(Error::Parse(_))));
    }

    #[test]
    fn unitary_and_circuit_round_trip() {
        let u = crate::dilation::u_sic1_reference::<f64>(1).u;
        let t = ThetaDelta::from_array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]);
        let text = serde_json::to_string(&unitary_to_json(&u, Some(&t))).unwrap();
        let (u2, t2) = unitary_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(u2, u);
        assert_eq!(t2.unwrap().to_array(), t.to_array());

        let mut c = synthesize(&u).unwrap();
        c.push(Gate::CRz { beta: 0.3 }).push(Gate::ControlledU2 {
            control: Wire::System,
            target: Wire::Ancilla,
            angles: [0.1, 0.2, 0.3, 0.4],
        });
        c.push(Gate::H { wire: Wire::Ancilla }).push(Gate::Phase { wire: Wire::System, beta: 1.0 });
        let text = serde_json::to_string(&circuit_to_json(&c)).unwrap();
        assert_eq!(circuit_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), c);
        assert!(circuit_from_json(&json!([{"kind": "cnot", "wires": ["system", "system"]}])).is_err());
    }
}
