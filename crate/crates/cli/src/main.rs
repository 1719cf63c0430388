use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use icpovm::dilation::{build_dilation, DilationUnitary};
use icpovm::equivalence::{canonical_vector, cnot_count, gamma_of};
use icpovm::gates::matrices::pauli_exp;
use icpovm::gates::{practical_circuit, practical_outcome_map, Circuit};
use icpovm::io::{self, num, reals};
use icpovm::optimizer::{compile_sic, find_2cnot_theta, permutation_string, relabel_unitary, RelabelCode};
use icpovm::povm::{reference_set, QubitPovm4, ReferenceSet};
use icpovm::shadows::{
    circuit_povm, depolarize, estimate_table, measurement_circuit, optimal_sic_for_state, prepare_ghz, prepare_product,
    set1_circuit, snapshot_table, DensityState, FidelityEstimate, NoiseConfig, NoiseModel, OutcomeSampler,
};
use icpovm::{CMat2F64, Error};

#[derive(Parser)]
#[command(name = "icpovm", version, about = "Minimal-CNOT POVM measurement compiler and shadow simulator")]
struct RunConfig {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check completeness, informational completeness and the SIC property.
    Validate {
        /// POVM file, or `set1` / `set2`
        povm: String,
    },
    /// Canonical vector and CNOT count of a two-qubit unitary or circuit.
    Classify { input: PathBuf },
    /// Compile a SIC POVM into the one-CNOT circuits.
    CompileSic {
        /// POVM file, or `set1` / `set2`
        povm: String,
        /// Also write the general circuit here
        #[arg(long)]
        circuit_out: Option<PathBuf>,
    },
    /// Adjust the free dilation parameters down to two CNOTs.
    Optimize {
        /// Unitary file, or a POVM file (dilated first)
        input: PathBuf,
    },
    /// Simulated classical-shadow fidelity estimation; CSV on stdout.
    ShadowEstimate(ShadowArgs),
    /// Permutations produced by the 24 relabelling operators.
    RelabelTable {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Ghz,
    Depolarized,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetKind {
    /// N-qubit GHZ state
    Ghz,
    /// |0⟩ on every qubit
    Zero,
    /// exp(i π/3 (X+Y+Z))|0⟩ on every qubit
    Rotated,
}

#[derive(clap::Args)]
struct ShadowArgs {
    #[arg(long, value_enum, default_value = "ghz")]
    state: StateKind,
    /// Pure state whose fidelity is estimated (and which is depolarized)
    #[arg(long, value_enum, default_value = "ghz")]
    target: TargetKind,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 0.2)]
    p: f64,
    /// Comma-separated shot counts, one CSV row each
    #[arg(long, value_delimiter = ',', default_value = "100000")]
    shots: Vec<usize>,
    #[arg(long, env = "ICPOVM_SEED", default_value_t = 0)]
    seed: u64,
    /// POVM file, or `set1`, `set2`, `optimal`
    #[arg(long, default_value = "set1")]
    povm: String,
    /// `1cnot`, `2cnot`, `3cnot` or a circuit file
    #[arg(long, default_value = "1cnot")]
    circuit: String,
    /// Noise configuration file, `default`, or `off`
    #[arg(long, default_value = "off")]
    noise: String,
    /// Batches used for the MSE column
    #[arg(long, default_value_t = 10)]
    batches: usize,
}

enum Failure {
    Domain(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_povm(spec: &str) -> CliResult<QubitPovm4<f64>> {
    match spec {
        "set1" => Ok(reference_set(ReferenceSet::Set1)),
        "set2" => Ok(reference_set(ReferenceSet::Set2)),
        path => Ok(io::povm_from_json(&read_json(Path::new(path))?)?),
    }
}

fn out(line: &str) {
    // a closed pipe downstream is not an error here
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print(v: &Value) {
    out(&serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_validate(spec: &str) -> CliResult<()> {
    let p = load_povm(spec)?;
    let completeness = p.validate();
    let complete = completeness < 1e-9;
    let sv = p.frame_singular_values();
    let report = json!({
        "complete": complete,
        "completeness_residual": num(completeness),
        "ic": p.is_ic(),
        "frame_singular_values": reals(&sv),
        "sic": p.is_sic(),
        "sic_residual": num(p.sic_residual()),
        "kets": io::povm_to_json(&p)["kets"],
    });
    print(&report);
    if !complete {
        return Err(Failure::Domain(format!("POVM is not complete (residual {completeness:e})")));
    }
    Ok(())
}

fn load_unitary(path: &Path) -> CliResult<(DilationUnitary<f64>, Option<icpovm::ThetaDeltaF64>)> {
    let v = read_json(path)?;
    if v.get("gates").is_some() || (v.is_array() && v.get(0).and_then(|g| g.get("kind")).is_some()) {
        let c = io::circuit_from_json(&v)?;
        return Ok((DilationUnitary::new(c.unitary())?, None));
    }
    if v.get("kets").is_some() {
        return Ok((build_dilation(&io::povm_from_json(&v)?)?, None));
    }
    let (m, t) = io::unitary_from_json(&v)?;
    Ok((DilationUnitary::new(m)?, t))
}

fn cmd_classify(path: &Path) -> CliResult<()> {
    let (u, _) = load_unitary(path)?;
    let k = canonical_vector(&u.u)?;
    let g = gamma_of(&u.u)?;
    let (r1, r2) = g.one_cnot_residuals();
    print(&json!({
        "k": reals(&k.k),
        "cnot_count": cnot_count(&u.u)?,
        "tr_gamma": io::complex(g.tr_gamma),
        "one_cnot_residuals": reals(&[r1, r2]),
        "matrix": io::matrix(&u.u),
    }));
    Ok(())
}

fn cmd_compile_sic(spec: &str, circuit_out: Option<&Path>) -> CliResult<()> {
    let p = load_povm(spec)?;
    let target = build_dilation(&p)?;
    let (a1, a2, residual) = compile_sic(&target)?;
    let general = icpovm::gates::general_circuit(&a1.u_s, a1.c, a2.beta, &a2.q);
    let practical = practical_circuit(&a1.u_s, a1.c);
    let realized = circuit_povm(&practical)?;
    let map = practical_outcome_map(a1.c);
    let element_residual = realized.permuted(map).element_distance(&p);
    let report = json!({
        "c": a1.c,
        "u_s": io::matrix(&a1.u_s),
        "alpha": reals(&a1.alpha),
        "beta": reals(&a2.beta),
        "q": io::matrix(&a2.q),
        "gates": io::circuit_to_json(&general)["gates"],
        "practical_circuit": io::circuit_to_json(&practical),
        "practical_outcome_map": map,
        "kets": io::povm_to_json(&p)["kets"],
        "residuals": {
            "general_circuit": num(residual),
            "practical_elements": num(element_residual),
        },
    });
    if let Some(path) = circuit_out {
        let text = serde_json::to_string_pretty(&io::circuit_to_json(&general)).expect("serializable");
        fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    print(&report);
    Ok(())
}

fn cmd_optimize(path: &Path) -> CliResult<()> {
    let (u, _) = load_unitary(path)?;
    let (delta, v) = find_2cnot_theta(&u)?;
    let mut out = io::unitary_to_json(&v.u, Some(&delta));
    out["cnot_count"] = json!(cnot_count(&v.u)?);
    out["k"] = reals(&canonical_vector(&v.u)?.k);
    out["povm_residual"] = num(v.povm().element_distance(&u.povm()));
    print(&out);
    Ok(())
}

fn relabel_table(as_json: bool) {
    let codes = RelabelCode::all();
    if as_json {
        let m: serde_json::Map<String, Value> = codes
            .iter()
            .map(|c| (c.to_string(), Value::from(permutation_string(&relabel_unitary::<f64>(*c)))))
            .collect();
        print(&Value::Object(m));
        return;
    }
    out("   a    b    c    d    e    f");
    for row in codes.chunks(6) {
        let perms: Vec<String> = row.iter().map(|c| permutation_string(&relabel_unitary::<f64>(*c))).collect();
        out(&format!("{}: {}", row[0].digit, perms.join(" ")));
    }
}

fn target_ket_gate(t: TargetKind) -> CMat2F64 {
    let third = std::f64::consts::FRAC_PI_3;
    match t {
        TargetKind::Rotated => pauli_exp([0.0, third, third, third]),
        _ => CMat2F64::identity(),
    }
}

fn cmd_shadow(a: &ShadowArgs) -> CliResult<()> {
    if !(0.0..=1.0).contains(&a.p) {
        return Err(Failure::Domain(format!("p = {} outside [0, 1]", a.p)));
    }
    if a.shots.iter().any(|&m| m < a.batches.max(2)) {
        return Err(Failure::Domain("each shot count must be at least the batch count".into()));
    }
    let noise = match a.noise.as_str() {
        "off" => None,
        "default" => Some(NoiseModel::sample(&NoiseConfig { seed: a.seed, ..NoiseConfig::default() }, a.n)?),
        path => {
            let cfg: NoiseConfig = serde_json::from_value(read_json(Path::new(path))?)
                .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            Some(NoiseModel::sample(&cfg, a.n)?)
        }
    };
    let gate = target_ket_gate(a.target);
    let target = match a.target {
        TargetKind::Ghz => prepare_ghz(a.n, None)?,
        _ => prepare_product(&gate, a.n, None)?,
    };
    let prepared = match (a.target, noise.as_ref()) {
        (_, None) => target.clone(),
        (TargetKind::Ghz, Some(nm)) => prepare_ghz(a.n, Some(nm))?,
        (TargetKind::Zero, Some(_)) => target.clone(),
        (TargetKind::Rotated, Some(nm)) => prepare_product(&gate, a.n, Some(nm))?,
    };
    let (rho, ideal_state): (DensityState, DensityState) = match a.state {
        StateKind::Ghz => (prepared, target.clone()),
        StateKind::Depolarized => (depolarize(&prepared, a.p), depolarize(&target, a.p)),
    };
    let ideal = ideal_state.overlap(&target);

    let povm = match a.povm.as_str() {
        "optimal" => {
            if matches!(a.target, TargetKind::Ghz) {
                return Err(Failure::Domain("the optimal SIC needs a product target".into()));
            }
            optimal_sic_for_state(&gate.col(0))
        }
        spec => load_povm(spec)?,
    };
    let circ: Circuit<f64> = match (a.circuit.as_str(), a.povm.as_str()) {
        ("1cnot" | "2cnot" | "3cnot", "set1") => set1_circuit(a.circuit.as_bytes()[0] - b'0')?,
        ("1cnot" | "2cnot" | "3cnot", _) => measurement_circuit(&povm, a.circuit.as_bytes()[0] - b'0')?,
        (path, _) => io::circuit_from_json(&read_json(Path::new(path))?)?,
    };
    let table = snapshot_table(&circuit_povm(&circ)?)?;
    let values = estimate_table(&target, &table);
    let sampler = OutcomeSampler::new(&rho, &icpovm::shadows::effective_povms(&circ, noise.as_ref(), a.n)?)?;

    out("shots,mean,std_error,variance,mse_vs_ideal");
    for &m in &a.shots {
        let recs = sampler.sample_shots(a.seed, 0, m);
        let est = FidelityEstimate::from_estimates(recs.iter().map(|r| values[r.index as usize]).collect());
        out(&format!(
            "{m},{:.16e},{:.16e},{:.16e},{:.16e}",
            est.mean,
            est.std_error,
            est.variance,
            est.mse_vs(ideal, a.batches)
        ));
    }
    Ok(())
}

fn run(cli: RunConfig) -> CliResult<()> {
    match cli.cmd {
        Cmd::Validate { povm } => cmd_validate(&povm),
        Cmd::Classify { input } => cmd_classify(&input),
        Cmd::CompileSic { povm, circuit_out } => cmd_compile_sic(&povm, circuit_out.as_deref()),
        Cmd::Optimize { input } => cmd_optimize(&input),
        Cmd::ShadowEstimate(a) => cmd_shadow(&a),
        Cmd::RelabelTable { json } => {
            relabel_table(json);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(RunConfig::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
