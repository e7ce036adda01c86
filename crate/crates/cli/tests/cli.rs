use std::process::{Command, Output};

use serde_json::Value;

fn rotloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotloc"))
        .args(args)
        .env_remove("ROTLOC_REL_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = rotloc(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn code(args: &[&str]) -> i32 {
    rotloc(args).status.code().expect("exit code")
}

#[test]
fn roots_of_factorized_cubic() {
    let v = json(&["roots", "--e0", "1", "--h", "0", "--b", "0"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["conventions"]["matrix_representation"], "dirac-pauli");
    let mut roots: Vec<f64> = v["result"]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_f64().unwrap())
        .collect();
    roots.sort_by(f64::total_cmp);
    for (got, want) in roots.iter().zip([-1.0, 1.0, 1.0]) {
        assert!((got - want).abs() < 1e-12, "{roots:?}");
    }
}

#[test]
fn lab_radius_closed_form() {
    let v = json(&["localize", "lab", "--e0", "1"]);
    let rms = &v["result"]["lab_rms"];
    assert_eq!(rms["unit"], "lambda");
    assert!((rms["value"].as_f64().unwrap() - 0.797_884_6).abs() < 1e-7);
}

#[test]
fn rotating_radius_reports_conventions() {
    let v = json(&["localize", "rot", "--kappa", "1e4", "--e0", "1"]);
    assert_eq!(v["conventions"]["y_convention"], "decaying");
    assert_eq!(v["conventions"]["branch"], 1);
    let ratio = v["result"]["ratio_rot_over_bound"]["value"].as_f64().unwrap();
    assert!(ratio < 1.0 && 1.0 - ratio < 2e-4, "{ratio}");
}

#[test]
fn sweep_csv_approaches_bound() {
    let out = rotloc(&[
        "sweep",
        "--kappa-from",
        "1e2",
        "--kappa-to",
        "1e6",
        "--points",
        "9",
        "--e0",
        "1",
    ]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "kappa",
            "e0",
            "branch",
            "eta_log",
            "sigma_log",
            "xi_log",
            "rot_rms_over_bound"
        ]
    );
    let ratios: Vec<f64> = rdr.records().map(|r| r.unwrap()[6].parse::<f64>().unwrap()).collect();
    assert_eq!(ratios.len(), 9);
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
    assert!(1.0 - ratios[8] < 1e-5);
}

#[test]
fn sweep_json_rows() {
    let v = json(&[
        "sweep",
        "--kappa-from",
        "10",
        "--kappa-to",
        "1000",
        "--points",
        "3",
        "--format",
        "json",
    ]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["kappa"].as_f64().unwrap(), 100.0);
}

#[test]
fn verify_commands_pass() {
    let v = json(&["verify", "dirac", "--points", "40"]);
    assert_eq!(v["result"]["selected"], "rotation+ polarization+ field+ spin+");
    assert!(v["result"]["max_residual"]["value"].as_f64().unwrap() < 1e-10);

    let v = json(&["verify", "ode", "--kappa", "50"]);
    for k in ["eta", "sigma", "xi"] {
        assert!(v["result"]["residuals"][k]["value"].as_f64().unwrap() < 1e-6);
    }

    let v = json(&["verify", "transform", "--events", "2000"]);
    assert!(v["result"]["max_det_error_analytic"]["value"].as_f64().unwrap() < 1e-10);
    assert!(v["result"]["max_inverse_error"]["value"].as_f64().unwrap() < 1e-10);
}

#[test]
fn wavefunction_at_event() {
    let v = json(&["wavefunction", "--at", "0.5,-1,2,-3", "--h", "0.1"]);
    assert_eq!(v["result"]["components"].as_array().unwrap().len(), 4);
    assert!(v["result"]["residual"]["value"].as_f64().unwrap() < 1e-10);
}

#[test]
fn transform_roundtrip() {
    let v = json(&["transform", "--r", "0.5", "--phi", "1", "--omega", "1"]);
    let o = &v["result"]["output"];
    assert!((o["z"].as_f64().unwrap() + 0.288_675_134_594_812_9).abs() < 1e-14);
    let (phi, z, t) = (o["phi"].to_string(), o["z"].to_string(), o["t"].to_string());
    let back = json(&[
        "transform",
        "--r",
        "0.5",
        "--phi",
        &phi,
        "--z",
        &z,
        "--t",
        &t,
        "--omega",
        "1",
        "--inverse",
    ]);
    assert!((back["result"]["output"]["phi"].as_f64().unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn config_file_inputs() {
    let dir = std::env::temp_dir().join(format!("rotloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("model.json");
    std::fs::write(&model, r#"{"e0": 1, "h": 0.01, "omega_n": 0.001}"#).unwrap();
    let v = json(&["localize", "rot", "--config", model.to_str().unwrap()]);
    assert!((v["result"]["kappa"].as_f64().unwrap() - 1000.0).abs() < 1e-9);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&["localize", "rot", "--config", bad.to_str().unwrap()]), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["roots"]), 1);
    assert_eq!(code(&["--rel-tol", "1e-2", "roots", "--e0", "1"]), 1);
    assert_eq!(code(&["--rel-tol", "1e-14", "roots", "--e0", "1"]), 1);
    assert_eq!(code(&["roots", "--e0", "1", "--format", "csv"]), 1);
    assert_eq!(code(&["transform", "--r", "2", "--omega", "1"]), 2);
    // Past the resolution of double precision the panel doubling stalls.
    assert_eq!(
        code(&[
            "--rel-tol",
            "1e-13",
            "localize",
            "rot",
            "--e0",
            "1e3",
            "--kappa",
            "1e12"
        ]),
        3
    );
}

#[test]
fn rel_tol_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rotloc"))
        .args(["roots", "--e0", "1"])
        .env("ROTLOC_REL_TOL", "1e-6")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tolerance"]["rel_tol"], 1e-6);
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "7", "verify", "dirac", "--points", "25", "--h", "0.2"];
    assert_eq!(rotloc(&args).stdout, rotloc(&args).stdout);
    let sweep = ["sweep", "--kappa-from", "10", "--kappa-to", "1e5", "--points", "6"];
    assert_eq!(rotloc(&sweep).stdout, rotloc(&sweep).stdout);
    let other = ["--seed", "8", "verify", "dirac", "--points", "25", "--h", "0.2"];
    assert_ne!(rotloc(&args).stdout, rotloc(&other).stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("rotloc-out-{}.json", std::process::id()));
    let out = rotloc(&["--out", path.to_str().unwrap(), "localize", "lab", "--e0", "2"]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "localize lab");
    std::fs::remove_file(path).unwrap();
}
