use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fluidstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluidstar")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = fluidstar(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tov_constant_density_writes_profile() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("star.csv");
    let d = json(&["tov", "--eos", "constant:c=0.001", "--rho-c", "0.0005", "--out", path_str(&csv)]);
    let (rb, mass) = (d["r_b"].as_f64().unwrap(), d["mass"].as_f64().unwrap());
    // uniform density: M = 4πc r_b³/3
    assert!((mass - 4.0 * PI * 0.001 * rb.powi(3) / 3.0).abs() < 1e-6 * mass);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("r,m,mu,rho,exp_neg_gamma,exp_v,f\n"));
    let rows = csv_rows(&csv);
    let last = rows.last().unwrap();
    assert!((last[0] - rb).abs() < 1e-12 * rb);
    // lapse matched to the exterior: e^v = 1 − 2M/r_b at the surface
    assert!((last[5] - (1.0 - 2.0 * mass / rb)).abs() < 1e-9);
}

#[test]
fn verify_round_trips_written_profile() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let out = fluidstar(&["tov", "--eos", "polytrope:K=100,gamma=2", "--rho-c", "1.6e-4", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 0);
    let rep = json(&["verify", path_str(&csv)]);
    assert_eq!(rep[path_str(&csv)]["pass"], Value::Bool(true));
}

#[test]
fn catalog_verify_witten() {
    let out = fluidstar(&["catalog", "verify", "witten_stellar", "--n", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let rep = json(&["catalog", "verify", "witten_stellar", "--n", "4", "--B", "-0.5"]);
    assert_eq!(rep["pass"], Value::Bool(true));
}

#[test]
fn verify_all_catalog_models() {
    let out = fluidstar(&["verify"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let rep = json(&["verify"]);
    assert_eq!(rep.as_object().unwrap().len(), json(&["catalog", "list"]).as_array().unwrap().len());
}

#[test]
fn schwarzschild_masses() {
    for (m, c) in [(1.0, 0.5), (2.0, 0.3), (0.5, 0.8)] {
        let spec = format!("schwarzschild_exterior:M={m}");
        let rep = json(&["mass", "--model", &spec, "--level", &c.to_string()]);
        assert!((rep["m_hawking"].as_f64().unwrap() - m).abs() < 1e-12);
        // Brown–York on f = c: 2M/(1 + c), at r = 2M/(1 − c²)
        assert!((rep["m_brown_york"].as_f64().unwrap() - 2.0 * m / (1.0 + c)).abs() < 1e-12);
        assert!((rep["r"].as_f64().unwrap() - 2.0 * m / (1.0 - c * c)).abs() < 1e-9);
    }
}

#[test]
fn mass_sweep_is_ordered_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("levels.csv");
    let args = ["mass", "sweep", "--model", "schwarzschild_exterior:M=1", "--levels", "0.1:0.9:17", "--out", path_str(&csv)];
    let first = fluidstar(&args);
    assert_eq!(code(&first), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("c,r,area,H,kappa,rho0,m_hawking,m_brown_york,chi_residual,ineq_slack\n"));
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 17);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0] && w[0][1] < w[1][1]));
    for row in &rows {
        assert!((row[6] - 1.0).abs() < 1e-12);
    }
    let second = fluidstar(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(text, fs::read_to_string(&csv).unwrap());
}

#[test]
fn tov_sweep_keeps_input_order_and_flags_failures() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = fluidstar(&["tov", "sweep", "--eos", "polytrope:K=100,gamma=2", "--rho-c", "1e-4:8e-4:8", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 8);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    // each row agrees with a single run
    let single = json(&["tov", "--eos", "polytrope:K=100,gamma=2", "--rho-c", &format!("{:?}", rows[3][0])]);
    assert_eq!(single["r_b"].as_f64().unwrap(), rows[3][1]);
    assert_eq!(single["mass"].as_f64().unwrap(), rows[3][2]);

    let bad = fluidstar(&["tov", "sweep", "--eos", "constant:c=0.001", "--rho-c", "-0.001:0.001:3"]);
    assert_eq!(code(&bad), 3);
    let text = String::from_utf8_lossy(&bad.stdout);
    assert!(text.contains(",failed") && text.contains(",ok"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["--json", "tov", "--eos", "polytrope:K=100,gamma=2", "--rho-c", "1.6e-4"];
    assert_eq!(fluidstar(&args).stdout, fluidstar(&args).stdout);
    let args = ["--json", "audit", "--model", "witten_stellar"];
    assert_eq!(fluidstar(&args).stdout, fluidstar(&args).stdout);
}

#[test]
fn table_eos_matches_constant_density() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("eos.csv");
    let mut text = String::from("# constant density\nrho,mu\n");
    for i in 0..=20 {
        text.push_str(&format!("{:?},0.001\n", i as f64 * 1e-4));
    }
    fs::write(&table, text).unwrap();
    let spec = format!("table:{}", table.display());
    let tab = json(&["tov", "--eos", &spec, "--rho-c", "0.0005"]);
    let exact = json(&["tov", "--eos", "constant:c=0.001", "--rho-c", "0.0005"]);
    let rel = |k: &str| (tab[k].as_f64().unwrap() / exact[k].as_f64().unwrap() - 1.0).abs();
    assert!(rel("r_b") < 1e-6, "{tab} vs {exact}");
    assert!(rel("mass") < 1e-6);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("run.ini");
    let out = dir.path().join("sample.csv");
    fs::write(&ini, format!("[residuals]\npoints = 16\n\n[catalog]\nout = {}\n", out.display())).unwrap();
    let cfg = path_str(&ini);
    let run = fluidstar(&["--config", cfg, "catalog", "sample", "schwarzschild_interior"]);
    assert_eq!(code(&run), 0);
    assert_eq!(csv_rows(&out).len(), 16);
    let run = fluidstar(&["--config", cfg, "--points", "24", "catalog", "sample", "schwarzschild_interior"]);
    assert_eq!(code(&run), 0);
    assert_eq!(csv_rows(&out).len(), 24);

    fs::write(&ini, "[solver]\nwobble = 3\n").unwrap();
    assert_eq!(code(&fluidstar(&["--config", cfg, "catalog", "list"])), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&fluidstar(&["bogus"])), 1);
    assert_eq!(code(&fluidstar(&["catalog", "verify", "no_such_model"])), 1);
    assert_eq!(code(&fluidstar(&["tov", "--eos", "constant:c=0.001"])), 1);
    assert_eq!(code(&fluidstar(&["--rtol", "-1", "catalog", "list"])), 1);
    assert_eq!(code(&fluidstar(&["--config", "/nonexistent/run.ini", "catalog", "list"])), 4);
    let out = fluidstar(&["tov", "--eos", "constant:c=0.001", "--rho-c", "0.0005", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(code(&out), 4);
    assert_eq!(code(&fluidstar(&["verify", "/nonexistent/star.csv"])), 4);
    // a mass with no level set is a computation failure
    assert_eq!(code(&fluidstar(&["mass", "--model", "wyman", "--level", "0.5"])), 3);
    assert_eq!(code(&fluidstar(&["--help"])), 0);
}

#[test]
fn catalog_sample_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let run = fluidstar(&["--points", "32", "catalog", "sample", "schwarzschild_exterior:M=1", "--out", path_str(&out)]);
    assert_eq!(code(&run), 0);
    for row in csv_rows(&out) {
        let r = row[0];
        assert!((row[1] - 1.0).abs() < 1e-12, "m column");
        assert!((row[4] - (1.0 - 2.0 / r)).abs() < 1e-12, "exp_neg_gamma column");
        assert!((row[5] - row[6] * row[6]).abs() < 1e-12, "exp_v = f²");
    }
}

#[test]
fn build_writes_descriptor_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let run = fluidstar(&["build", "--phi", "sphere", "--n", "3", "--ic", "1,-0.1", "--span", "0,0.8", "--out", path_str(&model)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stdout));
    let d: Value = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(d["checks"]["pass"], Value::Bool(true));
    let samples = dir.path().join("model.csv");
    assert_eq!(d["samples_csv"].as_str().unwrap(), path_str(&samples));
    let text = fs::read_to_string(&samples).unwrap();
    assert!(text.starts_with("s,phi,f,mu,rho\n"));
    // φ = 1 + ϱ
    for row in csv_rows(&samples) {
        assert!((row[1] - (1.0 + row[0])).abs() < 1e-12);
    }

    // closed-form and integrated lapse agree
    let fast = json(&["build", "--n", "4", "--span", "0,2"]);
    let exact = json(&["build", "--n", "4", "--span", "0,2", "--exact"]);
    assert_eq!(exact["fast_path"], Value::Bool(false));
    let f_col = |d: &Value| -> Vec<f64> {
        d["samples_csv"].as_str().unwrap().lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect()
    };
    for (a, b) in f_col(&fast).iter().zip(f_col(&exact)) {
        assert!((a - b).abs() < 1e-6 * a.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn audit_reports_fractions() {
    let ext = json(&["audit", "--model", "schwarzschild_interior"]);
    assert_eq!(ext["dec_fraction"].as_f64().unwrap(), 1.0);
    assert_eq!(ext["advisory"], Value::Bool(false));
    assert!(ext["first_violation"].is_null());

    // DEC ⇒ WEC ⇒ NEC pointwise, whatever the model
    let es = json(&["audit", "--model", "einstein_static"]);
    assert_eq!(es["chain_holds"], Value::Bool(true));

    let phys = json(&["audit", "--model", "witten_stellar"]);
    assert_eq!(phys["units"], Value::String("physical".into()));
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("geo.ini");
    fs::write(&ini, "[model]\nunits = geometric\n").unwrap();
    let geo = json(&["--config", path_str(&ini), "audit", "--model", "witten_stellar"]);
    assert_eq!(geo["units"], Value::String("geometric".into()));
    // with Λ = 0 the rescaling by 8π leaves every sign unchanged
    assert_eq!(geo["wec_fraction"], phys["wec_fraction"]);
}
