use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use brown_core::validation::ValidationReport;

fn brown(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brown"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn brown")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let specs = [
        ("cauchy.json", r#"{"kind":"cauchy","location":0,"scale":1}"#),
        ("two_atoms.json", r#"{"kind":"atoms","atoms":[[-1,0.3333333333333333],[1,0.6666666666666667]]}"#),
        ("dirac.json", r#"{"kind":"atoms","atoms":[[0,1]],"allow_dirac":true}"#),
        ("dirac_unflagged.json", r#"{"kind":"atoms","atoms":[[0,1]]}"#),
        ("semicircle.json", r#"{"kind":"semicircle","variance":1}"#),
    ];
    for (name, body) in specs {
        fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

/// Column header line and numeric rows of a CSV written by the CLI.
fn read_csv(path: &Path) -> (Vec<String>, String, Vec<Vec<Option<f64>>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut comments = Vec::new();
    let mut lines = text.lines();
    let columns = loop {
        let l = lines.next().expect("column line");
        match l.strip_prefix("# ") {
            Some(c) => comments.push(c.to_string()),
            None => break l.to_string(),
        }
    };
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().ok()).collect())
        .collect();
    (comments, columns, rows)
}

fn assert_ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_columns_are_stable() {
    let d = setup();
    let p = d.path();
    let cases: [(&[&str], &str, &str); 6] = [
        (&["density", "--measure", "cauchy.json"], "density.csv", "u0,u,phi,w"),
        (&["boundary", "--measure", "two_atoms.json"], "boundary.csv", "u0,u,phi"),
        (&["convolve", "--measure", "semicircle.json", "--t", "1"], "convolve.csv", "u,x,density"),
        (&["pushforward", "--measure", "cauchy.json", "--resolution", "16"], "pushforward.csv", "u0,v0,u,v,q"),
        (
            &["characteristics", "--measure", "cauchy.json", "--lambda0", "0.5,0.2", "--resolution", "16"],
            "characteristics.csv",
            "t,u,v,eps,p_u,p_v,p_eps,hamiltonian",
        ),
        (&["simulate", "--measure", "cauchy.json", "--n", "50"], "eigenvalues.csv", "re,im"),
    ];
    for (args, file, columns) in cases {
        let out = brown(&[args, &["--out", "o"]].concat(), p);
        assert_ok(&out);
        let (comments, cols, rows) = read_csv(&p.join("o").join(file));
        assert_eq!(cols, columns, "{file}");
        assert_eq!(comments[0], format!("brown {}", brown_core::VERSION));
        assert!(comments[1].starts_with("config {"), "{file}");
        assert!(!rows.is_empty());
        let sidecar = file.replace(".csv", ".json").replace("eigenvalues", "simulate");
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(p.join("o").join(sidecar)).unwrap()).unwrap();
        assert_eq!(v["version"], brown_core::VERSION);
        assert!(v["config"]["resolution"].is_u64());
    }
}

#[test]
fn density_matches_imaginary_semicircular_closed_form() {
    let d = setup();
    let out = brown(&["density", "--measure", "cauchy.json", "--alpha", "0", "--beta", "1", "--out", "o", "--format", "svg"], d.path());
    assert_ok(&out);
    let (_, _, rows) = read_csv(&d.path().join("o/density.csv"));
    let t = 1.0;
    for r in rows {
        let (u, w) = (r[1].unwrap(), r[3].unwrap());
        let a = 1.0 + u * u;
        let exact = (4.0 * t + a * a) / (a.powf(1.5) * (u * u + 1.0 + 4.0 * t).sqrt()) / (4.0 * PI * t);
        assert!((w - exact).abs() < 1e-8, "u = {u}: {w} vs {exact}");
    }
    let svg = fs::read_to_string(d.path().join("o/density.svg")).unwrap();
    assert!(svg.contains("<!-- config {"));
}

#[test]
fn two_atom_circular_boundary_has_a_gap() {
    let d = setup();
    assert_ok(&brown(&["boundary", "--measure", "two_atoms.json", "--out", "o"], d.path()));
    let (_, _, rows) = read_csv(&d.path().join("o/boundary.csv"));
    let us: Vec<f64> = rows.iter().map(|r| r[1].unwrap()).collect();
    let phi: Vec<f64> = rows.iter().map(|r| r[2].unwrap()).collect();
    assert!(phi.iter().all(|&p| p >= 0.0));
    // Circular case: u = u0. The two interior zeros of φ bracket the gap where
    // (1/3)/(u+1)² + (2/3)/(u−1)² < 1, whose right end is exactly u = 0.
    let zeros: Vec<f64> = us.iter().zip(&phi).filter(|(_, &p)| p == 0.0).map(|(&u, _)| u).collect();
    assert_eq!(zeros.len(), 4, "{zeros:?}");
    let u_min = (1.0 - 2f64.cbrt()) / (1.0 + 2f64.cbrt());
    assert!(zeros[1] < u_min && u_min < zeros[2]);
    assert!(zeros[2].abs() < 1e-9);
}

#[test]
fn empty_window_and_coarse_resolution_are_usage_errors() {
    let d = setup();
    let out = brown(&["density", "--measure", "cauchy.json", "--window=1,1", "--out", "o"], d.path());
    assert_eq!(out.status.code(), Some(2));
    let out = brown(&["density", "--measure", "cauchy.json", "--resolution", "8", "--out", "o"], d.path());
    assert_eq!(out.status.code(), Some(2));
    let out = brown(&["density", "--measure", "missing.json", "--out", "o"], d.path());
    assert_eq!(out.status.code(), Some(2));
    let out = brown(&["convolve", "--measure", "dirac_unflagged.json", "--t", "1", "--out", "o"], d.path());
    assert_eq!(out.status.code(), Some(2));
    let out = brown(&["bogus"], d.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convolve_reproduces_semicircle_laws() {
    let d = setup();
    assert_ok(&brown(&["convolve", "--measure", "dirac.json", "--t", "1", "--out", "a", "--resolution", "201"], d.path()));
    let (_, _, rows) = read_csv(&d.path().join("a/convolve.csv"));
    let max = rows.iter().map(|r| r[2].unwrap()).fold(0.0, f64::max);
    assert!((max - 1.0 / PI).abs() < 1e-9, "{max}");

    assert_ok(&brown(&["convolve", "--measure", "semicircle.json", "--t", "1", "--out", "b"], d.path()));
    let (_, _, rows) = read_csv(&d.path().join("b/convolve.csv"));
    for r in rows {
        let (x, p) = (r[1].unwrap(), r[2].unwrap());
        let exact = (8.0 - x * x).max(0.0).sqrt() / (4.0 * PI);
        assert!((p - exact).abs() < 1e-8, "x = {x}");
    }

    assert_ok(&brown(&["convolve", "--measure", "cauchy.json", "--t", "1", "--out", "c", "--resolution", "400"], d.path()));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("c/convolve.json")).unwrap()).unwrap();
    let mass = v["result"]["mass"].as_f64().unwrap();
    assert!((mass - 1.0).abs() < 1e-4, "{mass}");
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let d = setup();
    let args = ["simulate", "--measure", "cauchy.json", "--alpha", "0", "--beta", "1", "--n", "200", "--seed", "42", "--out", "o"];
    let start = std::time::Instant::now();
    assert_ok(&brown(&args, d.path()));
    assert!(start.elapsed().as_secs() < 30);
    let first = fs::read(d.path().join("o/eigenvalues.csv")).unwrap();
    assert_ok(&brown(&args, d.path()));
    let second = fs::read(d.path().join("o/eigenvalues.csv")).unwrap();
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("o/simulate.json")).unwrap()).unwrap();
    assert!(v["result"]["summary"]["tv_distance"].is_f64());
    assert!(v["result"]["summary"]["clipped_fraction"].is_f64());
}

#[test]
fn validate_cauchy_passes_and_catches_faults() {
    let d = setup();
    let out = brown(&["validate-cauchy", "--out", "ok"], d.path());
    assert_ok(&out);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("ok/validation.json")).unwrap()).unwrap();
    let rep: ValidationReport = serde_json::from_value(v["result"].clone()).unwrap();
    assert!(rep.pass);
    assert_eq!(serde_json::to_value(&rep).unwrap(), v["result"]);

    let out = brown(&["validate-cauchy", "--out", "bad", "--perturb", "1e-3"], d.path());
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL cubic height relation for v_t"), "{stdout}");
}
