use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gup_magnetism::table::{Cell, Table};

fn gupmag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gupmag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Table {
    Table::from_json(&fs::read_to_string(path).unwrap()).unwrap()
}

fn ints(t: &Table, col: &str) -> Vec<i64> {
    let c = t.column(col).unwrap();
    t.rows
        .iter()
        .map(|r| match r[c] {
            Cell::Int(i) => i,
            ref other => panic!("{other:?}"),
        })
        .collect()
}

fn floats(t: &Table, col: &str) -> Vec<Option<f64>> {
    let c = t.column(col).unwrap();
    t.rows
        .iter()
        .map(|r| match r[c] {
            Cell::Float(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            Cell::Null => None,
            ref other => panic!("{other:?}"),
        })
        .collect()
}

#[test]
fn parallel_sweep_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let serial = dir.path().join("serial.csv");
    let parallel = dir.path().join("parallel.csv");
    for (w, out) in [("1", &serial), ("8", &parallel)] {
        let o = gupmag(&[
            "sweep",
            "--var",
            "B",
            "--range",
            "0.01:3:200",
            "--set",
            "beta=1e-4",
            "--workers",
            w,
            "--no-meta",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = fs::read(&serial).unwrap();
    let b = fs::read(&parallel).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 201);
    assert!(!text.contains('\r'));
}

#[test]
fn meta_line_only_on_request() {
    let o = gupmag(&["thermo", "--skip-direct"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# tool=gupmag"));
    let o = gupmag(&["thermo", "--skip-direct", "--no-meta"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("schema_version,index,B,T,beta"));
}

#[test]
fn malformed_range() {
    for args in [
        &["spectrum", "--var", "B", "--range", "2:1:5"][..],
        &["sweep", "--var", "B", "--range", "0:1"][..],
        &["sweep", "--var", "B", "--range", "0:1:3:log"][..],
        &["sweep", "--var", "mass", "--range", "0:1:3"][..],
        &["sweep"][..],
    ] {
        let o = gupmag(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert!(err.starts_with("error code=RANGE_INVALID message="), "{err}");
        assert_eq!(err.lines().count(), 1);
    }
}

#[test]
fn config_errors_exit_two() {
    let o = gupmag(&["thermo", "--set", "beta=0.95"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("code=GUP_VIOLATION"));
    let o = gupmag(&["thermo", "--set", "mass=2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("code=CONFIG_INVALID"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# trap\nomega0 = 2\nT = 40\nbeta = 1e-4\n").unwrap();
    let out = dir.path().join("t.json");
    let o = gupmag(&[
        "thermo",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "T=50",
        "--skip-direct",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = read_json(&out);
    assert_eq!(floats(&t, "omega0"), vec![Some(2.0)]);
    assert_eq!(floats(&t, "T"), vec![Some(50.0)]);
    assert_eq!(floats(&t, "beta"), vec![Some(1e-4)]);
}

#[test]
fn json_round_trip_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = gupmag(&[
        "sweep",
        "--var",
        "T",
        "--range",
        "20:80:7:log",
        "--set",
        "beta=1e-4",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let t = Table::from_json(&text).unwrap();
    assert_eq!(t.to_json(true).unwrap(), text);
    assert_eq!(t.rows.len(), 7);
    assert!(t.meta.iter().any(|(k, _)| k == "generated"));
}

#[test]
fn spectrum_degeneracy_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let path = out.to_str().unwrap();
    // undeformed isotropic trap: N+1 levels per shell
    let o = gupmag(&["spectrum", "--set", "beta=0", "--set", "B=0", "--max-n", "5", "--format", "json", "--out", path]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = read_json(&out);
    for (nn, m) in ints(&t, "N").iter().zip(ints(&t, "multiplicity")) {
        assert_eq!(m, nn + 1);
    }
    // ε = 0.1 at zero field: only l ↔ −l pairs remain
    let o = gupmag(&["spectrum", "--set", "beta=0.1", "--set", "B=0", "--max-n", "5", "--format", "json", "--out", path]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = read_json(&out);
    for (l, m) in ints(&t, "l").iter().zip(ints(&t, "multiplicity")) {
        assert_eq!(m, if *l == 0 { 1 } else { 2 }, "l = {l}");
    }
}

#[test]
fn spectrum_sweep_rows() {
    let o = gupmag(&["spectrum", "--var", "B", "--range", "0:1:3", "--max-n", "2", "--no-meta"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1 + 3 * 6);
}

#[test]
fn wavefn_samples() {
    let o = gupmag(&["wavefn", "--n", "2", "--l", "-1", "--points", "50", "--no-meta"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 51);
    let o = gupmag(&["wavefn", "--set", "beta=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("code=UNDEFORMED"));
}

#[test]
fn verify_default_passes() {
    let o = gupmag(&["verify", "--no-meta"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1")));
}

#[test]
fn verify_perturbed_energy_fails_on_plateau() {
    let o = gupmag(&["verify", "--no-meta", "--perturb-energy", "0.01"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("error code=VERIFY_FAILED"), "{err}");
    assert!(err.contains("residual_plateau(n=0,l=0)"));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("residual_plateau,0,0,"));
}

#[test]
fn verify_undeformed_refused() {
    let o = gupmag(&["verify", "--set", "beta=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error code=UNDEFORMED_NOT_VERIFIABLE"));
}

#[test]
fn figure_one_topology() {
    // β = 0 and β/β̃ ∈ {0.5, 1} at kT = 30: the deformed χ(B) curves cross the
    // undeformed one twice
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.json");
    let betas = format!("0,{},{}", 0.5 / 30.0, 1.0 / 30.0);
    let o = gupmag(&[
        "sweep",
        "--var",
        "B",
        "--range",
        "0.01:5:120",
        "--betas",
        &betas,
        "--baseline-beta0",
        "--skip-direct",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = read_json(&out);
    assert_eq!(t.rows.len(), 360);
    let chi: Vec<f64> = floats(&t, "chi_closed").into_iter().map(Option::unwrap).collect();
    let (base, rest) = chi.split_at(120);
    for fam in rest.chunks(120) {
        let diff: Vec<f64> = fam.iter().zip(base).map(|(a, b)| a - b).collect();
        let changes = diff.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        assert_eq!(changes, 2);
    }
    // stronger deformation, larger departure at low field
    assert!((rest[120] - base[0]).abs() > (rest[0] - base[0]).abs());
    let b1 = floats(&t, "B1");
    assert!(b1[..120].iter().all(Option::is_none));
    assert!((b1[120].unwrap() - 0.357_834_178_794_126_74).abs() < 1e-9);
}
