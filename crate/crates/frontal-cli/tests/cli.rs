use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn frontal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frontal")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn verdict_of(args: &[&str]) -> String {
    let o = frontal(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verdict = &v[0]["verdict"];
    match verdict.get("k") {
        Some(k) => format!("{}({k})", verdict["kind"].as_str().unwrap()),
        None => verdict["kind"].as_str().unwrap().to_string(),
    }
}

#[test]
fn classify_examples() {
    assert_eq!(verdict_of(&["classify", "--gallery", "f1", "--u0", "0"]), "KNonFront(1)");
    assert_eq!(verdict_of(&["classify", "--gallery", "cuspidal-edge", "--u0", "0"]), "FirstKindFront");
    assert_eq!(verdict_of(&["classify", "--gallery", "five-half", "--u0", "0"]), "PureFrontal");
}

#[test]
fn degenerate_points_fail_unless_allowed() {
    let path = fixture("degenerate.toml");
    let path = path.to_str().unwrap();
    let o = frontal(&["classify", "--surface", path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Degenerate"));
    let o = frontal(&["classify", "--surface", path, "--allow-degenerate"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["field", "--gallery", "f1", "--grid", "0x3"],
        &["field", "--gallery", "f1", "--grid", "1x5"],
        &["field", "--gallery", "f1", "--grid", "five"],
        &["field", "--gallery", "no-such-surface"],
        &["field"],
        &["field", "--gallery", "f1", "--surface", "x.toml"],
        &["field", "--gallery", "f1", "--order", "13"],
        &["field", "--gallery", "f1", "--order", "1"],
        &["field", "--surface", "/nonexistent/surface.toml"],
        &["verify", "--only", "nothing"],
        &["gallery", "no-such-entry"],
    ];
    for args in cases {
        assert_eq!(frontal(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn recorded_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["field", "--gallery", "cuspidal-edge", "--grid", "3x3"], "cuspidal-edge-field-3x3.csv"),
        (&["classify", "--gallery", "f1", "--u0", "0", "--u0", "0.25"], "f1-classify.json"),
        (&["mesh", "--gallery", "five-half", "--grid", "3x3"], "five-half-mesh-3x3.obj"),
    ];
    for (args, file) in cases {
        let o = frontal(args);
        assert_eq!(o.status.code(), Some(0));
        let want = std::fs::read(fixture(file)).unwrap();
        assert!(o.stdout == want, "{file} changed:\n{}", stdout(&o));
    }
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let base = ["field", "--gallery", "torus", "--grid", "9x7"];
    let one = frontal(&[&["--jobs", "1"][..], &base[..]].concat());
    let four = frontal(&[&["--jobs", "4"][..], &base[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert!(one.stdout == four.stdout);
}

#[test]
fn field_near_the_singular_curve_of_f1() {
    let o = frontal(&["field", "--surface", fixture("f1-near-axis.toml").to_str().unwrap(), "--grid", "3x2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    for pair in rows.chunks(2).filter(|p| p[0][0] != 0.0) {
        let (below, above) = (&pair[0], &pair[1]);
        for r in [below, above] {
            let (a, b) = (r[7].abs(), r[8].abs());
            assert!(a.max(b) > 5.0 * a.min(b), "{r:?}");
        }
        let bounded = |r: &Vec<f64>| if r[7].abs() < r[8].abs() { r[7] } else { r[8] };
        let diverging = |r: &Vec<f64>| if r[7].abs() < r[8].abs() { r[8] } else { r[7] };
        assert!((bounded(below) - bounded(above)).abs() < 1e-3);
        assert!(diverging(below) * diverging(above) < 0.0);
    }
}

#[test]
fn mesh_and_frames_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("torus.obj");
    let o = frontal(&["mesh", "--gallery", "torus", "--grid", "5x6", "--out", mesh.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&mesh).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 30);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 40);
    let frames = dir.path().join("frames.csv");
    let o = frontal(&["frames", "--gallery", "torus", "--grid", "4x4", "--out", frames.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&frames).unwrap().lines().count(), 17);
}

#[test]
fn invariants_table_and_json() {
    let o = frontal(&["invariants", "--gallery", "f3", "--u0", "0", "--u0", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let table = stdout(&o);
    assert!(table.contains("KNonFront(1)") && table.contains("FirstKindFront"), "{table}");
    let o = frontal(&["invariants", "--gallery", "f3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v[0]["profile"]["r_c"].is_number());
    assert!(v[0]["umbilic"]["at_umbilic"].as_bool().unwrap());
}

#[test]
fn ribaucour_pair_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = frontal(&["ribaucour", "--gallery", "circle-profile", "--grid", "12x12", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["f.obj", "f_tilde.obj", "center.obj"] {
        assert!(std::fs::read_to_string(dir.path().join(f)).unwrap().lines().count() > 100);
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn ribaucour_axis_crossing_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("drop.toml");
    std::fs::write(
        &path,
        "[profile]\nl = \"1\"\ntheta = \"-pi/2\"\nstart = [0.0, 0.1]\nrange = [0.0, 1.0]\n\n[rho]\nexpr = \"0.05\"\n",
    )
    .unwrap();
    let o = frontal(&["ribaucour", "--profile", path.to_str().unwrap(), "--grid", "4x4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("axis"));
}

#[test]
fn verify_one_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.json");
    let o = frontal(&["verify", "--only", "classify", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS [ 3]"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["count"], 1);
}

#[test]
fn verify_at_order_three_reports_insufficient_order() {
    let o = frontal(&["verify", "--only", "invariants", "--order", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL [ 5]") && text.contains("too low"), "{text}");
}

#[test]
fn gallery_listing() {
    let o = frontal(&["gallery"]);
    let text = stdout(&o);
    assert!(text.contains("surface f1") && text.contains("profile circle-profile"));
    let o = frontal(&["gallery", "five-half"]);
    assert!(stdout(&o).contains("v^5"));
}
