use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use bertrand_kit::bertrand::{generate_bertrand_curve, sphere_preset, GeneratorParams};
use bertrand_kit::curve::{arc_length, frenet_apparatus, slant_geodesic_indicator, Curve};
use bertrand_kit::io::{csv_table, read_curve_file, write_curve_file, CurveFile};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_bertrand-kit");

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn scratch(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.current_dir(dir).args(args).env_remove("BERTRAND_KIT_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(dir: &Path, args: &[&str]) -> Run {
    run_in(dir, args, &[])
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn column(report: &Value, name: &str) -> Vec<f64> {
    let cols = report["results"]["columns"].as_array().unwrap();
    let j = cols.iter().position(|c| c == name).unwrap();
    report["results"]["rows"].as_array().unwrap().iter().map(|r| num(&r[j])).collect()
}

fn generated(dir: &Path, preset: &str) -> PathBuf {
    let c = generate_bertrand_curve(&sphere_preset(preset).unwrap(), GeneratorParams::new(1.0, PI / 3.0)).unwrap();
    let p = dir.join(format!("{preset}.json"));
    write_curve_file(&p, &CurveFile::from_curve(&c)).unwrap();
    p
}

fn check_golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e} (set UPDATE_GOLDEN=1)", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

#[test]
fn helix_point() {
    let r = run(&data_dir(), &["frenet", "helix.json", "--at", "1.0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.is_empty());
    let v = r.json();
    assert!((column(&v, "kappa")[0] - 0.12).abs() < 1e-12);
    assert!((column(&v, "tau")[0] - 0.16).abs() < 1e-12);
    assert!(column(&v, "Gamma")[0].abs() < 1e-12);
    assert!((column(&v, "s")[0] - 5.0).abs() < 1e-9);
    assert_eq!(v["masked_intervals"], Value::Array(vec![]));
}

#[test]
fn helix_golden() {
    let dir = scratch("golden");
    let csv = dir.join("helix.csv");
    let r = run(
        &data_dir(),
        &["frenet", "helix.json", "--grid", "9", "--csv", csv.to_str().unwrap()],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    check_golden("helix_frenet.json", &r.stdout);
    check_golden("helix_frenet.csv", &fs::read_to_string(csv).unwrap());
}

#[test]
fn circle_has_no_torsion() {
    let r = run(&data_dir(), &["frenet", "circle.json", "--grid", "8"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(column(&r.json(), "tau").iter().all(|t| t.abs() < 1e-12));
}

#[test]
fn order_selects_columns() {
    let cols = |order: &str| {
        let r = run(&data_dir(), &["frenet", "helix.json", "--at", "1", "--order", order]);
        assert_eq!(r.code, 0);
        r.json()["results"]["columns"].as_array().unwrap().len()
    };
    assert_eq!((cols("0"), cols("1"), cols("2")), (13, 16, 17));
    assert_eq!(run(&data_dir(), &["frenet", "helix.json", "--at", "1", "--order", "3"]).code, 2);
}

/// The CLI table for a generated curve equals, bit for bit, the same
/// quantities computed through the library.
#[test]
fn generated_frenet_matches_library() {
    let dir = scratch("library");
    let path = generated(&dir, "wobble");
    let r = run(&dir, &["frenet", "wobble.json", "--grid", "512", "--csv", "out.csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let (file, _) = read_curve_file(&path).unwrap();
    let curve: Curve = file.to_curve().unwrap();
    let grid = curve.grid(512);
    let mut s = 0.0;
    let mut rows = Vec::new();
    for (i, &t) in grid.iter().enumerate() {
        let from = if i == 0 { curve.domain().0 } else { grid[i - 1] };
        s += arc_length(&curve, from, t).unwrap();
        let fd = frenet_apparatus(&curve, t).unwrap();
        rows.push(vec![
            t,
            s,
            fd.tangent.x,
            fd.tangent.y,
            fd.tangent.z,
            fd.normal.x,
            fd.normal.y,
            fd.normal.z,
            fd.binormal.x,
            fd.binormal.y,
            fd.binormal.z,
            fd.kappa,
            fd.tau,
            fd.dkappa_ds,
            fd.dtau_ds,
            fd.d2kappa_ds2,
            slant_geodesic_indicator(&fd).unwrap(),
        ]);
    }
    let header = [
        "t", "s", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau", "dkappa_ds", "dtau_ds",
        "d2kappa_ds2", "Gamma",
    ];
    assert_eq!(fs::read_to_string(dir.join("out.csv")).unwrap(), csv_table(&header, &rows));
}

#[test]
fn mate_commands() {
    let dir = scratch("mate");
    let path = generated(&dir, "wobble");
    let r = run(&dir, &["mate", "wobble.json", "--auto", "--out", "m.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let (file, _) = read_curve_file(&path).unwrap();
    let nominal = file.generated.unwrap().nominal_lambda;
    assert!((num(&v["results"]["lambda"]) - nominal).abs() < 1e-6);
    assert_eq!(v["results"]["detection"]["accepted"], true);
    for k in ["p1", "p2", "q1", "q2"] {
        assert!(num(&v["results"]["detection"][k]["relative"]) < 1e-6, "{k}");
    }

    let r = run(&dir, &["mate", "wobble.json", "--lambda", "0", "--sampled", "64", "--out", "zero.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let base = Curve::sample(&file_curve(&path), 64, bertrand_kit::curve::Stencil::Wide).unwrap();
    let mate = file_curve(&dir.join("zero.json"));
    match (base.kind(), mate.kind()) {
        (bertrand_kit::curve::CurveKind::Sampled(a), bertrand_kit::curve::CurveKind::Sampled(b)) => {
            assert_eq!(a.points(), b.points());
            assert_eq!(a.params(), b.params());
        }
        _ => panic!("expected sampled curves"),
    }

    let r = run(&data_dir(), &["mate", "helix.json", "--auto", "--out", dir.join("h.json").to_str().unwrap()]);
    assert_eq!(r.code, 5);
    assert!(r.stderr.contains("helical"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

fn file_curve(p: &Path) -> Curve {
    read_curve_file(p).unwrap().0.to_curve().unwrap()
}

#[test]
fn verify_outcomes() {
    let dir = scratch("verify");
    generated(&dir, "wobble");
    assert_eq!(run(&dir, &["mate", "wobble.json", "--auto", "--out", "m.json"]).code, 0);

    let r = run(&dir, &["verify", "wobble.json", "m.json", "--tol", "th2=1e-9"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let first = r.stdout.lines().next().unwrap();
    assert!(first.starts_with("PASS th2"), "{first}");
    assert!(first.contains("1.0000000000000001e-9"), "{first}");

    let mut m: Value = serde_json::from_str(&fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    m["offset"]["perturbation"] = serde_json::json!(["1e-3*sin(3*t)", "1e-3*cos(2*t)", "1e-3*sin(t)"]);
    fs::write(dir.join("p.json"), serde_json::to_string_pretty(&m).unwrap()).unwrap();
    let r = run(&dir, &["verify", "wobble.json", "p.json"]);
    assert_eq!(r.code, 7);
    assert!(r.stdout.lines().any(|l| l.starts_with("FAIL th3")));
    assert!(r.stderr.contains("th3"), "{}", r.stderr);

    assert_eq!(run(&dir, &["verify", "wobble.json", "m.json", "--tol", "nope=1"]).code, 2);
}

#[test]
fn indicatrix_tables() {
    let dir = scratch("indicatrix");
    generated(&dir, "ellipse");
    assert_eq!(run(&dir, &["mate", "ellipse.json", "--auto", "--out", "m.json"]).code, 0);
    for kind in ["t-base", "n-base", "b-base", "t-mate", "n-mate", "b-mate"] {
        let csv = format!("{kind}.csv");
        let r = run(&dir, &["indicatrix", "ellipse.json", "m.json", "--kind", kind, "--csv", &csv]);
        assert_eq!(r.code, 0, "{kind}: {}", r.stderr);
        let v = r.json();
        let gaps = &v["results"]["gaps"];
        assert!(num(&gaps["kappa"]) < 1e-3 && num(&gaps["tau"]) < 1e-3, "{kind}: {gaps}");
        assert!(num(&gaps["unit_norm_defect"]) < 1e-10);
        if kind.starts_with('b') {
            let a = &v["results"]["affine"];
            assert!(num(&a["magnitude_slope_gap"]) < 1e-5, "{kind}: {a}");
            assert!(num(&a["relative_rms"]) < 1e-6);
        } else {
            assert!(v["results"].get("affine").is_none());
        }
        let text = fs::read_to_string(dir.join(&csv)).unwrap();
        assert!(text.starts_with("t,x,y,z,unit_norm_defect,kappa,tau,gamma,"));
        assert_eq!(text.lines().count(), 513);
    }
    assert_eq!(run(&dir, &["mate", "ellipse.json", "--lambda", "0.5", "--out", "bad.json"]).code, 0);
    let r = run(&dir, &["indicatrix", "ellipse.json", "bad.json", "--kind", "t-base"]);
    assert_eq!(r.code, 6, "{}", r.stderr);
}

#[test]
fn generate_and_classify() {
    let dir = scratch("generate");
    let r = run(&dir, &["generate", "--sphere-curve", "wobble", "--out", "w.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["results"]["samples"], 4096);
    assert_eq!(read_curve_file(&dir.join("w.json")).unwrap().0.generated.unwrap().samples, 4096);
    assert_eq!(run(&dir, &["mate", "w.json", "--auto", "--out", "m.json"]).code, 0);
    assert_eq!(run(&dir, &["verify", "w.json", "m.json"]).code, 0);

    let r = run(&dir, &["generate", "--sphere-curve", "great-circle", "--out", "g.json"]);
    assert_eq!(r.code, 8);
    assert!(!dir.join("g.json").exists());

    let r = run(&dir, &["classify", "w.json", "m.json"]);
    assert_eq!(r.json()["results"]["pair"]["verdict"], "bertrand");
    let r = run(&dir, &["indicatrix", "w.json", "m.json", "--kind", "t-base", "--curve-out", "tb.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&dir, &["indicatrix", "w.json", "m.json", "--kind", "n-base", "--curve-out", "nb.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&dir, &["classify", "tb.json", "nb.json", "--align"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["results"]["pair"]["verdict"], "none");

    let r = run(&data_dir(), &["classify", "helix.json"]);
    assert_eq!(r.json()["results"]["curve"]["general_helix"], true);
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    fs::write(dir.join("broken.json"), "{ not json").unwrap();
    fs::write(
        dir.join("badexpr.json"),
        r#"{"schema_version":1,"label":"x","type":"analytic","analytic":{"x":"t+","y":"0","z":"0","domain":[0,1]}}"#,
    )
    .unwrap();
    fs::write(
        dir.join("log.json"),
        r#"{"schema_version":1,"label":"x","type":"analytic","analytic":{"x":"log(t)","y":"t","z":"t^2","domain":[-1,1]}}"#,
    )
    .unwrap();
    let code = |args: &[&str]| run(&dir, args).code;
    assert_eq!(code(&["frenet", "broken.json", "--at", "0"]), 2);
    assert_eq!(code(&["frenet", "badexpr.json", "--at", "0.5"]), 2);
    assert_eq!(code(&["frenet", "missing.json", "--at", "0"]), 2);
    assert_eq!(code(&["frenet", "broken.json"]), 2);
    assert_eq!(code(&["frenet", "log.json", "--at", "-0.5"]), 3);

    let d = data_dir();
    assert_eq!(run(&d, &["frenet", "helix.json", "--at", "7"]).code, 3);
    let r = run(&d, &["frenet", "cubic.json", "--grid", "9"]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("--mask"));
    let r = run(&d, &["frenet", "cubic.json", "--grid", "9", "--mask"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let masked = v["masked_intervals"].as_array().unwrap();
    assert_eq!(masked.len(), 1);
    assert_eq!((num(&masked[0][0]), num(&masked[0][1])), (0.0, 0.0));
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 8);

    let r = run_in(&d, &["frenet", "helix.json", "--at", "1"], &[("BERTRAND_KIT_THREADS", "0")]);
    assert_eq!(r.code, 2);
    let r = run_in(&d, &["frenet", "helix.json", "--at", "1"], &[("BERTRAND_KIT_THREADS", "two")]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
}

#[test]
fn reports_do_not_depend_on_threads() {
    let dir = scratch("threads");
    generated(&dir, "spiral");
    let a = run_in(&dir, &["frenet", "spiral.json", "--grid", "300"], &[("BERTRAND_KIT_THREADS", "1")]);
    let b = run_in(&dir, &["frenet", "spiral.json", "--grid", "300"], &[("BERTRAND_KIT_THREADS", "3")]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}
