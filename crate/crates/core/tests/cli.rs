use std::path::PathBuf;
use std::process::{Command, Output};

fn prehom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prehom"))
        .args(args)
        .env_remove("PREHOM_TOL_DIR")
        .output()
        .expect("binary runs")
}

fn rows(o: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("prehom-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn line_equation_passes() {
    let o = prehom(&["funceq", "--eq", "12", "--s", "0.5", "--testfn", "gaussian:a=3.14159,n=1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["passed"], true);
    assert_eq!(r[0]["schema"], "1");
    assert_eq!(r[0]["anchor"], "eq12");
}

#[test]
fn printed_semigroup_fails_with_sqrt2() {
    let o = prehom(&["heat", "--check", "semigroup", "--variant", "printed", "--t", "0.5", "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let r = rows(&o);
    let law = r.iter().find(|v| v["id"] == "heat.semigroup").unwrap();
    assert_eq!(law["passed"], false);
    let m = law["measured"].as_f64().unwrap();
    assert!((m - std::f64::consts::SQRT_2).abs() < 1e-6, "{m}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 failed"));
}

#[test]
fn empty_check_list_is_a_pass() {
    let o = prehom(&["heat", "--check", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn errors_exit_one() {
    assert_eq!(prehom(&["suite", "medium"]).status.code(), Some(1));
    assert_eq!(prehom(&["funceq", "--eq", "13"]).status.code(), Some(1));
    assert_eq!(prehom(&["funceq", "--eq", "12", "--bogus"]).status.code(), Some(1));
    // pole of the gamma factor
    assert_eq!(prehom(&["funceq", "--eq", "22", "--s", "0.5"]).status.code(), Some(1));
    let o = prehom(&["funceq", "--eq", "22", "--s", "0.2", "--monte-carlo"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`seed`"));
    assert_eq!(prehom(&["heat", "--tol", "heat.nope=1"]).status.code(), Some(1));
}

#[test]
fn tolerance_override_flips_the_status() {
    let base = ["funceq", "--eq", "12", "--s", "0.4", "--convention", "twopi"];
    assert_eq!(prehom(&base).status.code(), Some(0));
    let mut tight = base.to_vec();
    tight.extend(["--tol", "funceq.eq12=1e-20"]);
    let o = prehom(&tight);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(rows(&o)[0]["tolerance"], 1e-20);
}

#[test]
fn indefinite_form_under_tight_override() {
    // the quadrature reaches ~1e-11 here, so 1e-6 still passes and 1e-14 does not
    let base = ["funceq", "--eq", "22", "--s", "0.2", "--convention", "twopi"];
    let mut a = base.to_vec();
    a.extend(["--tol", "funceq.eq22=1e-6"]);
    assert_eq!(prehom(&a).status.code(), Some(0));
    let mut b = base.to_vec();
    b.extend(["--tol", "funceq.eq22=1e-14"]);
    assert_eq!(prehom(&b).status.code(), Some(2));
}

#[test]
fn config_file_and_tolerance_dir() {
    let d = scratch_dir("config");
    let cfg = d.join("run.conf");
    std::fs::write(&cfg, "# flat config\nformat = csv\nseed = 5\n").unwrap();
    let o = prehom(&["invariance", "--space", "scalar1d", "--count", "20", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("schema,id,anchor"));
    assert_eq!(text.lines().count(), 3);

    std::fs::write(&cfg, "colour = red\n").unwrap();
    let o = prehom(&["invariance", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`colour`"));

    std::fs::write(d.join("tolerances.conf"), "funceq.eq12 = 1e-20\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_prehom"))
        .args(["funceq", "--eq", "12", "--convention", "twopi"])
        .env("PREHOM_TOL_DIR", &d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    // flags win over the directory
    let o = Command::new(env!("CARGO_BIN_EXE_prehom"))
        .args(["funceq", "--eq", "12", "--convention", "twopi", "--tol", "funceq.eq12=1e-6"])
        .env("PREHOM_TOL_DIR", &d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    std::fs::remove_dir_all(&d).ok();
}

#[test]
fn out_file_and_dumps() {
    let d = scratch_dir("out");
    let out = d.join("rows.jsonl");
    let prof = d.join("profile.csv");
    let o = prehom(&[
        "heat",
        "--check",
        "kernel",
        "--t",
        "0.5",
        "--out",
        out.to_str().unwrap(),
        "--profile-out",
        prof.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1);
    assert_eq!(std::fs::read_to_string(&prof).unwrap().lines().count(), 6);
    let grid = d.join("grid.csv");
    let o = prehom(&["probe", "--what", "", "--f", "loggauss:a=1,mu=0", "--grid-out", grid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&grid).unwrap().lines().count(), 1 + 41 * 81);
    std::fs::remove_dir_all(&d).ok();
}

#[test]
fn subcommands_report_sorted_rows() {
    let o = prehom(&["homog", "--check", "homogeneity,tplus-int", "--s", "0.3", "--lambda", "2,0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let ids: Vec<String> = rows(&o).iter().map(|r| r["id"].as_str().unwrap().to_string()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert_eq!(ids.len(), 2 + 1 + 3);

    let o = prehom(&["zeta", "--space", "definite:B=I,n=3", "--s", "0.3,-1.7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&o).len(), 4);

    let o = prehom(&["probe", "--what", "symbol-decay,scaling", "--count", "10"]);
    assert_eq!(o.status.code(), Some(0));

    let o = prehom(&["calibrate", "--eq", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let sel = rows(&o).into_iter().find(|r| r["id"] == "calibrate.eq12.selected").unwrap();
    assert_eq!(sel["params"]["convention"], "twopi");

    let o = prehom(&["funceq", "--eq", "12a", "--s", "0.7", "--variant", "printed"]);
    assert_eq!(o.status.code(), Some(2));
    let r = rows(&o);
    let dev = r.iter().find(|v| v["id"] == "funceq.eq12a.printed_deviation").unwrap();
    assert_eq!(dev["passed"], true);
}
