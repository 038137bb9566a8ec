use std::path::Path;
use std::process::{Command, Output};

fn growthlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growthlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const ONE_SITE: &str = r#"
[model]
width = 1
[[model.species]]
label = "blue"
density = 1.0
neighborhood = { kind = "line", range = 1, axis = "x" }
"#;

const SMALL: &str = r#"
[model]
width = 48
seed = 3
[[model.species]]
label = "blue"
density = 0.05
neighborhood = { kind = "line", range = 1, axis = "x" }
[[model.species]]
label = "red"
density = 0.01
neighborhood = { kind = "l1_ball", radius = 1 }
[render]
scale = 2
"#;

const SCAN: &str = r#"
[experiment]
name = "tiny"
setting = { kind = "lines", rho = 1, tau = 1 }
p_grid = [0.05, 0.04]
a_grid = [0.5, 4.0]
side = 32
replicates = 10
seed = 5
"#;

#[test]
fn one_site_torus_gives_one_blue_pixel() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "one.toml", ONE_SITE);
    let ppm = dir.path().join("one.ppm");
    let csv = dir.path().join("one.csv");
    let o = growthlab(&["simulate", &cfg, "--out", ppm.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(std::fs::read(&ppm).unwrap(), b"P6\n1 1\n255\n\x00\x00\xff");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("run_id,seed,width,height,topology,fixation_time"));
    assert!(lines.next().unwrap().starts_with("one,0,1,1,torus,0,false,0,1"));
    assert!(stdout(&o).contains("frac_blue 1.000000"));
}

#[test]
fn fixed_seed_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let run = |name: &str| {
        let ppm = dir.path().join(name);
        let o = growthlab(&["simulate", &cfg, "--seed", "11", "--out", ppm.to_str().unwrap()]);
        assert!(o.status.success(), "{o:?}");
        (stdout(&o), std::fs::read(ppm).unwrap())
    };
    let (a, b) = (run("a.ppm"), run("b.ppm"));
    assert_eq!(a, b);
    assert!(a.1.starts_with(b"P6\n96 96\n255\n"));
    let other = growthlab(&["simulate", &cfg, "--seed", "12", "--out", dir.path().join("c.ppm").to_str().unwrap()]);
    assert!(other.status.success());
    assert_ne!(std::fs::read(dir.path().join("c.ppm")).unwrap(), a.1);
}

#[test]
fn self_test_recovers_planted_exponent() {
    let o = growthlab(&["phase-scan", "--self-test"]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("self-test passed"));
}

#[test]
fn phase_scan_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.toml", SCAN);
    let out = dir.path().join("scan.csv");
    let out_s = out.to_str().unwrap();
    let first = growthlab(&["phase-scan", &cfg, "--out", out_s, "--no-fit"]);
    assert!(first.status.success(), "{first:?}");
    assert!(stdout(&first).contains("computed 4 cells"));
    let full = std::fs::read_to_string(&out).unwrap();
    assert_eq!(full.lines().count(), 5);

    // drop the last two cells as if the run had been interrupted
    let kept: Vec<&str> = full.lines().take(3).collect();
    std::fs::write(&out, kept.join("\n") + "\n").unwrap();
    let second = growthlab(&["phase-scan", &cfg, "--out", out_s, "--no-fit"]);
    assert!(second.status.success(), "{second:?}");
    let s = stdout(&second);
    assert!(s.contains("resuming: 2 cells") && s.contains("computed 2 cells"), "{s}");
    assert_eq!(std::fs::read_to_string(&out).unwrap(), full);

    let third = growthlab(&["phase-scan", &cfg, "--out", out_s, "--no-fit"]);
    assert!(stdout(&third).contains("computed 0 cells"));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), full);
}

#[test]
fn fit_with_too_few_p_values_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.toml", SCAN);
    let out = dir.path().join("scan.csv");
    let o = growthlab(&["phase-scan", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
}

#[test]
fn empty_grid_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.toml", &SCAN.replace("p_grid = [0.05, 0.04]", "p_grid = []"));
    let out = dir.path().join("scan.csv");
    let o = growthlab(&["phase-scan", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(growthlab(&["bogus"]).status.code(), Some(1));
    assert_eq!(growthlab(&["blocking-verify", "--sabotage", "x"]).status.code(), Some(1));
    assert_eq!(growthlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn blocking_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("b.ppm");
    let o = growthlab(&["blocking-verify", "--image", img.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).contains("PASS"));
    assert!(std::fs::read(img).unwrap().starts_with(b"P6\n"));
}

#[test]
fn blocking_verify_static_passes() {
    let o = growthlab(&["blocking-verify", "--static"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
}

#[test]
fn sabotaged_box_fails_with_its_name() {
    let o = growthlab(&["blocking-verify", "--sabotage", "0:2"]);
    assert_eq!(o.status.code(), Some(2), "{o:?}");
    let s = stdout(&o);
    assert!(s.contains("FAIL: box 0:2"), "{s}");
}

#[test]
fn continuum_prints_lambda() {
    let o = growthlab(&["continuum", "--alpha", "1", "--alpha-bar", "1.5", "--m", "3", "--layers", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("lambda 1.250000000"));
}

#[test]
fn red_cert_and_three_color_run() {
    let o = growthlab(&["red-cert", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let o = growthlab(&[
        "three-color",
        "--pg",
        "0",
        "--pb",
        "0.01",
        "--pr",
        "0.01",
        "--side",
        "128",
        "--replicates",
        "3",
        "--rectangles",
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).contains("not rectangular 0"));
}
