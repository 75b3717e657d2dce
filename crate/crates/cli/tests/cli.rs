use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const GOLDEN: &str = "-1 -1 1";
const TRIBONACCI: &str = "-1 -1 -1 1";
const SMALLEST: &str = "-1 -1 0 1";
const SQRT2: &str = "2 -4 1";

fn rauzy(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rauzy"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("run rauzy")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or("").to_string()
}

#[test]
fn classify_examples() {
    let dir = TempDir::new().unwrap();
    for (field, expect) in [
        (GOLDEN, "simple Parry, d_β(1)=11, d=2"),
        (SQRT2, "non-simple Parry, d_β(1)=31^∞, d=2"),
        ("-2 1", "simple Parry (integer base 2)"),
    ] {
        let o = rauzy(dir.path(), &["--field", field, "classify"]);
        assert!(o.status.success());
        assert_eq!(first_line(&o), expect);
    }
    let text = fs::read_to_string(dir.path().join("classify.txt")).unwrap();
    assert!(text.contains("d*_β(1) = 1^∞"), "{text}");
}

#[test]
fn error_exit_codes_leave_no_files() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    // X^2 - X - 3 has the conjugate (1 - √13)/2 < -1
    assert_eq!(rauzy(&out, &["--field", "-3 -1 1", "classify"]).status.code(), Some(2));
    assert_eq!(rauzy(&out, &["--field", "1 x", "classify"]).status.code(), Some(3));
    assert_eq!(rauzy(&out, &["--field", GOLDEN, "--eps", "-1", "classify"]).status.code(), Some(3));
    assert_eq!(rauzy(&out, &["--field", GOLDEN, "render"]).status.code(), Some(4));
    assert_eq!(rauzy(&out, &["--field", TRIBONACCI, "render", "--axes", "re[0],re[7]"]).status.code(), Some(4));
    assert_eq!(rauzy(&out, &["--field", GOLDEN, "decide", "3/2"]).status.code(), Some(3));
    assert_eq!(rauzy(&out, &["--field", GOLDEN, "no-such-command"]).status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn automaton_and_substitution() {
    let dir = TempDir::new().unwrap();
    let o = rauzy(dir.path(), &["--field", GOLDEN, "automaton"]);
    assert!(o.status.success());
    let dot = fs::read_to_string(dir.path().join("automaton.dot")).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 3);
    assert_eq!(dot.matches("[label=\"a").count(), 2);
    let o = rauzy(dir.path(), &["--field", SMALLEST, "automaton"]);
    assert!(stdout(&o).contains("characteristic polynomial: (X^3 - X - 1)(X^2 - X + 1)"));
    let o = rauzy(dir.path(), &["--field", TRIBONACCI, "substitution"]);
    assert_eq!(first_line(&o), "1->12 2->13 3->1");
    assert!(fs::read_to_string(dir.path().join("substitution.txt")).unwrap().contains("3 -> 1"));
}

fn pgm_values(path: &Path) -> Vec<u32> {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("P2\n"));
    text.split_whitespace().skip(4).map(|v| v.parse().unwrap()).collect()
}

#[test]
fn render_outputs() {
    let dir = TempDir::new().unwrap();
    let o = rauzy(dir.path(), &["--field", TRIBONACCI, "--depth", "16", "render", "--size", "128"]);
    assert!(o.status.success());
    let px = pgm_values(&dir.path().join("render.pgm"));
    assert_eq!(px.len(), 128 * 128);
    let shades: std::collections::BTreeSet<u32> = px.iter().copied().filter(|&v| v != 255).collect();
    assert_eq!(shades.len(), 3);
    let cloud = fs::read_to_string(dir.path().join("cloud.txt")).unwrap();
    assert!(cloud.starts_with("# field:"));
    assert!(cloud.contains("# depth: 16"));

    let o = rauzy(dir.path(), &["--field", TRIBONACCI, "--depth", "0", "render", "--size", "8"]);
    assert!(o.status.success());
    let px = pgm_values(&dir.path().join("render.pgm"));
    assert_eq!(px.iter().filter(|&&v| v != 255).count(), 1);

    let o = rauzy(dir.path(), &["--field", GOLDEN, "--depth", "12", "render", "--two-sided"]);
    assert!(o.status.success());
    let cyl = fs::read_to_string(dir.path().join("cylinders.txt")).unwrap();
    let heights: Vec<f64> = cyl.lines().skip(1).map(|l| l.split(' ').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(heights.len(), 2);
    assert_eq!(heights[0], 1.0);
    assert!((heights[1] - 0.618_033_988_749_895).abs() < 1e-12);
}

#[test]
fn decide_and_crosscheck() {
    let dir = TempDir::new().unwrap();
    let o = rauzy(dir.path(), &["--field", "-10 1", "decide", "1/3"]);
    assert!(o.status.success());
    assert_eq!(first_line(&o), "purely periodic, period 1, geometric: In");
    let report = fs::read_to_string(dir.path().join("decide.txt")).unwrap();
    assert!(report.contains("1/3\ttrue\t1\tIn"));

    let o = rauzy(dir.path(), &["--field", GOLDEN, "crosscheck", "--q", "50"]);
    assert!(o.status.success());
    assert!(first_line(&o).starts_with("774 tested, 0 conflicts"));
    let report = fs::read_to_string(dir.path().join("crosscheck.txt")).unwrap();
    assert!(report.contains("# tested: 774") && report.contains("# CONFLICT: 0"));

    let o = rauzy(dir.path(), &["--field", SQRT2, "crosscheck", "--q", "30"]);
    assert!(o.status.success());
    assert!(first_line(&o).contains(" 0 conflicts"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, format!("# tribonacci\nfield = {TRIBONACCI}\ndepth = 6\nsize = 32\n")).unwrap();
    let conf = cfg.to_str().unwrap();
    let o = rauzy(dir.path(), &["--config", conf, "render"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("depth 6:"));
    let o = rauzy(dir.path(), &["--config", conf, "--depth", "8", "render", "--size", "16"]);
    assert!(stdout(&o).contains("depth 8:") && stdout(&o).contains("16×16"));
    let o = rauzy(dir.path(), &["--config", conf, "--field", GOLDEN, "classify"]);
    assert_eq!(first_line(&o), "simple Parry, d_β(1)=11, d=2");
    fs::write(&cfg, "depth 6\n").unwrap();
    assert_eq!(rauzy(dir.path(), &["--config", conf, "classify"]).status.code(), Some(3));
}

#[test]
fn outputs_are_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        assert!(rauzy(dir.path(), &["--field", SQRT2, "--depth", "8", "render"]).status.success());
        assert!(rauzy(dir.path(), &["--field", TRIBONACCI, "--seed", "7", "commutation", "--samples", "50"])
            .status
            .success());
        assert!(rauzy(dir.path(), &["--field", SMALLEST, "measure", "--resolution", "1/16"]).status.success());
    }
    for name in ["render.pgm", "cloud.txt", "commutation.txt", "measure.txt"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
