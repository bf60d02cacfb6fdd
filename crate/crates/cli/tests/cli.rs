use std::path::PathBuf;
use std::process::{Command, Output};

fn obesov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obesov")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("obesov-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn value<'a>(table: &'a str, key: &str) -> &'a str {
    table
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key} in\n{table}"))
}

#[test]
fn young_check_prints_both_integrals() {
    let o = obesov(&["young", "check", "--phi", "pow:1.5", "--alpha", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    let under: f64 = value(&t, "lambda_under").parse().unwrap();
    let over: f64 = value(&t, "lambda_over").parse().unwrap();
    // 1/((1−α)p − n) and 1/(n + αp)
    assert!((under - 1.0).abs() < 0.02 && (over - 2.0).abs() < 0.04, "{t}");
    assert_eq!(value(&t, "admissible"), "true");
}

#[test]
fn inadmissible_function_is_a_finding_not_an_error() {
    let o = obesov(&["young", "check", "--phi", "pow:2", "--alpha", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    assert_eq!(value(&t, "lambda_over"), "inf");
    assert_eq!(value(&t, "admissible"), "false");
}

#[test]
fn malformed_spec_names_the_token_and_exits_one() {
    let o = obesov(&["norm", "besov", "--domain", "ball:0,0,1", "--field", "gauss:0,0,x", "--phi", "pow:1.5", "--alpha", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("`x`"));
}

#[test]
fn missing_required_flag_exits_one() {
    let o = obesov(&["norm", "orlicz", "--domain", "ball:0,0,1", "--field", "coord:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--phi"));
}

#[test]
fn help_exits_zero_and_unknown_command_exits_one() {
    assert_eq!(obesov(&["--help"]).status.code(), Some(0));
    assert_eq!(obesov(&["verify", "--help"]).status.code(), Some(0));
    assert_eq!(obesov(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn lebesgue_norm_of_coordinate() {
    // ‖x₁‖²_{L²(0,1)²} = 1/3
    let o = obesov(&["norm", "lebesgue", "--domain", "box:0,0,1,1", "--field", "coord:1", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = value(&stdout(&o), "lebesgue").parse().unwrap();
    assert!((v - (1.0f64 / 3.0).sqrt()).abs() < 1e-3, "{v}");
}

#[test]
fn tsv_output_and_file_target() {
    let dir = scratch("tsv");
    let out = dir.join("reg.tsv");
    let o = obesov(&[
        "domain", "regularity", "--domain", "box:0,0,1,1", "--centers", "8", "--format", "tsv", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("quantity\tvalue\n"));
    assert!(text.contains("theta\t0.125"), "{text}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dyadic_table_halves_the_measure() {
    let o = obesov(&["domain", "dyadic", "--domain", "ball:0,0,1", "--point", "0,0", "--radius", "0.5", "--levels", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    let m: Vec<f64> = t.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(m.len(), 5);
    for w in m.windows(2) {
        assert!((w[1] / w[0] - 0.5).abs() < 1e-3, "{t}");
    }
}

#[test]
fn config_file_supplies_flags_and_flags_win() {
    let dir = scratch("cfg");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "phi = \"pow:1.5\"\nalpha = -1.0\nseed = 3\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_cfg = obesov(&["young", "check", "--config", c]);
    assert_eq!(from_cfg.status.code(), Some(0));
    let flags = obesov(&["young", "check", "--config", c, "--phi", "pow:2"]);
    assert_eq!(value(&stdout(&flags), "phi"), "pow:2");
    std::fs::write(&cfg, "phi = \"pow:1.5\"\nbogus = 1\n").unwrap();
    assert_eq!(obesov(&["young", "check", "--config", c]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_writes_report_and_plot_series() {
    let dir = scratch("plot");
    let prefix = dir.join("rn");
    let o = obesov(&[
        "verify", "rn-balls", "--phi", "pow:1.5", "--alpha", "-1", "--radii", "2,4", "--outer", "1024", "--radial",
        "32", "--plot", prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t = stdout(&o);
    assert!(t.starts_with("experiment,trial,split,label,lhs,rhs,ratio,pass\n"));
    assert!(t.lines().last().unwrap().contains("pass=true"));
    let drift = std::fs::read_to_string(dir.join("rn.drift.dat")).unwrap();
    assert_eq!(drift.lines().filter(|l| !l.starts_with('#')).count(), 2);
    assert!(dir.join("rn.ratio.dat").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn violations_exit_two() {
    // tip cutoffs on a cusp outgrow a constant fitted on the coarse ones
    let o = obesov(&[
        "verify", "imbedding", "--phi", "pow:1.5", "--alpha", "-1", "--domain", "cusp:2", "--eps",
        "0.125,0.03125,0.0078125,0.001953125", "--seed", "7", "--outer", "512", "--radial", "16",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().last().unwrap().contains("pass=false"));
}

#[test]
fn seed_changes_output() {
    let args = |seed: &'static str| {
        ["verify", "geom-ineq", "--phi", "pow:1.5", "--alpha", "-1", "--trials", "10", "--outer", "256", "--radial", "16", "--seed", seed]
    };
    let a = obesov(&args("1"));
    let b = obesov(&args("1"));
    let c = obesov(&args("2"));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
