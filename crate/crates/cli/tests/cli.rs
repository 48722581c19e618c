use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cavnet");

fn cavnet(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn cavnet")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Value of `key = value` in text output.
fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(" = "))
        .unwrap_or_else(|| panic!("no {key} in:\n{text}"))
        .parse()
        .unwrap()
}

fn assert_single_error(o: &Output, exit: i32, code: &str) {
    assert_eq!(o.status.code(), Some(exit), "stderr: {}", stderr(o));
    let err = stderr(o);
    let lines: Vec<&str> = err.lines().filter(|l| !l.starts_with("WARN: ")).collect();
    assert_eq!(lines.len(), 1, "{err}");
    assert!(lines[0].starts_with(&format!("error: {code}: ")), "{err}");
    assert!(o.stdout.is_empty(), "data stream must stay clean");
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cavnet-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn steady_example_sym() {
    let o = cavnet(&["steady", "--preset", "example-sym"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!((field(&s, "alpha_re") - 10.0).abs() < 1e-9);
    assert!((field(&s, "alpha_im") + 10.0).abs() < 1e-9);
    assert!((field(&s, "beta_abs") - 10.0).abs() < 1e-9);
}

#[test]
fn steady_zero_drive_gives_zero_fields() {
    let o = cavnet(&["steady", "--preset", "example-sym", "--drive-re", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for key in ["alpha_re", "alpha_im", "beta_re", "beta_im"] {
        assert_eq!(field(&s, key), 0.0);
    }
}

#[test]
fn coupling_zero_drive_gives_zero_coupling() {
    let o = cavnet(&["coupling", "--preset", "example-sym", "--drive-re", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for key in ["j_oracle", "j_closed", "j_paper", "theta1", "theta2"] {
        assert_eq!(field(&s, key), 0.0, "{key}");
    }
}

#[test]
fn resonant_recycling_exits_2() {
    let o = cavnet(&[
        "steady",
        "--preset",
        "example-sym",
        "--delta",
        "0",
        "--phi12",
        "0",
        "--phi21",
        "0",
    ]);
    assert_single_error(&o, 2, "resonant-recycling");
    assert!(stderr(&o).contains("denominator"));
    let o = cavnet(&["coupling", "--delta", "0", "--phi12", "0", "--phi21", "0"]);
    assert_single_error(&o, 2, "resonant-recycling");
}

#[test]
fn coupling_symmetric_has_no_theta_warning() {
    let o = cavnet(&["coupling", "--preset", "example-sym"]);
    assert!(o.status.success());
    assert!((field(&stdout(&o), "j_oracle") + 2.0).abs() < 1e-9);
    assert!(!stderr(&o).contains("theta1 != theta2"));
}

#[test]
fn coupling_asymmetric_warns() {
    let o = cavnet(&["coupling", "--preset", "example-asym"]);
    assert!(o.status.success());
    let warn: Vec<String> = stderr(&o)
        .lines()
        .filter(|l| l.contains("theta1 != theta2"))
        .map(String::from)
        .collect();
    assert_eq!(warn.len(), 1);
    assert!(warn[0].starts_with("WARN: "));
    let s = stdout(&o);
    assert!((field(&s, "j_oracle") - field(&s, "j_closed")).abs() < 1e-12);
}

#[test]
fn regime_warning_names_the_inequality() {
    let o = cavnet(&["steady", "--gamma", "1", "--chi", "1", "--drive-re", "100"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("γ/χ not ≫ 1"), "{}", stderr(&o));
}

#[test]
fn evolve_rows_and_first_row() {
    let o = cavnet(&["evolve", "--eta", "0.1", "--tau-max", "1", "--step", "0.01"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "tau,entanglement");
    assert_eq!(lines[1], "0.00000000,0.00000000");
    assert_eq!(lines.len() - 1, 101);
    assert!(s.ends_with('\n') && !s.contains('\r'));
}

#[test]
fn evolve_bad_grid_exits_1() {
    let o = cavnet(&["evolve", "--step", "0.5"]);
    assert_single_error(&o, 1, "bad-grid");
    let o = cavnet(&["evolve", "--tau-max", "-1"]);
    assert_single_error(&o, 1, "bad-grid");
}

#[test]
fn evolve_is_byte_identical() {
    let args = ["evolve", "--eta", "0.2", "--tau-max", "50", "--step", "0.01"];
    assert_eq!(cavnet(&args).stdout, cavnet(&args).stdout);
}

#[test]
fn taustar_order_and_duplicates() {
    let o = cavnet(&["taustar", "--etas", "0.4,0.2,0.1,0.05,0.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    let rows: Vec<Vec<f64>> = s
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let etas: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(etas, [0.4, 0.2, 0.1, 0.05, 0.1]);
    assert!(rows[..4].windows(2).all(|w| w[1][1] > w[0][1]));
    assert_eq!(rows[2], rows[4]);
    assert!(rows.iter().all(|r| r[2] >= 0.99));
}

#[test]
fn taustar_log_spaced() {
    let o = cavnet(&["taustar", "--log-etas", "0.05,0.4,4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn taustar_rejects_bad_lists() {
    let o = cavnet(&["taustar", "--etas", ""]);
    assert_single_error(&o, 1, "usage");
    let o = cavnet(&["taustar", "--etas", "0.1,-0.2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn feasibility_defaults() {
    let o = cavnet(&["feasibility"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!((field(&s, "j_estimate[nbar=100]") - 50.3).abs() < 0.05);
    assert!((field(&s, "gamma_f_power") - 0.0806).abs() < 1e-4);
}

#[test]
fn feasibility_zero_photons_gives_zero_coupling() {
    let o = cavnet(&["feasibility", "--nbar", "0"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "j_estimate[nbar=0]"), 0.0);
}

#[test]
fn feasibility_invalid_override_exits_1() {
    let o = cavnet(&["feasibility", "--nbar", "-5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn validate_default_and_other_seed_pass() {
    let o = cavnet(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS ")).count(), 4);
    let o = cavnet(&["validate", "--seed", "12345"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn validate_impossible_tolerance_exits_3() {
    let o = cavnet(&["validate", "--tolerance", "1e-18"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL "));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: validation-failed: "));
}

#[test]
fn config_file_sits_between_flags_and_preset() {
    let path = scratch("sym.conf");
    std::fs::write(&path, "# example\npreset = example-sym\ndrive-re = 20\nchi = 0.2\n").unwrap();
    let p = path.to_str().unwrap();
    let s = stdout(&cavnet(&["steady", "--config", p]));
    assert_eq!(field(&s, "drive_re"), 20.0);
    assert_eq!(field(&s, "chi"), 0.2);
    assert_eq!(field(&s, "gamma"), 1.0);
    let s = stdout(&cavnet(&["steady", "--config", p, "--chi", "0.3"]));
    assert_eq!(field(&s, "chi"), 0.3);
    assert_eq!(field(&s, "drive_re"), 20.0);
}

#[test]
fn config_errors_exit_1() {
    let path = scratch("bad.conf");
    std::fs::write(&path, "colour = blue\n").unwrap();
    let o = cavnet(&["steady", "--config", path.to_str().unwrap()]);
    assert_single_error(&o, 1, "config");
    let o = cavnet(&["steady", "--config", "/nonexistent/cavnet.conf"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("coupling.csv");
    let o = cavnet(&[
        "coupling",
        "--preset",
        "example-sym",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("quantity,value\n"));
    assert!(text.contains("\nj_oracle,-2.00000000\n"));
}

#[test]
fn usage_errors_are_single_lines() {
    assert_single_error(&cavnet(&["steady", "--bogus"]), 1, "usage");
    assert_single_error(&cavnet(&["steady", "--gamma", "abc"]), 1, "usage");
    assert_single_error(&cavnet(&["steady", "--threads", "0"]), 1, "usage");
    assert_single_error(&cavnet(&[]), 1, "usage");
    assert_single_error(&cavnet(&["frobnicate"]), 1, "usage");
}

#[test]
fn help_exits_0() {
    let o = cavnet(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("taustar"));
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["cavnet", "coupling", "--preset", "example-asym"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cavnet_cli::run(args, &mut out, &mut err);
    let o = cavnet(&args[1..]);
    assert_eq!(Some(code), o.status.code());
    assert_eq!(out, o.stdout);
    assert_eq!(err, o.stderr);
}
