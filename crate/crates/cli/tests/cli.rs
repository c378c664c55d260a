use std::path::Path;
use std::process::{Command, Output};

fn zetamean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetamean"))
        .args(args)
        .env_remove("ZETAMEAN_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn compare_preset_writes_deviation_csv() {
    let o = zetamean(&[
        "compare",
        "--preset",
        "fujii",
        "--grid",
        "200,500,1000,2000",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "T,emp_re,emp_im,pred_re,pred_im,ratio_re,ratio_im,deviation"
    );
    let deviations: Vec<f64> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(deviations.len(), 4);
    assert!(deviations[3] < 0.1);
}

#[test]
fn zeros_find_to_one_hundred() {
    let o = zetamean(&["zeros", "find", "--tmax", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let ordinates: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(ordinates.len(), 29);
    assert!(ordinates[0].starts_with("14.134725"));
}

#[test]
fn zero_file_feeds_validate_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zeros.txt");
    let file_arg = file.to_str().unwrap();
    let o = zetamean(&["zeros", "find", "--tmax", "300", "--output", file_arg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = zetamean(&["zeros", "validate", "--zeros-file", file_arg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("300.000000000,"));
    let from_file = zetamean(&[
        "compare",
        "--preset",
        "fujii",
        "--grid",
        "100,300",
        "--zeros-file",
        file_arg,
    ]);
    let computed = zetamean(&["compare", "--preset", "fujii", "--grid", "100,300"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let rows = |o: &Output| {
        stdout(o)
            .lines()
            .skip(1)
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    assert_eq!(rows(&from_file).len(), 2);
    for (a, b) in rows(&from_file).iter().zip(rows(&computed)) {
        let ta: Vec<f64> = a.split(',').map(|v| v.parse().unwrap()).collect();
        let tb: Vec<f64> = b.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((ta[1] - tb[1]).abs() < 1e-8 * tb[1].abs());
    }
    let short = zetamean(&[
        "compare",
        "--preset",
        "fujii",
        "--grid",
        "100,500",
        "--zeros-file",
        file_arg,
    ]);
    assert!(!short.status.success());
}

#[test]
fn malformed_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "command = \"compare\"\n[shift]\nderivative_ordr = 1\n",
    )
    .unwrap();
    let o = zetamean(&["--config", path.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("derivative_ordr"), "{}", stderr(&o));
}

#[test]
fn grid_out_of_order_names_the_pair() {
    let o = zetamean(&["mainterm", "--grid", "500,200"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("500 before 200"), "{}", stderr(&o));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "command = \"mainterm\"\ngrid = [200.0, 300.0]\n[shift]\nderivative_order = 2\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let from_file = stdout(&zetamean(&["--config", cfg]));
    assert_eq!(from_file.lines().count(), 3);
    let overridden = zetamean(&["--config", cfg, "mainterm", "--grid", "400"]);
    assert!(overridden.status.success(), "{}", stderr(&overridden));
    let text = stdout(&overridden);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("400.000000000,"));
    let direct = stdout(&zetamean(&["mainterm", "--m", "2", "--grid", "400"]));
    assert_eq!(text, direct);
}

#[test]
fn output_is_identical_across_worker_counts() {
    let run = |threads: &str| {
        stdout(&zetamean(&[
            "--threads",
            threads,
            "compare",
            "--preset",
            "mollifier",
            "--grid",
            "200,600",
        ]))
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}

#[test]
fn constants_and_main_terms_as_json() {
    let o = zetamean(&["constants", "--format", "json", "--max-order", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_order"], 5);
    let o = zetamean(&[
        "mainterm",
        "--derivative-order",
        "0",
        "--alpha",
        "auto",
        "--grid",
        "1000",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v[0]["pieces"]["curly_f_sum"].is_array());
}

#[test]
fn moments_report_holder_quantities() {
    let o = zetamean(&["moments", "--grid", "100,200"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.starts_with("T,zeros,sigma1_re,sigma1_im,sigma2,holder_bound,moment,leading_ratio\n")
    );
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn output_path_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = zetamean(&["constants", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(Path::new(&path).exists());
}
