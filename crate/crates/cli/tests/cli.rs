use std::process::{Command, Output};

fn micromaser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_micromaser"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_csv_layout() {
    let o = micromaser(&["sweep", "--alpha", "0", "--steps", "3", "--gt-end", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "gt,concurrence,eof\n0,0,0\n0.5,0,0\n1,0,0\n");
}

#[test]
fn sweep_rows_ascend_and_stay_in_range() {
    let o = micromaser(&["sweep", "--field", "squeezed", "--mean", "1", "--r", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gt,concurrence,eof"));
    let mut prev = f64::NEG_INFINITY;
    let mut count = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[0] > prev);
        assert!((0.0..=1.0).contains(&v[1]) && (0.0..=1.0).contains(&v[2]));
        prev = v[0];
        count += 1;
    }
    assert_eq!(count, 512);
}

#[test]
fn compare_against_itself_has_equal_columns() {
    let o = micromaser(&["compare", "--mean", "0.3", "--steps", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("gt,concurrence_a,eof_a,concurrence_b,eof_b")
    );
    let mut peaks = Vec::new();
    for line in lines {
        if let Some(comment) = line.strip_prefix("# ") {
            peaks.push(comment.to_string());
            continue;
        }
        let v: Vec<&str> = line.split(',').collect();
        assert_eq!((v[1], v[2]), (v[3], v[4]));
    }
    assert_eq!(peaks.len(), 4);
    let value = |key: &str| {
        peaks
            .iter()
            .find_map(|p| p.strip_prefix(key))
            .unwrap()
            .to_string()
    };
    assert_eq!(value("peak_eof_a="), value("peak_eof_b="));
    assert_eq!(value("peak_gt_a="), value("peak_gt_b="));
}

#[test]
fn oracle_check_reports_pass() {
    let o = micromaser(&[
        "oracle-check",
        "--field",
        "squeezed",
        "--mean",
        "50",
        "--r",
        "1",
        "--steps",
        "64",
        "--tail-tol",
        "1e-14",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("points=64\n"));
    assert!(text.ends_with("status=pass\n"));
}

#[test]
fn writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = micromaser(&[
        "sweep",
        "--alpha",
        "1",
        "--steps",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("gt,concurrence,eof\n"));
}

#[test]
fn configuration_errors_exit_with_one() {
    for args in [
        &["sweep", "--alpha", "1", "--mean", "1"][..],
        &["sweep"],
        &["sweep", "--alpha", "-1"],
        &["sweep", "--alpha", "1", "--r", "0.5"],
        &["sweep", "--field", "squeezed", "--mean", "0.1", "--r", "1"],
        &["sweep", "--alpha", "1", "--steps", "1"],
        &["sweep", "--alpha", "1", "--gt-start", "3", "--gt-end", "2"],
        &[
            "sweep", "--field", "squeezed", "--alpha", "1", "--r", "-0.5",
        ],
        &["sweep", "--alpha", "1", "--tail-tol", "0"],
        &["frobnicate"],
    ] {
        let o = micromaser(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(micromaser(&["--help"]).status.code(), Some(0));
    assert_eq!(micromaser(&["--version"]).status.code(), Some(0));
}

#[test]
fn seed_is_accepted_and_ignored() {
    let a = micromaser(&["sweep", "--alpha", "1", "--steps", "8"]);
    let b = micromaser(&["sweep", "--alpha", "1", "--steps", "8", "--seed", "99"]);
    assert_eq!(a.stdout, b.stdout);
}
