use std::fs;
use std::process::{Command, Output};

fn kassembly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kassembly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn series_expands_to_canonical_text() {
    let o = kassembly(&["series", "1 + (t^3+2t^5)/(1-t^4)", "--cutoff", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 + 1*t^3 + 2*t^5 + 1*t^7 + 2*t^9");
}

#[test]
fn series_tsv_and_json() {
    let o = kassembly(&["series", "t^3/(1-t^2)", "--cutoff", "4", "--tsv"]);
    assert_eq!(
        stdout(&o),
        "degree\tcoefficient\n0\t0\n1\t0\n2\t0\n3\t1\n4\t0\n"
    );
    let o = kassembly(&["--json", "series", "1-t", "--cutoff", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1", "-1", "0"]));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(
        kassembly(&["series", "1/t", "--cutoff", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kassembly(&["ktheory", "--preset", "xyz", "--cutoff", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kassembly(&["ktheory", "--preset", "ell", "--prime", "4", "--cutoff", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kassembly(&[
            "oracle-check",
            "--generator-degree",
            "3",
            "--max-degree",
            "4"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(kassembly(&["hh", "--cutoff", "3"]).status.code(), Some(2));
}

#[test]
fn refused_series_exit_two_with_reason() {
    let o = kassembly(&[
        "ktheory", "--preset", "ell", "--prime", "3", "--cutoff", "8",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not finitely generated"));
    let o = kassembly(&["ktheory", "--preset", "ko", "--periodic", "--cutoff", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ktheory_periodic_ku_json() {
    let o = kassembly(&[
        "ktheory",
        "--preset",
        "ku",
        "--periodic",
        "--cutoff",
        "10",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["series"]["text"],
        "1 + 1*t^1 + 1*t^3 + 2*t^5 + 1*t^6 + 1*t^7 + 2*t^9 + 1*t^10"
    );
}

#[test]
fn ktheory_ell_relative_via_periodic() {
    let o = kassembly(&[
        "ktheory",
        "--preset",
        "ell",
        "--prime",
        "5",
        "--periodic",
        "--cutoff",
        "9",
        "--tsv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert_eq!(last, "9\t1\t0\t1");
}

#[test]
fn hh_reads_algebra_file() {
    let dir = std::env::temp_dir().join(format!("kassembly-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("alg.json");
    fs::write(
        &path,
        r#"{"generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 4}]}"#,
    )
    .unwrap();
    let o = kassembly(&[
        "hh",
        "--algebra",
        path.to_str().unwrap(),
        "--cutoff",
        "5",
        "--tsv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next(),
        Some("degree\thh\tkernel\timage\trank\tde_rham")
    );
    assert!(out.lines().skip(2).all(|l| l.ends_with("\t0")));

    let odd = dir.join("odd.json");
    fs::write(&odd, r#"{"generators": [{"name": "u", "degree": 3}]}"#).unwrap();
    let o = kassembly(&[
        "kernel",
        "--algebra",
        odd.to_str().unwrap(),
        "--cutoff",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn kernel_matches_closed_form_for_mu() {
    let o = kassembly(&["kernel", "--preset", "mu", "--cutoff", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));
}

#[test]
fn oracle_check_prints_pass_table() {
    for degree in ["2", "4", "6"] {
        let o = kassembly(&[
            "oracle-check",
            "--generator-degree",
            degree,
            "--max-degree",
            "8",
        ]);
        assert_eq!(o.status.code(), Some(0), "|x| = {degree}");
        let out = stdout(&o);
        assert!(out.starts_with("degree  oracle_dim"));
        assert_eq!(out.lines().filter(|l| l.ends_with("PASS")).count(), 10);
    }
}

#[test]
fn unit_map_reports_degree_eight() {
    let o = kassembly(&["unit-map", "--preset", "mu", "--cutoff", "12"]);
    assert!(stdout(&o).contains("first difference: t^8 (0 vs 1)"));
}

#[test]
fn verify_exits_zero_and_names_labels() {
    let o = kassembly(&["verify", "--cutoff", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for label in [
        "0.1b",
        "0.2b",
        "2.5a",
        "2.5b",
        "2.6",
        "2.12",
        "2.13-series",
        "3.3a",
        "3.3b",
        "3.3c",
        "3.3d",
        "3.4a",
        "3.4b",
        "3.5",
        "4.8",
        "4.9",
    ] {
        assert!(
            out.lines()
                .any(|l| l.split_whitespace().next() == Some(label) && l.contains("PASS")),
            "missing {label}"
        );
    }
    let o = kassembly(&["verify", "--cutoff", "2", "--tsv"]);
    assert_eq!(o.status.code(), Some(0));
}
