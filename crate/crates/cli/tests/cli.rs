use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringcover"))
        .arg("--no-timestamp")
        .args(args)
        .env_remove("RINGCOVER_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn classify_order_four() {
    let o = run(&["classify", "--order", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("4 classes, matched catalog 2.1\u{2013}2.4\n"));
}

#[test]
fn classify_order_eight_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "classify",
        "--order",
        "8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("5 classes, matched catalog 2.5\u{2013}2.9\n"));
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 10);
    let cert = dir.path().join("good-8-1.cert.json");
    let v = run(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
}

#[test]
fn classify_rejects_other_orders() {
    assert_eq!(code(&run(&["classify", "--order", "5"])), 2);
}

#[test]
fn sigma_of_matrix_rings() {
    let o = run(&["sigma", "--matrix", "2", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("formula 4, brute-force 4, AGREE\n"));
    let o = run(&["sigma", "--matrix", "6", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "formula 57010, brute-force skipped (budget)\n");
    assert_eq!(code(&run(&["sigma", "--matrix", "2", "6"])), 2);
    assert_eq!(code(&run(&["sigma", "--matrix", "1", "2"])), 2);
}

#[test]
fn sigma_of_ring_files() {
    let dir = tempfile::tempdir().unwrap();
    let gf4 = dir.path().join("gf4.ring");
    std::fs::write(
        &gf4,
        r#"{"moduli":[2,2],"table":[[[1,0],[0,1]],[[0,1],[1,1]]]}"#,
    )
    .unwrap();
    let o = run(&["sigma", "--ring", gf4.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("NotCoverable"));

    let ex5 = dir.path().join("ex5.ring");
    let c = run(&["catalog", "--id", "5", "--out", ex5.to_str().unwrap()]);
    assert_eq!(code(&c), 0);
    let cert = dir.path().join("ex5.cert");
    let o = run(&[
        "sigma",
        "--ring",
        ex5.to_str().unwrap(),
        "--cert-out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("sigma 3\n"));
    assert_eq!(code(&run(&["verify-cert", cert.to_str().unwrap()])), 0);

    let bad = dir.path().join("bad.ring");
    std::fs::write(&bad, r#"{"moduli":[2],"table":[[[3]]]}"#).unwrap();
    assert_eq!(code(&run(&["sigma", "--ring", bad.to_str().unwrap()])), 2);
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "section6"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("6 claims\n"));
    assert_eq!(out.matches(": PASS").count(), 6);

    let o = run(&["verify", "--suite", "unbeatable", "3", "2"]);
    assert_eq!(code(&o), 0);
    for i in 1..=4 {
        assert!(stdout(&o).contains(&format!("condition ({i})")));
    }
    assert!(!stdout(&o).contains("FAIL"));

    let o = run(&["verify", "--suite", "cover", "2", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("81/81 elements covered"));
    assert!(stdout(&o).contains("certificate verified: PASS"));

    for suite in ["examples", "theorem2"] {
        let o = run(&["verify", "--suite", suite]);
        assert_eq!(code(&o), 0, "{suite}: {}", stdout(&o));
    }
    assert_eq!(code(&run(&["verify", "--suite", "nonsense"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "cover", "2"])), 2);
}

#[test]
fn cover_certificates_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("m62.json");
    let o = run(&[
        "sigma",
        "--matrix",
        "6",
        "2",
        "--cert-out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = run(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));

    let text = std::fs::read_to_string(&cert)
        .unwrap()
        .replace("\"57010\"", "\"57011\"");
    std::fs::write(&cert, text).unwrap();
    assert_eq!(code(&run(&["verify-cert", cert.to_str().unwrap()])), 1);
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    for args in [
        &["classify", "--order", "8"][..],
        &["verify", "--suite", "cover", "3", "2"],
        &["verify", "--suite", "theorem2"],
    ] {
        let one = run(&[&["--jobs", "1"], args].concat());
        let two = run(&[&["--jobs", "3"], args].concat());
        assert_eq!(stdout(&one), stdout(&two));
        assert_eq!(stdout(&one), stdout(&run(args)));
    }
}

#[test]
fn timestamp_line_is_optional() {
    let o = Command::new(env!("CARGO_BIN_EXE_ringcover"))
        .args(["catalog", "--id", "1"])
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("timestamp: "));
    assert!(!stdout(&run(&["catalog", "--id", "1"])).contains("timestamp"));
}

#[test]
fn catalog_listing() {
    let o = run(&["catalog"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 10);
    assert_eq!(code(&run(&["catalog", "--id", "11"])), 2);
}
