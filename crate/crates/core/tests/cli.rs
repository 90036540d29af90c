use std::process::{Command, Output};

fn trisum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trisum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compute_values() {
    let cases: &[(&[&str], &str)] = &[
        (&["compute", "trep", "--n", "7", "--r", "2"], "2"),
        (&["compute", "divsum", "--n", "1"], "-1"),
        (&["compute", "divsum", "--n", "3"], "-4/3"),
        (&["compute", "bell", "--n", "3", "--k", "2"], "0"),
        (&["compute", "bell", "--n", "6", "--k", "1"], "720"),
        (&["compute", "rhs", "--n", "2"], "1/2"),
        (
            &["compute", "psi", "--order", "10"],
            "[1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1]",
        ),
    ];
    for (args, expected) in cases {
        let out = trisum(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out).trim(), *expected, "{args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["verify", "lemma9"],
        &["verify", "theorem", "--bound", "0"],
        &["verify", "theorem", "--jobs", "0"],
        &["verify", "theorem", "--format", "xml"],
        &["compute", "bell", "--n", "3"],
        &["compute", "bell", "--n", "3", "--k", "4"],
        &["compute", "divsum", "--n", "0"],
        &["compute", "psi"],
        &["compute", "zeta", "--n", "3"],
        &[],
    ];
    for args in cases {
        let out = trisum(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = trisum(&["compute", "bell", "--n", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--k"));
}

#[test]
fn verify_passes_and_reports() {
    let out = trisum(&["verify", "theorem", "--bound", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["check"], "theorem");
    assert_eq!(v["bound"], 3);
    assert_eq!(v["total_cases"], 3);
    assert_eq!(v["failures"], serde_json::json!([]));

    let out = trisum(&["verify", "product", "--bound", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(text.contains("product"));
}

#[test]
fn fault_injection_exits_1_with_witnesses() {
    let out = trisum(&[
        "verify",
        "theorem",
        "--bound",
        "10",
        "--format",
        "csv",
        "--inject-fault",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,bound,indices,lhs,rhs"));
    // t_2(7) + 1 only disturbs n = 7.
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("theorem,10,7,"));
}

#[test]
fn repeated_runs_are_identical_modulo_time() {
    let strip = |out: Output| -> Vec<serde_json::Value> {
        stdout(&out)
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("elapsed_ms");
                v
            })
            .collect()
    };
    let args = ["verify", "oracle", "--bound", "12", "--format", "json"];
    assert_eq!(strip(trisum(&args)), strip(trisum(&args)));
}
