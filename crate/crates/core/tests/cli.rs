use std::process::{Command, Output};

fn spinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_each_suite_passes() {
    for suite in ["spinfactor", "normlab", "clifford", "observer"] {
        for mode in ["integer", "float"] {
            let out = spinlab(&["verify", "--suite", suite, "--mode", mode, "--trials", "50"]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{suite} {mode}: {}",
                stdout(&out)
            );
        }
    }
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = spinlab(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn bad_flags_are_usage_errors() {
    for args in [
        &["verify", "--trials", "0"][..],
        &["verify", "--tol", "-1"],
        &["verify", "--mode", "rational"],
        &["norm", "--point", "1,2,3"],
        &["quad", "--a", "1,2,3,4", "--b", "x,6,7,8"],
        &["uncurl", "--samples", "0"],
        &["uncurl", "--signature", "0,0"],
        &["frobnicate"],
    ] {
        assert_eq!(spinlab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let out = spinlab(&["verify", "--suite", "spinfactor", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL spinfactor/bullet_bilinear"));
}

#[test]
fn json_report_is_byte_stable_and_well_formed() {
    let dir = std::env::temp_dir().join(format!("spinlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let paths = [dir.join("1.json"), dir.join("2.json")];
    for p in &paths {
        let out = spinlab(&[
            "verify",
            "--suite",
            "observer",
            "--seed",
            "7",
            "--json",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (
        std::fs::read(&paths[0]).unwrap(),
        std::fs::read(&paths[1]).unwrap(),
    );
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.ends_with("}\n"));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["suite"], "observer");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
    let case = &v["cases"][0];
    assert_eq!(case.as_object().unwrap().len(), 3);
    assert_eq!(case["status"], "pass");
}

#[test]
fn norm_examples() {
    let out = spinlab(&["norm", "--point", "1,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("diff        0.000e0"));

    let out = spinlab(&["norm", "--point", "2,1,0,0", "--steps", "512"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let diff: f64 = text
        .lines()
        .last()
        .unwrap()
        .split_whitespace()
        .last()
        .unwrap()
        .parse()
        .unwrap();
    assert!(diff <= 1e-9);
    assert!(text.contains("1.73205080756887"));

    let out = spinlab(&["norm", "--point", "1,1,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("null cone"));
}

#[test]
fn quad_examples() {
    let out = spinlab(&["quad", "--a", "1,2,3,4", "--b", "5,6,7,8", "--v", "0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let values: Vec<f64> = stdout(&out)
        .lines()
        .map(|l| l.split_whitespace().last().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values[..2], [16.0, 16.0]);
    assert!((values[2] - 16.0).abs() <= 1e-9);

    let out = spinlab(&["quad", "--a", "1,2,3,4", "--b", "1,2,3,4", "--v", "-0.5"]);
    assert_eq!(
        stdout(&out),
        "wedge       0\ndeterminant 0\nboosted     0\n"
    );

    for v in ["1.0", "-1", "inf"] {
        let out = spinlab(&["quad", "--a", "1,2,3,4", "--b", "5,6,7,8", "--v", v]);
        assert_eq!(out.status.code(), Some(2), "v = {v}");
    }
}

#[test]
fn uncurl_reports_identity_for_default_signature() {
    let out = spinlab(&["uncurl"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("solution_family_dim 0"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip_while(|l| !l.starts_with("L ="))
        .skip(1)
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert!((x - f64::from(u8::from(i == j))).abs() <= 1e-8);
        }
    }
}
