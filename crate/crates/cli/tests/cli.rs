use std::process::{Command, Output};

use serde_json::Value;

fn fuchsian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuchsian"))
        .args(args)
        .env_remove("FUCHSIAN_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap()
}

#[test]
fn epi_example_json() {
    let out = fuchsian(&[
        "epi",
        "--signature",
        "(2;9,36,125,500)",
        "--n",
        "9000",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], "7381125000000000000");
    assert_eq!(v["period_lcm"], "4500");
    assert_eq!(v["signature"], "(2;9,36,125,500)");
    assert_eq!(v["e_p"]["2"], 2);
}

#[test]
fn genus_and_periods_flags_match_signature_flag() {
    let a = json(&fuchsian(&[
        "hom",
        "--signature",
        "(1;2,3)",
        "--d",
        "12",
        "--format",
        "json",
    ]));
    let b = json(&fuchsian(&[
        "hom",
        "--genus",
        "1",
        "--periods",
        "3,2",
        "--d",
        "12",
        "--format",
        "json",
    ]));
    assert_eq!(a["count"], b["count"]);
    assert_eq!(a["signature"], b["signature"]);
}

#[test]
fn harvey_reports_both_condition_sets() {
    let out = fuchsian(&[
        "harvey",
        "--signature",
        "(1;2,3,4)",
        "--n",
        "24",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["e_p"]["2"], 1);
    assert_eq!(v["e_p"]["3"], 1);
    assert_eq!(v["harvey"]["admissible"], false);
    assert_eq!(v["ep_form"]["admissible"], false);
    assert!(!v["harvey"]["failed"].as_array().unwrap().is_empty());
}

#[test]
fn ramanujan_verify() {
    let out = fuchsian(&["ramanujan", "--n", "6", "--m", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("c_6(2) = -1"), "{text}");
    assert!(text.contains("oracle=agree"), "{text}");
}

#[test]
fn congruence_reports_clause() {
    let out = fuchsian(&[
        "congruence",
        "--n",
        "12",
        "--terms",
        "1:6,1:4,1:3",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["count"], "0");
    assert_eq!(v["verdict"]["kind"], "no_solution");
    assert_eq!(v["verdict"]["clause"], "iii");
    assert_eq!(v["verdict"]["prime"], "2");
}

#[test]
fn json_round_trips_byte_for_byte() {
    let runs: [&[&str]; 4] = [
        &[
            "epi",
            "--signature",
            "(2;9,36,125,500)",
            "--n",
            "9000",
            "--verify",
            "--budget",
            "1",
            "--format",
            "json",
        ],
        &[
            "harvey",
            "--signature",
            "(0;6,6)",
            "--n",
            "6",
            "--verify",
            "--format",
            "json",
        ],
        &[
            "congruence",
            "--n",
            "4500",
            "--terms",
            "1:1,1:1",
            "--verify",
            "--format",
            "json",
        ],
        &[
            "sweep",
            "--max-genus",
            "1",
            "--max-k",
            "2",
            "--max-period",
            "4",
            "--max-n",
            "6",
            "--verify",
            "--format",
            "json",
        ],
    ];
    for args in runs {
        let out = fuchsian(args);
        for line in stdout(&out).lines() {
            let value: Value = serde_json::from_str(line).unwrap();
            assert_eq!(serde_json::to_string(&value).unwrap(), line);
        }
    }
}

#[test]
fn verify_never_changes_counts() {
    let base = [
        "epi",
        "--signature",
        "(1;2,2)",
        "--n",
        "4",
        "--format",
        "json",
    ];
    let plain = json(&fuchsian(&base));
    let mut with_verify = base.to_vec();
    with_verify.push("--verify");
    let checked = fuchsian(&with_verify);
    assert_eq!(checked.status.code(), Some(0));
    let checked = json(&checked);
    assert_eq!(plain["count"], checked["count"]);
    assert_eq!(checked["verification"]["verified"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        fuchsian(&["ramanujan", "--n", "x", "--m", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fuchsian(&["epi", "--signature", "(1;2", "--n", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fuchsian(&["congruence", "--n", "6", "--terms", "1:"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(fuchsian(&["bogus"]).status.code(), Some(1));
    assert_eq!(fuchsian(&["--help"]).status.code(), Some(0));
    assert_eq!(
        fuchsian(&["epi", "--signature", "(1;2)", "--n", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fuchsian(&["epi", "--signature", "(1;1)", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fuchsian(&["congruence", "--n", "6", "--terms", "1:4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fuchsian(&[
            "epi",
            "--signature",
            "(3;2,2)",
            "--n",
            "1000",
            "--verify",
            "--budget",
            "1000"
        ])
        .status
        .code(),
        Some(4)
    );
}

#[test]
fn budget_flag_overrides_environment() {
    let args = ["epi", "--signature", "(0;2,2,2)", "--n", "2", "--verify"];
    let env_only = Command::new(env!("CARGO_BIN_EXE_fuchsian"))
        .args(args)
        .env("FUCHSIAN_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(env_only.status.code(), Some(4));
    let flag = Command::new(env!("CARGO_BIN_EXE_fuchsian"))
        .args(args)
        .args(["--budget", "100"])
        .env("FUCHSIAN_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn sweep_marks_skipped_oracles_and_keeps_order() {
    let out = fuchsian(&[
        "sweep",
        "--max-genus",
        "1",
        "--max-k",
        "1",
        "--max-period",
        "3",
        "--max-n",
        "4",
        "--verify",
        "--budget",
        "16",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2 * 3 * 4);
    assert_eq!(lines[0]["signature"], "(0;)");
    assert_eq!(lines[0]["n"], "1");
    assert_eq!(lines[23]["signature"], "(1;3)");
    assert_eq!(lines[23]["n"], "4");
    assert!(lines
        .iter()
        .any(|l| l["verification"]["oracle"] == "skipped"));
    assert!(lines
        .iter()
        .all(|l| l["verification"]["inversion"] == "agree"));
}
