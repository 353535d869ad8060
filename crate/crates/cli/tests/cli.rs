use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn signlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signlab"))
        .args(args)
        .env_remove("SIGNLAB_CACHE_DIR")
        .output()
        .expect("run signlab")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gl2_f3_transpose_inverse_signs_are_all_plus() {
    let out = signlab(&[
        "finite",
        "signs",
        "--group",
        "gl",
        "--n",
        "2",
        "--q",
        "3",
        "--involution",
        "transpose-inverse",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "signlab.sign-report/1");
    let rows = v["result"]["signs"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["indicator"] == 1));

    let csv = signlab(&["finite", "signs", "--n", "2", "--q", "3", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert_eq!(
        text.lines().next(),
        Some("character,degree,indicator,self_theta_dual")
    );
}

#[test]
fn siegel_b3_check_passes() {
    let out = signlab(&[
        "roots",
        "check",
        "--family",
        "B",
        "--rank",
        "3",
        "--theta",
        "neg-id",
        "--parabolic",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "signlab.hypothesis-report/1");
    for key in [
        "order_two",
        "permutes_roots",
        "swaps_nilradicals",
        "levi_stable",
        "modulus_identity",
        "all_pass",
    ] {
        assert_eq!(v[key], true, "{key}");
    }
}

#[test]
fn failing_hypothesis_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.txt");
    std::fs::write(&t, "0 -1\n-1 0\n").unwrap();
    let out = signlab(&[
        "roots",
        "check",
        "--family",
        "A",
        "--rank",
        "2",
        "--theta",
        path(&t),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["swaps_nilradicals"], false);
}

#[test]
fn chamber_certificate_for_one_triple_and_all_fixtures() {
    let out = signlab(&[
        "roots",
        "chamber-cert",
        "--family",
        "A",
        "--rank",
        "4",
        "--parabolic",
        "2",
        "--samples",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "signlab.chamber-certificate/1");
    assert_eq!(v["checked"], 50);

    let all = signlab(&["roots", "chamber-cert", "--samples", "20", "--seed", "5"]);
    assert_eq!(all.status.code(), Some(0));
    assert!(json(&all)["result"]["fixtures"].as_array().unwrap().len() > 50);
}

#[test]
fn empty_suite_is_an_empty_summary() {
    let out = signlab(&["suite", "empty"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "signlab.suite-summary/1");
    assert_eq!(v["members"].as_array().unwrap().len(), 0);
    assert_eq!(v["ok"], true);
}

#[test]
fn config_errors_exit_two_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("out.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["finite", "signs", "--n", "2", "--q", "6"],
        vec!["finite", "signs", "--n", "2"],
        vec![
            "finite",
            "signs",
            "--n",
            "2",
            "--q",
            "3",
            "--involution",
            "frobenius",
        ],
        vec!["finite", "table", "--n", "2", "--q", "3", "--format", "csv"],
        vec!["finite", "signs", "--n", "4", "--q", "5"],
        vec!["finite", "signs", "--n", "2", "--q", "3", "--threads", "0"],
        vec!["finite", "signs", "--n", "2", "--q", "3", "--family", "A"],
        vec![
            "finite",
            "descent",
            "--n",
            "2",
            "--q",
            "3",
            "--involution",
            "identity",
            "--theta-subset",
            "3",
        ],
        vec!["roots", "check", "--family", "C", "--rank", "2"],
        vec![
            "roots",
            "check",
            "--family",
            "A",
            "--rank",
            "3",
            "--parabolic",
            "5",
        ],
        vec!["suite", "empty", "--n", "2"],
        vec!["suite", "bogus"],
    ];
    for mut args in cases {
        args.extend(["--out", path(&out_file)]);
        let out = signlab(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
        assert_eq!(
            std::fs::read_dir(dir.path()).unwrap().count(),
            0,
            "{args:?} left an artifact"
        );
    }
}

#[test]
fn non_involutive_inner_automorphism_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.txt");
    // h² = [[1,1],[1,2]] is not central, so Int(h) is not an involution.
    std::fs::write(&h, "0 1\n1 1\n").unwrap();
    let out = signlab(&[
        "finite",
        "signs",
        "--n",
        "2",
        "--q",
        "3",
        "--involution",
        &format!("inner:{}", path(&h)),
    ]);
    assert_eq!(out.status.code(), Some(2));
    // A unipotent h has θ(h)h non-central, so Int(h) ∘ θ is not an involution.
    std::fs::write(&h, "1 1\n0 1\n").unwrap();
    let shift = signlab(&["finite", "shift", "--n", "2", "--q", "3", "--h", path(&h)]);
    assert_eq!(shift.status.code(), Some(2));
}

#[test]
fn antisymmetric_shift_from_a_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.txt");
    std::fs::write(&h, "0 1\n-1 0\n").unwrap();
    let out = signlab(&["finite", "shift", "--n", "2", "--q", "3", "--h", path(&h)]);
    assert_eq!(out.status.code(), Some(0));
    let checks = json(&out)["result"]["checks"].as_array().unwrap().clone();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().any(|c| c["lhs"] == -1));
    assert!(checks.iter().all(|c| c["ok"] == true));
}

#[test]
fn composed_involution_preserving_the_borel() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    std::fs::write(&w, "0 1\n1 0\n").unwrap();
    let out = signlab(&[
        "finite",
        "signs",
        "--n",
        "2",
        "--q",
        "3",
        "--involution",
        &format!("composed:{}", path(&w)),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["result"]["signs"]["rows"]
        .as_array()
        .unwrap()
        .clone();
    assert!(rows.iter().all(|r| r["indicator"] == 1));
}

#[test]
fn counting_and_descent_subcommands() {
    let out = signlab(&["finite", "counting", "--n", "2", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["lhs"], 18);
    assert_eq!(v["result"]["rhs"], 18);

    let id = signlab(&[
        "finite",
        "counting",
        "--n",
        "2",
        "--q",
        "3",
        "--involution",
        "identity",
    ]);
    assert_eq!(json(&id)["result"]["rhs"], 14);

    let d = signlab(&[
        "finite",
        "descent",
        "--n",
        "3",
        "--q",
        "2",
        "--theta-subset",
        "1",
    ]);
    assert_eq!(d.status.code(), Some(0));
    let s = &json(&d)["result"]["summary"];
    assert_eq!(s["disagreed"], 0);
    assert!(s["agreed"].as_u64().unwrap() > 0);
}

#[test]
fn seeded_shift_is_reproducible() {
    let args = [
        "finite", "shift", "--n", "2", "--q", "5", "--count", "10", "--seed", "9",
    ];
    let a = signlab(&args);
    let b = signlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["checks"].as_array().unwrap().len(), 10);
}

#[test]
fn config_file_mirrors_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "group = \"sl\"\nn = 2\nq = 3\ninvolution = \"identity\"\n",
    )
    .unwrap();
    let out = signlab(&["finite", "signs", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["signs"]["summary"]["minus"], 1);

    // Flags override the file.
    let over = signlab(&["finite", "signs", "--config", path(&cfg), "--group", "gl"]);
    assert_eq!(
        json(&over)["result"]["signs"]["rows"]
            .as_array()
            .unwrap()
            .len(),
        8
    );

    std::fs::write(&cfg, "n = 2\nq = 3\ncolour = \"blue\"\n").unwrap();
    let bad = signlab(&["finite", "signs", "--config", path(&cfg)]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cache_directory_from_flag_or_environment() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = signlab(&["finite", "table", "--n", "2", "--q", "4"]);
    let first = signlab(&[
        "finite",
        "table",
        "--n",
        "2",
        "--q",
        "4",
        "--cache",
        path(dir.path()),
    ]);
    let cached = signlab(&[
        "finite",
        "table",
        "--n",
        "2",
        "--q",
        "4",
        "--cache",
        path(dir.path()),
    ]);
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(first.stdout, cached.stdout);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 2);

    let env_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_signlab"))
        .args(["finite", "build", "--n", "2", "--q", "3"])
        .env("SIGNLAB_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
}

#[test]
fn out_file_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("signs.json");
    let out = signlab(&[
        "finite",
        "signs",
        "--n",
        "2",
        "--q",
        "2",
        "--out",
        path(&file),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["ok"], true);
}

#[test]
fn pretty_output_has_a_status_line() {
    let out = signlab(&[
        "finite", "build", "--n", "2", "--q", "3", "--format", "pretty",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("GL(2,3): order 48, 8 classes"));
    assert!(text.ends_with("status: ok\n"));
}

#[test]
fn small_suites_pass() {
    for suite in ["gow-macdonald-sweep", "sign-laws"] {
        let out = signlab(&["suite", suite, "--cap", "500", "--count", "10"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let v = json(&out);
        assert_eq!(v["suite"], suite);
        assert!(v["passed"].as_u64().unwrap() >= 3);
        assert_eq!(v["failed"], 0);
    }
}
