use pentaq::cli::{run, EXIT_BUDGET, EXIT_INVALID_ARGS, EXIT_OK, EXIT_VALIDATION};

fn pentaq(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pentaq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn solve_golden() {
    assert_eq!(
        pentaq(&["solve", "--n", "11"]),
        (EXIT_OK, "2 6 7 8\n".into(), String::new())
    );
    assert_eq!(pentaq(&["solve", "--n", "12"]).1, "\n");
    let (code, out, _) = pentaq(&["solve", "--n", "55", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "n,a\n55,19\n55,24\n55,29\n55,39\n");
    let (_, out, _) = pentaq(&["solve", "--n", "31", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["roots"], serde_json::json!([15, 23, 27, 29]));
}

#[test]
fn build_golden() {
    let (code, out, _) = pentaq(&["build", "--n", "5", "--a", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "5\n0 2 4 1 3\n4 1 3 0 2\n3 0 2 4 1\n2 4 1 3 0\n1 3 0 2 4\n"
    );
    let (_, one, _) = pentaq(&["build", "--n", "5", "--a", "4", "--base", "1"]);
    assert!(one.starts_with("base 1\n5\n1 3 5 2 4\n"));
    let (_, csv, _) = pentaq(&["build", "--n", "5", "--a", "4", "--format", "csv"]);
    assert_eq!(csv.lines().next(), Some("0,2,4,1,3"));
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (n, a, base) in [("11", "2", "0"), ("31", "15", "1"), ("61", "41", "0")] {
        let path = dir.path().join(format!("q{n}_{a}.txt"));
        let p = path.to_str().unwrap();
        let (code, _, _) = pentaq(&["build", "--n", n, "--a", a, "--base", base, "--out", p]);
        assert_eq!(code, EXIT_OK);
        let (code, out, _) = pentaq(&["verify", "--input", p]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.ends_with("pentagonal quasigroup: true\n"));
        let (code, out, _) = pentaq(&["decompose", "--input", p, "--e", "3"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("= 0: true"));
        let (_, k, _) = pentaq(&["translate", "--input", p]);
        let (_, kf, _) = pentaq(&["translate", "--n", n, "--a", a, "--format", "csv"]);
        let closed = kf.lines().nth(1).unwrap().split(',').nth(2).unwrap();
        assert_eq!(k.trim(), closed);
    }
}

#[test]
fn verify_rejects_bad_tables() {
    let dir = tempfile::tempdir().unwrap();
    let not_latin = dir.path().join("bad.txt");
    std::fs::write(&not_latin, "3\n0 1 2\n1 1 0\n2 0 1\n").unwrap();
    let (code, out, _) = pentaq(&["verify", "--input", not_latin.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(out.contains("latin: false"));
    let (code, _, err) = pentaq(&["decompose", "--input", not_latin.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.starts_with("error:"));

    // Latin and idempotent but not medial
    let non_medial = dir.path().join("nm.txt");
    std::fs::write(
        &non_medial,
        "5\n0 2 1 4 3\n3 1 4 2 0\n4 3 2 0 1\n1 4 0 3 2\n2 0 3 1 4\n",
    )
    .unwrap();
    let (code, out, _) = pentaq(&["verify", "--input", non_medial.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(out.contains("medial: false"));

    let garbage = dir.path().join("g.txt");
    std::fs::write(&garbage, "2\n0 x\n1 0\n").unwrap();
    let (code, _, err) = pentaq(&["verify", "--input", garbage.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, _) = pentaq(&["verify", "--input", "/nonexistent/table.txt"]);
    assert_eq!(code, EXIT_INVALID_ARGS);
}

#[test]
fn verify_skips_mediality_above_limit() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.txt");
    let p = p.to_str().unwrap();
    pentaq(&["build", "--n", "71", "--a", "14", "--out", p]);
    let (code, out, _) = pentaq(&["verify", "--input", p, "--medial-limit", "50"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(out.contains("medial: skipped"));
}

#[test]
fn argument_errors() {
    assert_eq!(
        pentaq(&["build", "--n", "11", "--a", "3"]).0,
        EXIT_INVALID_ARGS
    );
    assert_eq!(pentaq(&["build", "--n", "11"]).0, EXIT_INVALID_ARGS);
    assert_eq!(pentaq(&["frobnicate"]).0, EXIT_INVALID_ARGS);
    assert_eq!(pentaq(&["solve", "--n", "0"]).0, EXIT_INVALID_ARGS);
    assert_eq!(
        pentaq(&["parastrophe", "--n", "11", "--a", "2", "--which", "6"]).0,
        EXIT_INVALID_ARGS
    );
    assert_eq!(
        pentaq(&["solve", "--n", "11", "--base", "2"]).0,
        EXIT_INVALID_ARGS
    );
    let (code, out, _) = pentaq(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("survey"));
    assert_eq!(pentaq(&["--version"]).0, EXIT_OK);
}

#[test]
fn build_budget_exceeded() {
    // 318505 > 4096
    let (code, _, err) = pentaq(&["build", "--n", "318505", "--a", "24"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(err.contains("translate"));
    let (code, out, _) = pentaq(&["translate", "--n", "318505", "--a", "24"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "[24x+318482y]_318505 is 304658-translatable (closed form)\n"
    );
}

#[test]
fn parastrophe_golden() {
    let (code, out, _) = pentaq(&["parastrophe", "--n", "11", "--a", "2", "--which", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "Q3: [6x+6y]_11 is 10-translatable\n");
    let (_, out, _) = pentaq(&[
        "parastrophe",
        "--n",
        "5",
        "--a",
        "4",
        "--which",
        "2",
        "--table",
    ]);
    assert!(out.starts_with("Q2: [4x+2y]_5 is 3-translatable\n5\n"));
}

#[test]
fn classify_golden() {
    let (code, out, _) = pentaq(&["classify", "--n", "5", "--a", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "[4x+2y]_5: idempotent, medial, pentagonal, quadratical, Stein\n"
    );
    let (_, out, _) = pentaq(&["classify", "--matrix", "--method", "formula"]);
    assert!(out.contains("hexagonal:\n  Q: never\n"));
    assert!(out.contains("  Q2: always\n"));
}

#[test]
fn tables_golden() {
    let (_, out, _) = pentaq(&["ktable", "--max", "3"]);
    assert_eq!(
        out,
        "k=2 m=11: [2x+10y]_11\nk=3 m=55: [4x+2y]_5, [7x+5y]_11, [29x+27y]_55\n"
    );
    let (_, out, _) = pentaq(&["ktable", "--max", "8"]);
    assert!(out.contains("(excluded n <= k: [5])"));
    let (_, out, _) = pentaq(&["atable", "--a-max", "4"]);
    assert_eq!(
        out,
        "a=2: (n=11,k=2)\na=3: (n=61,k=32)\na=4: (n=5,k=3) (n=41,k=15) (n=205,k=138)\n"
    );
    let (_, out, _) = pentaq(&["atable", "--a-max", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["pairs"], serde_json::json!([[11, 2]]));
}

#[test]
fn survey_small() {
    let (code, out, _) = pentaq(&["survey", "--max", "16"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("inducing groups: Z5, Z11, Z2^4\n"), "{out}");
    let (_, csv, _) = pentaq(&["survey", "--max", "11", "--format", "csv"]);
    assert!(csv.contains("11,Z11,4,Enumerated\n"));
    assert_eq!(pentaq(&["survey", "--max", "101"]).0, EXIT_BUDGET);
}
