use std::io::Write;
use std::process::{Command, Stdio};

use reflexive_cli::{run, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

const CUBE: &str = "3 8\n1 1 1 1 -1 -1 -1 -1\n1 1 -1 -1 1 1 -1 -1\n1 -1 1 -1 1 -1 1 -1\n";
const SQUARE: &str = "4 2 square\n1 1\n1 -1\n-1 1\n-1 -1\n";

fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("reflexive").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_lines(s: &str) -> Vec<Value> {
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn binary_verifies_cube_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_reflexive"))
        .arg("verify")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(CUBE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(std::str::from_utf8(&out.stdout).unwrap())[0];
    assert_eq!(v["flags"]["codim2_eq_codim1"], true);
    assert_eq!(v["certificate_count"], 6);
}

#[test]
fn binary_unknown_subcommand() {
    let out = Command::new(env!("CARGO_BIN_EXE_reflexive")).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn enumerate_2d() {
    let (code, out, _) = call(&["enumerate-2d"], "");
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[16], "classes=16 exceptional=3 indices=2,2,3");
    let (_, wider, _) = call(&["enumerate-2d", "--radius", "4"], "");
    assert_eq!(out, wider);
}

#[test]
fn square_report() {
    let (code, out, _) = call(&["verify"], SQUARE);
    assert_eq!(code, EXIT_OK);
    let v = &json_lines(&out)[0];
    assert_eq!(v["id"], "square");
    assert_eq!(v["flags"]["codim2_eq_codim1"], false);
    assert_eq!(v["invariants"][0]["torsion"], serde_json::json!([2]));
}

#[test]
fn strict_and_lenient() {
    let bad = format!("{CUBE}2 2\n1 x\n0 1\n");
    let (code, out, err) = call(&["batch"], &bad);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.is_empty());
    assert!(err.contains("line 6"), "{err}");

    let skip_bad = format!("{CUBE}1 2\n1 x\n{SQUARE}");
    let (code, out, err) = call(&["batch", "--lenient"], &skip_bad);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
    assert!(err.contains("skipped record"));
    let (code, _, _) = call(&["verify", "--strict"], &skip_bad);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn batch_keeps_order_and_count() {
    let mut text = String::new();
    for i in 0..12 {
        text.push_str(&format!(
            "2 4 item-{i}\n{}\n{}\n",
            ["1 1 -1 -1", "1 0 -1 0"][i % 2],
            ["1 -1 1 -1", "0 1 0 -1"][i % 2]
        ));
    }
    text.push_str("3 4 big\n2 0 0 -2\n0 2 0 -2\n0 0 2 -2\n");
    let (code, out, _) = call(&["batch", "--jobs", "4"], &text);
    assert_eq!(code, EXIT_OK);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 13);
    for (i, l) in lines.iter().take(12).enumerate() {
        assert_eq!(l["id"], format!("item-{i}"));
    }
    assert_eq!(lines[12].to_string(), r#"{"id":"big","n":3,"reflexive":false}"#);
    let (_, again, _) = call(&["batch", "--jobs", "1"], &text);
    assert_eq!(out, again);
}

#[test]
fn degenerate_record_still_gets_a_line() {
    let (code, out, err) = call(&["batch"], "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(out.lines().count(), 1);
    assert!(err.contains("record-1"));
}

#[test]
fn check_and_transpose() {
    let (code, out, _) = call(&["check"], CUBE);
    assert_eq!(code, EXIT_OK);
    let v = &json_lines(&out)[0];
    assert_eq!(v["dual"].as_array().unwrap().len(), 6);

    let (code, _, _) = call(&["check"], "3 3\n2 0 0\n0 2 0\n-2 -2 0\n");
    assert_eq!(code, EXIT_INPUT);
    let (code, out, _) = call(&["check"], "2 3\n2 0 -2\n0 2 -2\n");
    assert_eq!(code, EXIT_FAILURE);
    assert_eq!(json_lines(&out)[0]["reflexive"], false);

    // columns are points by default for 2 x 3; --transpose reads two 3D rows
    let cols = "2 3\n2 -1 -1\n-1 2 -1\n";
    assert_eq!(call(&["check"], cols).0, EXIT_OK);
    assert_eq!(call(&["check", "--transpose"], cols).0, EXIT_INPUT);
    let rows = "3 2\n2 -1\n-1 2\n-1 -1\n";
    assert_eq!(call(&["check"], rows).0, EXIT_OK);
    assert_eq!(call(&["check", "--transpose"], rows).0, EXIT_INPUT);
}

#[test]
fn lambda_roots_lemmas() {
    let tri = r#"{"id":"tri","vertices":[[2,-1],[-1,2],[-1,-1]]}"#;
    let (code, out, _) = call(&["lambda", "--k", "0"], tri);
    assert_eq!(code, EXIT_OK);
    let v = &json_lines(&out)[0];
    assert_eq!((v["k"].as_u64(), v["index"].as_u64()), (Some(0), Some(3)));
    let (code, _, _) = call(&["lambda", "--k", "7"], tri);
    assert_eq!(code, EXIT_INPUT);

    let (_, out, _) = call(&["roots"], tri);
    assert_eq!(json_lines(&out)[0]["count"], 6);

    let (code, out, _) = call(&["lemmas"], tri);
    assert_eq!(code, EXIT_OK);
    let v = &json_lines(&out)[0];
    assert_eq!(v["report"]["ordered_pairs"], 72);
    assert_eq!(v["passed"], true);
}

#[test]
fn mirror_check() {
    let (code, out, _) =
        call(&["mirror-check"], "4 8\n1 0 0 0 -1 0 0 0\n0 1 0 0 0 -1 0 0\n0 0 1 0 0 0 -1 0\n0 0 0 1 0 0 0 -1\n");
    assert_eq!(code, EXIT_OK);
    assert_eq!(json_lines(&out)[0]["equal"], true);
    let (code, _, _) = call(&["mirror-check"], CUBE);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn malformed_json_and_empty_input() {
    assert_eq!(call(&["verify"], "{\"vertices\": 3}").0, EXIT_INPUT);
    assert_eq!(call(&["roots"], "").0, EXIT_INPUT);
    let (code, out, _) = call(&["batch"], "");
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
}

#[test]
fn help_is_not_an_error() {
    let (code, out, _) = call(&["--help"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("enumerate-2d"));
}
