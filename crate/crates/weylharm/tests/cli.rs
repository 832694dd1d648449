//! Command-line behavior: exit codes, error prefixes, output determinism,
//! JSON mode, the `WEYLHARM_JSON` environment switch and stdin input.

use std::io::Write;
use std::process::{Command, Stdio};
use weylharm::cli::run_for_test;

#[test]
fn invariant_command() {
    let (code, out, err) = run_for_test(&["invariant", "z*dzb"], "");
    assert_eq!((code, out.as_str(), err.as_str()), (0, "false\n", ""));
    let (code, out, _) = run_for_test(&["invariant", "dz*dzb"], "");
    assert_eq!((code, out.as_str()), (0, "true\n"));
}

#[test]
fn reduce_command_matches_component_reduction() {
    let (code, out, _) = run_for_test(&["reduce", "--m", "1", "dz*dzb"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "x*d^2 + 2*d\n");
    // Domain error: non-invariant input.
    let (code, out, err) = run_for_test(&["reduce", "--m", "1", "z*dzb"], "");
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error:domain:"), "{err}");
}

#[test]
fn cellular_command_text_and_json() {
    let (code, out, _) = run_for_test(&["cellular", "z*zb"], "");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "order: 2\nw0 = 1/2 + 1/2*z*zb\nw1 = -1/2\nk[0,0] = 1/2\nk[0,1] = -1/2\n"
    );
    let (code, out, _) = run_for_test(&["cellular", "--json", "z*zb"], "");
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["order"], 2);
    assert_eq!(value["layers"][0], "1/2 + 1/2*z*zb");
    assert_eq!(value["layers"][1], "-1/2");
    assert_eq!(value["coeffs"][0]["m"], 0);
    assert_eq!(value["coeffs"][0]["j"], 0);
    assert_eq!(value["coeffs"][0]["c"], "1/2");
    assert_eq!(value["coeffs"][1]["c"], "-1/2");
}

#[test]
fn syntax_errors_exit_2_with_position() {
    let (code, out, err) = run_for_test(&["order", "z^"], "");
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(err, "error:syntax:expected exponent at offset 2\n");
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, err) = run_for_test(&["bogus"], "");
    assert_eq!(code, 2);
    assert!(err.starts_with("error:usage:unknown command"));
    let (code, _, err) = run_for_test(&["order", "--bad", "z"], "");
    assert_eq!(code, 2);
    assert!(err.starts_with("error:usage:unknown flag"));
    let (code, _, err) = run_for_test(&["reduce", "z*dz"], "");
    assert_eq!(code, 2);
    assert!(err.starts_with("error:usage:missing --m"));
    let (code, _, err) = run_for_test(&[], "");
    assert_eq!(code, 2);
    assert!(err.starts_with("error:usage:"));
}

#[test]
fn normalize_factor_generators() {
    let (code, out, _) = run_for_test(&["normalize", "dz*z"], "");
    assert_eq!((code, out.as_str()), (0, "z*dz + 1\n"));
    let (code, out, _) = run_for_test(&["factor", "z^2*zb*dz"], "");
    assert_eq!((code, out.as_str()), (0, "R^1 * Ez^1 * Ebz^0 * L^0\n"));
    let (code, out, _) = run_for_test(&["factor", "3*z*zb"], "");
    assert_eq!((code, out.as_str()), (0, "3 * R^1 * Ez^0 * Ebz^0 * L^0\n"));
    let (code, _, err) = run_for_test(&["factor", "z*dz + 1"], "");
    assert_eq!(code, 1);
    assert!(err.starts_with("error:domain:"));
    let (code, out, _) = run_for_test(&["generators", "z^2*dz^2"], "");
    assert_eq!((code, out.as_str()), (0, "Ez^2 - Ez\n"));
}

#[test]
fn apply_project_kernel() {
    let (code, out, _) = run_for_test(&["apply", "dz*dzb", "z^2*zb^2"], "");
    assert_eq!((code, out.as_str()), (0, "4*z*zb\n"));
    let (code, out, _) = run_for_test(
        &["project", "--set", "0,2", "--pick", "2", "z^2 + z*zb"],
        "",
    );
    assert_eq!((code, out.as_str()), (0, "z^2\n"));
    let (code, _, err) = run_for_test(&["project", "--set", "1,1", "--pick", "1", "z"], "");
    assert_eq!(code, 1);
    assert!(err.starts_with("error:domain:"));
    let (code, out, _) = run_for_test(&["kernel", "--max-deg", "1", "dz*dzb"], "");
    assert_eq!((code, out.as_str()), (0, "1\nzb\nz\n"));
}

#[test]
fn order_almansi_inner_obasis() {
    let (code, out, _) = run_for_test(&["order", "z^2*zb"], "");
    assert_eq!((code, out.as_str()), (0, "2\n"));
    let (code, out, _) = run_for_test(&["almansi", "z*zb"], "");
    assert_eq!((code, out.as_str()), (0, "order: 2\nq0 = 1\nq1 = -1\n"));
    let (code, out, _) = run_for_test(&["inner", "1 + z", "1 + z"], "");
    assert_eq!((code, out.as_str()), (0, "1 + x\n"));
    let (code, out, _) = run_for_test(&["inner", "--l2", "z", "z"], "");
    assert_eq!((code, out.as_str()), (0, "1/2\n"));
    let (code, out, _) = run_for_test(&["obasis", "--m", "0", "--n", "1"], "");
    assert_eq!((code, out.as_str()), (0, "O0 = 1 + x\nO1 = 1 - x\n"));
}

#[test]
fn gamma_commands_round_trip() {
    let (code, out, _) = run_for_test(
        &["gamma-expand", "--g1", "1", "--g2", "1", "--coeffs", "0:1"],
        "",
    );
    assert_eq!((code, out.as_str()), (0, "1 + z*zb\n"));
    let (code, out, _) = run_for_test(&["gamma-coeffs", "--g1", "1", "--g2", "1", "1 + z*zb"], "");
    assert_eq!((code, out.as_str()), (0, "0:1\n"));
    let (code, _, err) = run_for_test(&["gamma-coeffs", "--g1", "1", "--g2", "1", "z*zb"], "");
    assert_eq!(code, 1);
    assert!(err.starts_with("error:domain:"));
    // Non-terminating parameters are rejected as a domain error.
    let (code, _, err) = run_for_test(
        &["gamma-expand", "--g1", "1/2", "--g2", "1/3", "--coeffs", "1:1"],
        "",
    );
    assert_eq!(code, 1);
    assert!(err.starts_with("error:domain:"));
}

#[test]
fn output_is_deterministic() {
    let args = ["cellular", "--json", "(1 - z*zb)^2 * z + z^3 + i*zb^2"];
    let (code1, out1, _) = run_for_test(&args, "");
    let (code2, out2, _) = run_for_test(&args, "");
    assert_eq!(code1, 0);
    assert_eq!(code1, code2);
    assert_eq!(out1, out2);
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weylharm"))
}

#[test]
fn binary_env_var_switches_to_json() {
    let output = binary()
        .args(["invariant", "dz*dzb"])
        .env("WEYLHARM_JSON", "1")
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout), "{\"invariant\":true}\n");
}

#[test]
fn binary_reads_expression_from_stdin() {
    let mut child = binary()
        .args(["order", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"z^3*zb^2")
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout), "3\n");
}

#[test]
fn binary_exit_codes_propagate() {
    let status = binary().args(["order", "z^"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    let status = binary().args(["reduce", "--m", "0", "z*dzb"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
}
