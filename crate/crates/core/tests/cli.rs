//! End-to-end checks of the command-line surface: exit codes, scope loading,
//! and round-tripping emitted json-lines traces through replay.

use std::io::Write;
use std::process::Command;

use paxos_hist::cli::format::{message_from_json, parse_json_lines};
use paxos_hist::{replay, SentState};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_paxos-hist")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin())
        .args(args)
        .env_remove("PAXOS_HIST_STATE_CAP")
        .output()
        .expect("running the binary");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn clean_check_exits_zero() {
    let (code, out, _) = run(&["check", "--variant", "basic", "--acceptors", "2", "--ballots", "1", "--values", "1"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn violation_exits_one() {
    let (code, _, _) = run(&["scenario", "appendix-f"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["check", "--variant", "basic", "--slots", "2"],
        &["check", "--variant", "nope"],
        &["check"],
        &["check", "--variant", "basic", "--no-such-flag"],
        &["scenario", "nope"],
        &["simulate", "--variant", "basic", "--format", "yaml"],
    ];
    for args in cases {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "args {args:?} gave stderr: {err}");
        assert!(!err.is_empty(), "diagnostic expected for {args:?}");
    }
}

#[test]
fn state_cap_exits_three_with_partial_report() {
    let (code, out, _) = run(&[
        "check", "--variant", "basic", "--acceptors", "3", "--ballots", "2", "--values", "2",
        "--state-cap", "10", "--format", "json-lines",
    ]);
    assert_eq!(code, 3, "{out}");
    let parsed = parse_json_lines(&out).unwrap();
    assert_eq!(parsed.result["status"], "incomplete");
    assert_eq!(parsed.result["state_cap_hit"], true);
}

#[test]
fn state_cap_env_var_overrides_default() {
    let out = Command::new(bin())
        .args(["check", "--variant", "basic", "--acceptors", "3", "--ballots", "2", "--values", "2"])
        .env("PAXOS_HIST_STATE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn depth_zero_visits_one_state() {
    let (code, out, _) = run(&[
        "check", "--variant", "basic", "--depth", "0", "--format", "json-lines",
    ]);
    assert_eq!(code, 0);
    let parsed = parse_json_lines(&out).unwrap();
    assert_eq!(parsed.result["states"], 1);
    assert_eq!(parsed.result["complete"], false);
}

#[test]
fn simulate_trace_round_trips_through_replay() {
    let (code, out, _) = run(&[
        "simulate", "--variant", "basic-unsafe-2a", "--acceptors", "3", "--ballots", "1",
        "--values", "2", "--seed", "11", "--steps", "40", "--format", "json-lines",
    ]);
    assert!(code == 0 || code == 1);
    let parsed = parse_json_lines(&out).unwrap();
    let state = replay(&parsed.actions, &parsed.scope).expect("emitted trace replays");
    let recorded: Vec<_> = parsed.result["final_state"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| message_from_json(m, &parsed.scope).unwrap())
        .collect();
    assert_eq!(state, SentState::from_messages(recorded));
}

#[test]
fn violation_trace_round_trips_through_replay() {
    let (code, out, _) = run(&[
        "check", "--variant", "basic-unsafe-2a", "--acceptors", "3", "--ballots", "1",
        "--values", "2", "--format", "json-lines",
    ]);
    assert_eq!(code, 1);
    let parsed = parse_json_lines(&out).unwrap();
    assert!(!parsed.actions.is_empty(), "violation trace lines expected");
    let state = replay(&parsed.actions, &parsed.scope).expect("violation trace replays");
    let first = &parsed.result["violations"][0];
    let recorded: Vec<_> = first["state"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| message_from_json(m, &parsed.scope).unwrap())
        .collect();
    assert_eq!(state, SentState::from_messages(recorded));
}

#[test]
fn scope_file_loads_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scope.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"variant": "basic", "acceptors": 3, "ballots": 2, "values": 2, "depth": 2}}"#
    )
    .unwrap();
    let (code, out, _) = run(&[
        "validate-scope", "--scope", path.to_str().unwrap(), "--ballots", "1",
        "--format", "json-lines",
    ]);
    assert_eq!(code, 0, "{out}");
    let scope: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(scope["ballots"], 1, "flag overrides file");
    assert_eq!(scope["depth"], 2, "file value kept where no flag given");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let (code, _, err) = run(&["check", "--scope", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("malformed"), "stderr: {err}");

    let conflicted = dir.path().join("conflict.json");
    std::fs::write(&conflicted, r#"{"variant": "basic", "slots": 2}"#).unwrap();
    let (code, _, _) = run(&["check", "--scope", conflicted.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn explicit_quorum_file_is_used_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("quorums.json");
    std::fs::write(&good, "[[0,1],[1,2],[0,2]]").unwrap();
    let (code, _, _) = run(&[
        "check", "--variant", "basic", "--acceptors", "3", "--ballots", "1", "--values", "1",
        "--quorums", good.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let disjoint = dir.path().join("disjoint.json");
    std::fs::write(&disjoint, "[[0],[1]]").unwrap();
    let (code, _, err) = run(&[
        "check", "--variant", "basic", "--acceptors", "3", "--quorums",
        disjoint.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("intersect"), "stderr: {err}");
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let (code, stdout, _) = run(&[
        "check", "--variant", "basic", "--acceptors", "2", "--ballots", "1", "--values", "1",
        "--format", "json-lines",
    ]);
    assert_eq!(code, 0);
    let (code2, _, _) = run(&[
        "check", "--variant", "basic", "--acceptors", "2", "--ballots", "1", "--values", "1",
        "--format", "json-lines", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code2, 0);
    let from_file = std::fs::read_to_string(&path).unwrap();
    // Identical except the run duration.
    let strip = |s: &str| {
        s.lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                if let Some(o) = v.as_object_mut() {
                    o.remove("duration_ms");
                }
                v.to_string()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&stdout), strip(&from_file));
}

#[test]
fn scenario_accepts_value_override() {
    let (code, out, _) = run(&["scenario", "appendix-f", "--values", "1", "--format", "json-lines"]);
    assert_eq!(code, 0, "{out}");
    let parsed = parse_json_lines(&out).unwrap();
    assert_eq!(parsed.result["status"], "ok");
    assert_eq!(parsed.result["halt"]["reason"], "disabled-step");
}
