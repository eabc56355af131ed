use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ocspath(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ocspath"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tmp_file(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ocspath-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn generated_example_is_reachable_through_a_pipe() {
    let system = ocspath(&["gen", "example2", "--k", "3", "--m", "2"], None);
    assert!(system.status.success());
    let out = ocspath(&["reach", "-", "--from", "p_0:0", "--to", "s_2:0"], Some(&stdout(&system)));
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["summary"]["length"], 14);
    assert_eq!(doc["steps"][0]["state"], "p_0");
    assert_eq!(doc["final"]["state"], "s_2");
}

#[test]
fn unreachable_pair_exits_with_one() {
    let system = stdout(&ocspath(&["gen", "example1", "--n", "2"], None));
    let out = ocspath(&["reach", "-", "--from", "q_1:0", "--to", "p_1:0"], Some(&system));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "unreachable");
}

#[test]
fn verify_sweep_stays_within_bound() {
    let out = ocspath(&["verify", "--n-max", "8", "--trials", "500", "--seed", "7"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("max len/n^2:")).unwrap();
    let ratio: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(ratio <= 14.0);
    assert!(text.contains("histogram"));
    // Same seed, same bytes.
    let again = ocspath(&["verify", "--n-max", "8", "--trials", "500", "--seed", "7"], None);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn zero_minimal_and_normalized_paths() {
    let system = stdout(&ocspath(&["gen", "example2", "--k", "3", "--m", "2"], None));
    let zeros = ocspath(&["reach", "-", "--from", "p_0:0", "--to", "s_2:0", "--minimize", "zeros"], Some(&system));
    assert_eq!(json(&zeros)["summary"]["zeros"], 1);

    let out = ocspath(&["normalize", "-", "--from", "p_0:0", "--to", "s_2:0"], Some(&system));
    assert!(out.status.success());
    let doc = json(&out);
    let arcs = doc["arcs"].as_array().unwrap();
    assert_eq!(arcs.len(), 2);
    let total: u64 = arcs.iter().map(|a| a["length"].as_u64().unwrap()).sum();
    assert_eq!(doc["path"]["summary"]["length"].as_u64(), Some(total));
}

#[test]
fn paths_validate_against_their_system() {
    let system = stdout(&ocspath(&["gen", "example1", "--n", "3"], None));
    let sys_file = tmp_file("e1.json", &system);
    let path = stdout(&ocspath(&["reach", "-", "--from", "p_1:0", "--to", "q_1:0"], Some(&system)));
    let out = ocspath(&["validate", sys_file.to_str().unwrap(), "-"], Some(&path));
    assert_eq!(stdout(&out), "valid: length 9\n");

    let mut doc: serde_json::Value = serde_json::from_str(&path).unwrap();
    doc["steps"][2]["transition_index"] = 0.into();
    let out = ocspath(&["validate", sys_file.to_str().unwrap(), "-"], Some(&doc.to_string()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shortest_words() {
    let oca = r#"{
        "kind": "oca",
        "states": ["u", "v"],
        "alphabet": ["a", "b"],
        "initial": ["u"],
        "final": ["v"],
        "transitions": [
            {"src": "u", "eff": 1, "dst": "u", "guard": "zero", "label": "a"},
            {"src": "u", "eff": -1, "dst": "v", "guard": "pos", "label": "b"}
        ]
    }"#;
    let out = ocspath(&["shortest-word", "-"], Some(oca));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["word"], serde_json::json!(["a", "b"]));

    // With the decrement looping back to `u`, nothing reaches `v`.
    let empty = oca.replace("\"dst\": \"v\"", "\"dst\": \"u\"");
    let out = ocspath(&["shortest-word", "-"], Some(&empty));
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "empty language");
}

#[test]
fn integer_counters_may_be_negative() {
    let zocs = r#"{
        "kind": "zocs",
        "states": ["x", "y"],
        "transitions": [
            {"src": "x", "eff": -1, "dst": "x", "guard": "zero"},
            {"src": "x", "eff": 1, "dst": "y", "guard": "neg"}
        ]
    }"#;
    let out = ocspath(&["zreach", "-", "--from", "x:0", "--to", "y:0"], Some(zocs));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["summary"]["length"], 2);
    assert_eq!(doc["steps"][1]["counter"], -1);
    let out = ocspath(&["zreach", "-", "--from", "y:-3", "--to", "x:0"], Some(zocs));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    let out = ocspath(&["reach", "-", "--from", "a:0", "--to", "b:0"], Some("{\"kind\": "));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let system = stdout(&ocspath(&["gen", "example1", "--n", "2"], None));
    for query in [["--from", "p_9:0", "--to", "q_1:0"], ["--from", "p_1:-1", "--to", "q_1:0"]] {
        let mut args = vec!["reach", "-"];
        args.extend(query);
        assert_eq!(ocspath(&args, Some(&system)).status.code(), Some(2));
    }
    assert_eq!(ocspath(&["gen", "example2", "--k", "4", "--m", "2"], None).status.code(), Some(2));
    assert_eq!(ocspath(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn memory_budget_comes_from_the_environment() {
    let system = stdout(&ocspath(&["gen", "example2", "--k", "3", "--m", "2"], None));
    let out = Command::new(env!("CARGO_BIN_EXE_ocspath"))
        .args(["reach", "/dev/stdin", "--from", "p_0:0", "--to", "s_2:0"])
        .env("OCSPATH_MEM_BUDGET", "16")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(system.as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("memory budget"));
}

#[test]
fn generation_is_reproducible() {
    let args = ["gen", "random", "--n", "6", "--seed", "11", "--kind", "oca"];
    let first = ocspath(&args, None);
    assert!(first.status.success());
    assert_eq!(first.stdout, ocspath(&args, None).stdout);
    assert_eq!(json(&first)["kind"], "oca");
}
