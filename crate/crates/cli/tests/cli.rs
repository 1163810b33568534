use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qgen(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgen"))
        .env_remove("QGEN_CONFIG")
        .current_dir(cwd)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const COURSE: &str = r#"{"schema":"course.v1","code":"COIS492","title":"Web","topics":["HTML tables"],"outcomes":["2.1","4.2"]}"#;

const GOOD: &str = r#"{"id":"q1","text":"Write a code shows the output of seven lines on the screen","targets":["2.1"],"source":"human","created_at":"2026-01-01T00:00:00Z"}"#;
const BAD: &str = r#"{"id":"q2","text":"Explain HTML tags","targets":["2.1"],"source":"human","created_at":"2026-01-01T00:00:00Z"}"#;

fn workspace(bank_lines: &[&str]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("course.json"), COURSE).unwrap();
    std::fs::write(dir.path().join("bank.jsonl"), bank_lines.join("\n") + "\n").unwrap();
    dir
}

#[test]
fn suggest_lists_row_lemmas() {
    let dir = workspace(&[]);
    let out = qgen(&["suggest", "--subpoint", "2.1"], dir.path());
    assert!(out.status.success());
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines, ["assemble", "construct", "create", "design", "develop", "formulate", "write"]);

    let out = qgen(&["suggest", "--subpoint", "8.1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_exit_codes() {
    let dir = workspace(&[GOOD]);
    let args = ["validate", "--bank", "bank.jsonl", "--course", "course.json"];
    assert_eq!(qgen(&args, dir.path()).status.code(), Some(0));

    let dir = workspace(&[GOOD, BAD]);
    let out = qgen(&args, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL q2"));

    let out = qgen(&["validate", "--bank", "missing.jsonl", "--course", "course.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.jsonl"));

    let dir = workspace(&["{not json"]);
    assert_eq!(qgen(&args, dir.path()).status.code(), Some(2));
}

#[test]
fn validate_against_one_subpoint() {
    let dir = workspace(&[BAD]);
    let out = qgen(&["--json", "validate", "--bank", "bank.jsonl", "--course", "course.json", "--subpoint", "4.2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let body: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(body["reports"][0]["target_subpoint"], "4.2");
    assert_eq!(body["summary"]["4.2"]["compliant"], 1);
}

#[test]
fn generate_offline_uses_row_verbs() {
    let dir = workspace(&[]);
    let out = qgen(
        &["generate", "--course", "course.json", "--subpoint", "4.2", "--count", "2", "--client", "offline", "--seed", "1"],
        dir.path(),
    );
    assert!(out.status.success());
    let row = ["Classify", "Describe", "Discuss", "Explain", "Identify", "Locate", "Recognize", "Report", "Select", "Translate", "Paraphrase"];
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    for line in &lines {
        let text = line.split('\t').nth(1).unwrap();
        assert!(row.iter().any(|v| text.starts_with(v)), "{text}");
    }

    let again = qgen(
        &["generate", "--course", "course.json", "--subpoint", "4.2", "--count", "2", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(stdout(&again), stdout(&out));
}

#[test]
fn generate_with_scripted_client() {
    let dir = workspace(&[]);
    let script = r#"{"schema":"client-script.v1","responses":[{"error":"down"},"Q: Design a table layout.\nQ: Explain tags."]}"#;
    std::fs::write(dir.path().join("script.json"), script).unwrap();
    let out = qgen(
        &["--json", "generate", "--course", "course.json", "--subpoint", "2.1", "--count", "2", "--client", "scripted", "--script", "script.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(body["attempts_used"], 2);
    let texts: Vec<&str> = body["questions"].as_array().unwrap().iter().map(|q| q["text"].as_str().unwrap()).collect();
    assert_eq!(texts, ["Design a table layout.", "Assemble tags."]);

    let out = qgen(&["generate", "--course", "course.json", "--subpoint", "2.1", "--count", "1", "--client", "scripted"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_and_blueprint() {
    let dir = workspace(&[GOOD, BAD]);
    let out = qgen(&["report", "--bank", "bank.jsonl", "--course", "course.json", "--out", "r.json", "--csv", "r.csv"], dir.path());
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "report.v1");
    assert_eq!(report["matrix"]["total"], 1);
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.starts_with("subpoint,count,bloom_levels,table_domain,level_domain\n2.1,1,Creating,Skills,Skills\n"));

    let out = qgen(&["--json", "blueprint", "--course", "course.json", "--bank", "bank.jsonl", "--per-subpoint", "1"], dir.path());
    let exam: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(exam["slots"].as_array().unwrap().len(), 1);
    assert_eq!(exam["deficits"]["4.2"], 1);

    let out = qgen(
        &["--json", "blueprint", "--course", "course.json", "--bank", "bank.jsonl", "--per-subpoint", "2", "--fill", "offline"],
        dir.path(),
    );
    let exam: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(exam["slots"].as_array().unwrap().len(), 4);
    assert_eq!(exam["deficits"], serde_json::json!({}));
}

#[test]
fn extension_config_is_honoured() {
    let dir = workspace(&[]);
    let ext = r#"{"schema":"taxonomy-ext.v1","verbs":[{"lemma":"design","forms":["redesign"]}]}"#;
    std::fs::write(dir.path().join("ext.json"), ext).unwrap();
    std::fs::write(dir.path().join("qgen.toml"), "extension = \"ext.json\"\n").unwrap();
    let bank = r#"{"id":"q1","text":"Redesign a page","targets":["2.1"],"source":"human","created_at":"2026-01-01T00:00:00Z"}"#;
    std::fs::write(dir.path().join("bank.jsonl"), format!("{bank}\n")).unwrap();
    let args = ["validate", "--bank", "bank.jsonl", "--course", "course.json"];

    assert_eq!(qgen(&args, dir.path()).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_qgen"))
        .env("QGEN_CONFIG", dir.path().join("qgen.toml"))
        .current_dir(dir.path())
        .args(args)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
