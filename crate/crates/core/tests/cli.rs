//! End-to-end tests of the command-line surface: subcommands, exit
//! codes, and round-tripping of emitted files.

mod support;

use bunched::calculus::{check_derivation, derivation_from_json, CalculusConfig};
use std::path::PathBuf;
use std::process::{Command, Output};
use support::workspace_root;

fn bunched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bunched"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary must launch")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bunched-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn prove_emits_a_checkable_derivation() {
    let out = bunched(&["prove", "a * b |- b * a", "--depth", "8"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let d = derivation_from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    check_derivation(&d, &CalculusConfig::bi()).unwrap();
    assert_eq!(d.conclusion.to_string(), "a * b |- b * a");

    // substructural goal: not found, exit 1
    let out = bunched(&["prove", "a * b |- a", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(1));

    // with the affine rules file it goes through
    let out = bunched(&[
        "prove",
        "a * b |- a",
        "--rules",
        "data/affine.rules",
        "--depth",
        "8",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // malformed sequent: exit 2
    let out = bunched(&["prove", "a |-", "--depth", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_accepts_and_rejects() {
    let file = tmp("commute.json");
    let out = bunched(&[
        "prove",
        "a * b |- b * a",
        "--depth",
        "8",
        "--emit",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = bunched(&["check", file.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // an s4 derivation is rejected without the flag and accepted with it
    let s4file = tmp("boxed.json");
    let out = bunched(&[
        "prove",
        "box a |- a",
        "--s4",
        "--depth",
        "6",
        "--emit",
        s4file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        bunched(&["check", s4file.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert!(bunched(&["check", s4file.to_str().unwrap(), "--s4"])
        .status
        .success());

    // missing file: malformed input
    assert_eq!(
        bunched(&["check", "no-such-file.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn invert_transforms_a_derivation() {
    let file = tmp("sep-id.json");
    let out = bunched(&[
        "prove",
        "a * b |- a * b",
        "--depth",
        "6",
        "--emit",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = bunched(&[
        "invert",
        file.to_str().unwrap(),
        "--rule",
        "sepL",
        "--path",
        "",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let d = derivation_from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(d.conclusion.to_string(), "a , b |- a * b");
    check_derivation(&d, &CalculusConfig::bi()).unwrap();

    // wandR inversion needs no path
    let wfile = tmp("wand-id.json");
    assert!(bunched(&[
        "prove",
        "empm |- a -* a",
        "--depth",
        "6",
        "--emit",
        wfile.to_str().unwrap(),
    ])
    .status
    .success());
    let out = bunched(&["invert", wfile.to_str().unwrap(), "--rule", "wandR"]);
    assert!(out.status.success());
    let d = derivation_from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(d.conclusion.to_string(), "empm , a |- a");

    // a position that does not hold the principal: exit 1
    let out = bunched(&[
        "invert",
        file.to_str().unwrap(),
        "--rule",
        "andL",
        "--path",
        "",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn model_check_sequents_and_derivations() {
    // valid in every valuation over the powerset of two.pcm
    let out = bunched(&["model-check", "data/two.pcm", "empm |- emp"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // fails under some valuation
    let out = bunched(&["model-check", "data/two.pcm", "a |- b"]);
    assert_eq!(out.status.code(), Some(1));

    // pinned valuation: a = {m} makes a |- a * a vacuous-false? no — check
    // a fixed satisfying valuation instead
    let val = tmp("val.txt");
    std::fs::write(&val, "a = {e}\nb = {e, m}\n").unwrap();
    let out = bunched(&[
        "model-check",
        "data/two.pcm",
        "a |- b",
        "--valuation",
        val.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // a checked derivation's conclusion holds everywhere
    let file = tmp("sound.json");
    assert!(bunched(&[
        "prove",
        "p , (p /\\ q) |- p * q",
        "--depth",
        "6",
        "--emit",
        file.to_str().unwrap(),
    ])
    .status
    .success());
    let out = bunched(&["model-check", "data/two.pcm", file.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn closure_lab_reports_and_exit_codes() {
    let out = bunched(&["closure-lab", "data/two.pcm", "data/basis-all.txt"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("closed sets: 4"), "{stdout}");
    assert!(stdout.contains("strong: true"), "{stdout}");
    assert!(stdout.contains("all laws hold"), "{stdout}");

    // a non-strong basis is refused with a witness
    let out = bunched(&["closure-lab", "data/z2.pcm", "data/basis-unit.txt"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("strong: false"), "{stdout}");
    assert!(stdout.contains("construction refused"), "{stdout}");
}

#[test]
fn corpus_run_exit_codes() {
    let out = bunched(&["corpus-run", "corpus/kernel"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("46/46 cases pass"));

    // an empty directory is malformed input
    let dir = tmp("empty-corpus");
    std::fs::create_dir_all(&dir).unwrap();
    assert_eq!(
        bunched(&["corpus-run", dir.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
