//! A1–A12 with one PASS/FAIL line each. A12 runs the real binary twice.

use std::process::{Command, ExitCode, Output};

use mwg::verify::{verify_paper, VerifyConfig, CRITERIA};
use mwg_core::Tolerances;

fn verify_paper_json() -> std::process::Child {
    Command::new(env!("CARGO_BIN_EXE_mwg"))
        .args(["--format", "json", "--seed", "0", "verify-paper"])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("binary starts")
}

fn determinism_line() -> (bool, String) {
    let (a, b) = (verify_paper_json(), verify_paper_json());
    let (a, b): (Output, Output) =
        (a.wait_with_output().expect("first run"), b.wait_with_output().expect("second run"));
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let exit_ok = a.status.success() && b.status.success();
    let passed = identical && exit_ok;
    let mut line = format!(
        "{} A12 determinism: two verify-paper runs, {} bytes",
        if passed { "PASS" } else { "FAIL" },
        a.stdout.len()
    );
    if !identical {
        line.push_str(", outputs differ");
    }
    if !exit_ok {
        line.push_str(&format!(", exit codes {:?} / {:?}", a.status.code(), b.status.code()));
    }
    (passed, line)
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::new(0, 1, Tolerances::default());
    // start the two binary runs first; they overlap with the in-process criteria
    let determinism = std::thread::spawn(determinism_line);
    let mut all = true;
    let in_process: Vec<String> = CRITERIA.iter().map(|(id, _)| id.to_string()).filter(|id| id != "A12").collect();
    for r in verify_paper(&cfg, &in_process).criteria {
        all &= r.passed;
        println!("{}", r.line());
    }
    let (passed, line) = determinism.join().expect("determinism thread");
    all &= passed;
    println!("{line}");
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
