use std::path::{Path, PathBuf};
use std::process::Command;

use evolia_cli::{
    emit, run_job, verify_certificate, verify_report, Analysis, CliError, Format, JobSpec, Report, Verdict,
};

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evolia"))
}

#[test]
fn every_fixture_report_verifies_and_round_trips() {
    let files = fixtures();
    assert!(files.len() >= 10);
    for path in files {
        let job = JobSpec::from_path(&path).unwrap();
        let report = run_job(&job);
        let outcome = verify_report(&report, &job).unwrap();
        assert!(outcome.is_valid(), "{}: {:?}", path.display(), outcome.failures);
        let text = emit(&report, Format::Machine);
        assert_eq!(Report::parse(&text).unwrap(), report);
        assert_eq!(
            emit(&run_job(&job), Format::Machine),
            text,
            "nondeterministic report for {}",
            path.display()
        );
    }
}

#[test]
fn run_job_examples() {
    let job = JobSpec::from_path(&fixture("z36_cyclic.json")).unwrap();
    let report = run_job(&job);
    assert!(matches!(
        report.entry(Analysis::Nilpotent).unwrap().result,
        Some(Verdict::NotNilpotent { .. })
    ));
    let Some(Verdict::NotNil { witness_text, .. }) = &report.entry(Analysis::Nil).unwrap().result else {
        panic!()
    };
    assert_eq!(witness_text, "x1+x2");

    let job = JobSpec::from_path(&fixture("z4_shift_power.json")).unwrap();
    let Some(Verdict::Power { result_text, .. }) = &run_job(&job).results[0].result else {
        panic!()
    };
    assert_eq!(result_text, "0");
}

#[test]
fn precondition_errors_are_entries() {
    let job = JobSpec::from_path(&fixture("integers_upper.json")).unwrap();
    let report = run_job(&job);
    let nil = report.entry(Analysis::Nil).unwrap();
    assert!(nil.error.as_deref().unwrap().contains("finite ring"));
    assert!(report.entry(Analysis::Nilpotent).unwrap().result.is_some());
    assert_eq!(report.exit_code(), 1);
    assert!(verify_certificate(&report, &job).unwrap());

    let shift = JobSpec::parse(r#"{"ring":{"kind":"mod","modulus":4},"mode":"shift","nu":2,"analyses":["nilpotent"]}"#)
        .unwrap();
    let r = run_job(&shift);
    assert!(r.results[0].error.as_deref().unwrap().contains("window"));
}

#[test]
fn tampering_and_mismatch() {
    let job = JobSpec::from_path(&fixture("z36_nilpotent.json")).unwrap();
    let mut report = run_job(&job);
    let Some(Verdict::Nilpotent { exponent, .. }) = &mut report.results[0].result else {
        panic!()
    };
    *exponent = 4;
    assert!(!verify_certificate(&report, &job).unwrap());

    let other = JobSpec::from_path(&fixture("z36_cyclic.json")).unwrap();
    let err = verify_certificate(&run_job(&job), &other).unwrap_err();
    assert!(matches!(err, CliError::HashMismatch));
    assert_eq!(err.to_string(), "certificate for different algebra");

    let mut dropped = run_job(&job);
    dropped.results.pop();
    assert!(!verify_certificate(&dropped, &job).unwrap());
}

#[test]
fn binary_analyze_verify_and_power() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["analyze"])
        .arg(fixture("z36_nilpotent.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "nilpotent: YES exponent=5"), "{text}");

    let out = bin()
        .args(["analyze", "--format", "machine", "--parallel"])
        .arg(fixture("z36_cyclic.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report_path = dir.path().join("report.json");
    std::fs::write(&report_path, &out.stdout).unwrap();
    let verify = bin()
        .arg("verify")
        .arg(&report_path)
        .arg(fixture("z36_cyclic.json"))
        .output()
        .unwrap();
    assert_eq!(
        verify.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&verify.stdout)
    );
    let mismatch = bin()
        .arg("verify")
        .arg(&report_path)
        .arg(fixture("z36_nilpotent.json"))
        .output()
        .unwrap();
    assert_eq!(mismatch.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("certificate for different algebra"));

    let human = bin()
        .args(["analyze"])
        .arg(fixture("z36_cyclic.json"))
        .output()
        .unwrap();
    let text = String::from_utf8(human.stdout).unwrap();
    assert!(
        text.lines()
            .any(|l| l.starts_with("nilpotent: NO witness-path=[") && l.ends_with(",...]")),
        "{text}"
    );
    assert!(text.lines().any(|l| l == "nil: NO witness=x1+x2"), "{text}");

    let power = bin()
        .arg("power")
        .arg(fixture("z4_shift_plenary.json"))
        .output()
        .unwrap();
    assert_eq!(power.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&power.stdout).contains("a^[5] = 2x5+x6"));
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"ring":{"kind":"mod","modulus":36},"mode":"finite","matrix":[[6,3],[2]],"analyses":["nilpotent"]}"#,
    )
    .unwrap();
    let out = bin().arg("analyze").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ragged row 2"));

    let missing = bin()
        .arg("analyze")
        .arg(dir.path().join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));

    let capped = bin()
        .args(["analyze", "--cap", "10"])
        .arg(fixture("z36_nilpotent.json"))
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&capped.stdout).contains("nil: SKIPPED elements=1296 cap=10"));
}
