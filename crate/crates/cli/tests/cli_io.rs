//! The binary's I/O contract: reports on stdout, findings and secrets on
//! stderr, exit codes by failure class.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indyforge"))
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON report")
}

#[test]
fn keygen_accepts_base58_and_hex_spellings_of_the_same_seed() {
    let seed_bytes = b"000000000000000000000000Steward1";
    let spellings = [
        bs58_encode(seed_bytes),
        hex::encode(seed_bytes),
    ];
    for spelling in spellings {
        let output = bin().args(["keygen", "--seed", &spelling]).output().unwrap();
        assert!(output.status.success());
        let report = stdout_json(&output);
        assert_eq!(report["did"], "Th7MpTaRZVRYnPiabds81Y");
        assert_eq!(report["verkey"], "FYmoFw55GeQH7SRFa37dkx1d2dZ3zUF8ckg7wmL7ofN4");
        // A supplied seed is the caller's secret already; nothing is echoed.
        assert!(output.stderr.is_empty());
    }
}

/// Minimal base58 for the test's own use, so the assertion does not lean on
/// the code under test.
fn bs58_encode(bytes: &[u8]) -> String {
    const ALPHABET: &[u8] = b"123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
    let mut digits: Vec<u8> = vec![0];
    for &byte in bytes {
        let mut carry = byte as u32;
        for digit in digits.iter_mut() {
            carry += (*digit as u32) << 8;
            *digit = (carry % 58) as u8;
            carry /= 58;
        }
        while carry > 0 {
            digits.push((carry % 58) as u8);
            carry /= 58;
        }
    }
    let zeros = bytes.iter().take_while(|&&b| b == 0).count();
    let mut text = String::with_capacity(zeros + digits.len());
    text.extend(std::iter::repeat_n('1', zeros));
    text.extend(digits.iter().rev().map(|&d| ALPHABET[d as usize] as char));
    text
}

#[test]
fn generated_seeds_go_to_stderr_marked_secret_and_never_to_stdout() {
    let output = bin().arg("keygen").output().unwrap();
    assert!(output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    let mut lines = stderr.lines();
    let echo = lines.next().expect("the generated seed is echoed");
    assert!(lines.next().is_none(), "exactly one stderr line");
    let seed_b58 = echo.strip_prefix("SECRET-SEED ").expect("marked SECRET-SEED");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(!stdout.contains(seed_b58), "the report leaked the seed");

    // The echoed seed reproduces the reported identity.
    let replay = bin().args(["keygen", "--seed", seed_b58]).output().unwrap();
    assert_eq!(stdout_json(&replay), serde_json::from_str::<serde_json::Value>(&stdout).unwrap());
}

#[test]
fn a_malformed_seed_is_a_finding_not_a_crash() {
    let output = bin().args(["keygen", "--seed", "tooshort"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let finding: serde_json::Value = serde_json::from_slice(&output.stderr).unwrap();
    assert_eq!(finding["code"], "SeedLength");
    assert!(output.stdout.is_empty(), "no report on failure");
}

#[test]
fn missing_input_files_exit_two() {
    let output = bin()
        .args(["genesis", "verify", "--domain", "/nonexistent/a", "--pool", "/nonexistent/b"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.starts_with("error: "), "fatal errors are plain lines: {stderr}");
}

#[test]
fn roster_diagnostics_arrive_as_one_finding_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let trustees = dir.path().join("trustees.csv");
    // Two bad rows: a DID that is not derived from its verkey, and a verkey
    // that is not base58 at all.
    std::fs::write(
        &trustees,
        "name,did,verkey\n\
         Trustee1,V4SGRU86Z58d6TV7PBUe6f,FYmoFw55GeQH7SRFa37dkx1d2dZ3zUF8ckg7wmL7ofN4\n\
         Trustee2,V4SGRU86Z58d6TV7PBUe6f,!!notbase58!!\n",
    )
    .unwrap();
    let output = bin()
        .args(["genesis", "build"])
        .arg("--trustees")
        .arg(&trustees)
        .arg("--stewards")
        .arg(fixture_path("stewards.csv"))
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    let findings: Vec<serde_json::Value> = stderr
        .lines()
        .map(|line| serde_json::from_str(line).expect("each stderr line is JSON"))
        .collect();
    assert_eq!(findings.len(), 2, "both rows are reported in one pass: {stderr}");
    assert!(findings.iter().all(|f| f["file"] == trustees.display().to_string()));
    // Nothing was written.
    assert!(!dir.path().join("domain_transactions_genesis").exists());
}
