//! End-to-end checks of the binary: exit-code contract, witness output,
//! CSV dumps, and byte-level determinism of suite reports.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_genspectra"))
}

fn write_doc(content: &str) -> tempdir::TempDoc {
    tempdir::TempDoc::new(content)
}

mod tempdir {
    use std::path::PathBuf;

    pub struct TempDoc {
        pub path: PathBuf,
    }

    impl TempDoc {
        pub fn new(content: &str) -> Self {
            let mut path = std::env::temp_dir();
            let unique = format!(
                "genspectra-doc-{}-{}.json",
                std::process::id(),
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .unwrap()
                    .as_nanos()
            );
            path.push(unique);
            std::fs::write(&path, content).expect("write temp doc");
            TempDoc { path }
        }
    }

    impl Drop for TempDoc {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.path);
        }
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    // the unit is in the shift spectrum: exit 1
    let doc = write_doc(
        r#"{"element":{"kind":"continuous","resolution":64,"expr":"1"},
            "operator":{"node":"unilateral_shift"},"question":"full"}"#,
    );
    let status = bin()
        .args(["check", "--doc"])
        .arg(&doc.path)
        .status()
        .expect("run check");
    assert_eq!(status.code(), Some(1));

    // twice the unit is out: exit 0
    let doc = write_doc(
        r#"{"element":{"kind":"continuous","resolution":64,"expr":"2"},
            "operator":{"node":"unilateral_shift"},"question":"full"}"#,
    );
    let status = bin()
        .args(["check", "--doc"])
        .arg(&doc.path)
        .status()
        .expect("run check");
    assert_eq!(status.code(), Some(0));

    // malformed expression: exit 10
    let doc = write_doc(
        r#"{"element":{"kind":"continuous","resolution":64,"expr":"t +"},
            "operator":{"node":"unilateral_shift"},"question":"full"}"#,
    );
    let out = bin()
        .args(["check", "--doc"])
        .arg(&doc.path)
        .output()
        .expect("run check");
    assert_eq!(out.status.code(), Some(10));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("position"), "stderr: {stderr}");
}

#[test]
fn witness_emits_a_coordinate_table() {
    let doc = write_doc(
        r#"{"element":{"kind":"step","resolution":8,"expr":"0.5"},
            "operator":{"node":"dyadic_compress"},"question":"point"}"#,
    );
    let out = bin()
        .args(["witness", "--doc"])
        .arg(&doc.path)
        .output()
        .expect("run witness");
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("witness JSON parses");
    assert_eq!(report["type"], "kernel-witness");
    assert!(report["residual"].as_f64().unwrap() <= 1e-8);

    // out verdict: not applicable, exit 11
    let doc = write_doc(
        r#"{"element":{"kind":"step","resolution":8,"expr":"3"},
            "operator":{"node":"dyadic_compress"},"question":"point"}"#,
    );
    let status = bin()
        .args(["witness", "--doc"])
        .arg(&doc.path)
        .status()
        .expect("run witness");
    assert_eq!(status.code(), Some(11));
}

#[test]
fn oracle_dump_produces_csv() {
    let doc = write_doc(
        r#"{"element":{"kind":"step","resolution":4,"expr":"2"},
            "operator":{"node":"unilateral_shift"},"question":"full"}"#,
    );
    let out = bin()
        .args(["oracle-dump", "--depths", "8,16", "--doc"])
        .arg(&doc.path)
        .output()
        .expect("run oracle-dump");
    assert!(out.status.success());
    let csv = String::from_utf8_lossy(&out.stdout);
    let mut lines = csv.trim().lines();
    assert_eq!(lines.next(), Some("depth,fiber,sigma_min"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn suite_reports_are_deterministic_for_a_seed() {
    let mut reports = Vec::new();
    for _ in 0..2 {
        let out = bin()
            .args(["verify", "scalar-reduction", "--seed", "42"])
            .output()
            .expect("run verify");
        assert!(out.status.success());
        let mut v: serde_json::Value =
            serde_json::from_slice(&out.stdout).expect("suite JSON parses");
        // wall time is the one timestamp-like field
        v.as_object_mut().unwrap().remove("wall_ms");
        reports.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn unknown_suite_is_rejected() {
    let out = bin()
        .args(["verify", "bogus"])
        .output()
        .expect("run verify");
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn config_file_overrides_environment() {
    let config = write_doc(r#"{"boundary_band": 0.2}"#);
    // with band 0.2, |alpha| = 1.1 sits inside the closure band: In
    let doc = write_doc(
        r#"{"element":{"kind":"step","resolution":4,"expr":"1.1"},
            "operator":{"node":"unilateral_shift"},"question":"full"}"#,
    );
    let status = bin()
        .args(["check", "--config"])
        .arg(&config.path)
        .args(["--doc"])
        .arg(&doc.path)
        .env("GENSPECTRA_BOUNDARY_BAND", "0.000001")
        .status()
        .expect("run check");
    assert_eq!(status.code(), Some(1));

    // without the config file the environment value keeps it Out
    let status = bin()
        .args(["check", "--doc"])
        .arg(&doc.path)
        .env("GENSPECTRA_BOUNDARY_BAND", "0.000001")
        .status()
        .expect("run check");
    assert_eq!(status.code(), Some(0));
}

#[test]
fn residual_duality_question_routes() {
    let doc = write_doc(
        r#"{"element":{"kind":"step","resolution":2,"values":[0,0]},
            "operator":{"node":"unilateral_shift"},"question":"residual-duality"}"#,
    );
    let out = bin()
        .args(["check", "--doc"])
        .arg(&doc.path)
        .output()
        .expect("run check");
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["holds"], true);
}

#[test]
fn stdin_documents_work() {
    let mut child = bin()
        .args(["check", "--doc", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(
            br#"{"element":{"kind":"step","resolution":4,"expr":"0.5"},
                 "operator":{"node":"unilateral_shift"},"question":"point"}"#,
        )
        .unwrap();
    let out = child.wait_with_output().expect("wait");
    // empty point spectrum: exit 0
    assert_eq!(out.status.code(), Some(0));
}
