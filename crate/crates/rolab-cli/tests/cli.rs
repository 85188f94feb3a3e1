//! End-to-end tests of the binary: exit-code contract, byte determinism,
//! generate/check round trips, the decomposition stream, and the fixture
//! rerun.

use rolab::{compute_svd, io, relative_residual, Matrix};
use std::path::Path;
use std::process::{Command, Output};

fn rolab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rolab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|_| panic!("missing {name}"))
}

#[test]
fn generate_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = rolab(
        &["generate", "rol", "--dims", "8,6,7", "--ranks", "3,4", "--N", "2", "--seed", "11", "--out", "pair"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_slice(&read(dir.path(), "pair/report.json")).unwrap();
    assert_eq!(report["achieved"], true);
    assert_eq!(report["report"]["full_rol"], true);
    assert_eq!(report["report"]["rank_ab"], 2);
    assert_eq!(report["report"]["rank_b"], 4);

    let check = rolab(&["check", "pair/A.json", "pair/B.json"], dir.path());
    assert!(check.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&check.stdout).unwrap();
    assert_eq!(doc["consistent"], true);
    assert_eq!(doc["report"]["full_rol"], report["report"]["full_rol"]);
    assert_eq!(doc["report"]["rank_ab"], report["report"]["rank_ab"]);
    assert_eq!(
        doc["report"]["rol_residual"].as_f64().unwrap(),
        report["report"]["rol_residual"].as_f64().unwrap(),
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        [
            "generate", "cls12", "--dims", "12,9,10", "--ranks", "4,5", "--N", "2",
            "--seed", "7", "--field", "complex", "--out",
        ]
        .iter()
        .map(|s| s.to_string())
        .chain([out.to_string()])
        .collect::<Vec<_>>()
    };
    for out in ["one", "two"] {
        let argv: Vec<String> = args(out);
        let refs: Vec<&str> = argv.iter().map(|s| s.as_str()).collect();
        let run = rolab(&refs, dir.path());
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    }
    for name in ["A.json", "B.json", "report.json"] {
        assert_eq!(
            read(dir.path(), &format!("one/{name}")),
            read(dir.path(), &format!("two/{name}")),
            "{name} differs between identical runs"
        );
    }
    let report: serde_json::Value =
        serde_json::from_slice(&read(dir.path(), "one/report.json")).unwrap();
    assert_eq!(report["cls_123_124"]["is12"], true);
    assert_eq!(report["cls_123_124"]["is1234"], false);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    // infeasible plan
    let out = rolab(
        &["generate", "rol", "--dims", "4,3,2", "--ranks", "5,1", "--N", "1", "--out", "x"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // missing file
    let out = rolab(&["check", "nope.json", "nope2.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    // malformed file
    std::fs::write(dir.path().join("bad.json"), b"{\"rows\": 1}").unwrap();
    let out = rolab(&["check", "bad.json", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    // nonconformable shapes
    std::fs::write(dir.path().join("a.csv"), "1,2\n").unwrap();
    std::fs::write(dir.path().join("b.csv"), "1,2,3\n").unwrap();
    let out = rolab(&["check", "a.csv", "b.csv"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    // CSV cannot carry complex data
    let out = rolab(
        &["generate", "zero", "--dims", "3,3,2", "--ranks", "1,1", "--format", "csv",
          "--field", "complex", "--out", "y"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn decomposition_stream_shares_sigma_and_reconstructs() {
    let dir = tempfile::tempdir().unwrap();
    // a matrix with a forced repeated singular value
    let a = Matrix::real(&[
        &[2.0, 0.0, 0.0, 0.0],
        &[0.0, 2.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
    ]);
    std::fs::write(dir.path().join("A.json"), io::matrix_to_json(&a)).unwrap();
    let out = rolab(&["svd-family", "A.json", "--count", "5", "--seed", "9"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);

    let reference = compute_svd(&a);
    let mut distinct = 0;
    let mut previous: Option<Matrix> = None;
    for line in lines {
        let doc: serde_json::Value = serde_json::from_str(line).unwrap();
        let u: Matrix = serde_json::from_value(doc["u"].clone()).unwrap();
        let v: Matrix = serde_json::from_value(doc["v"].clone()).unwrap();
        let sigma: Vec<f64> = serde_json::from_value(doc["sigma"].clone()).unwrap();
        assert_eq!(sigma, reference.sigma().to_vec(), "sigma must be shared");
        let middle = Matrix::generalized_diag(a.rows(), a.cols(), &sigma, a.field());
        let recon = &u * middle * v.adjoint();
        assert!(relative_residual(&recon, &a) <= 1e-11);
        if let Some(prev) = &previous {
            if (prev - &v).fro_norm() > 1e-8 {
                distinct += 1;
            }
        }
        previous = Some(v);
    }
    assert!(distinct >= 3, "family members should differ");
}

#[test]
fn fixture_rerun_passes_and_reports_each_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = rolab(&["repro"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("PASS").count(), 12);
    assert_eq!(text.matches("FAIL").count(), 0);
    assert!(text.contains("12 of 12 fixtures pass"));

    // complex rerun gives identical verdicts
    let out = rolab(&["repro", "--field", "complex"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("FAIL").count(), 0);

    // an absurdly tight tolerance cannot flip the mismatch fixture:
    // its failure is order one, not tolerance-sensitive
    let out = rolab(&["repro", "--tol", "1e-15"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().find(|l| l.starts_with("rank-one-mismatch")).unwrap();
    assert!(row.contains("PASS"));
}
