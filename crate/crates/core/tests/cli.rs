use std::fs;

use quncert::bounds::{evaluate, BoundKind, BoundRequest};
use quncert::cli::{run, verification_exit_code, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use quncert::coherence::MeasureKind;
use quncert::harness::{check_bound_validity_with, SampleConfig};

fn quncert(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("quncert").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn row<'a>(table: &'a str, tag: &str) -> Vec<&'a str> {
    table
        .lines()
        .find(|l| l.split_whitespace().next() == Some(tag))
        .unwrap_or_else(|| panic!("no row {tag} in\n{table}"))
        .split_whitespace()
        .collect()
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn bounds_table_at_mutually_unbiased_pure_point() {
    let (code, out, _) = quncert(&["bounds", "--c", "0.5", "--purity", "1.0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(row(&out, "thm2_re")[1], "0.872429339856");
    assert_eq!(row(&out, "thm3_cf")[2], "0.872429339856");
    for tag in ["mu_re", "berta_re", "sanchez_re", "korzekwa_re", "thm4_l1"] {
        assert_eq!(row(&out, tag)[1], "1");
    }
}

#[test]
fn bounds_vanish_for_identical_bases_and_mixed_state() {
    let (code, out, _) = quncert(&["bounds", "--c", "1", "--purity", "0.5"]);
    assert_eq!(code, EXIT_OK);
    for kind in BoundKind::ALL {
        assert_eq!(row(&out, kind.tag())[2], "0");
    }
}

#[test]
fn out_of_range_flag_is_usage_error() {
    let (code, _, err) = quncert(&["bounds", "--c", "0.3", "--purity", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("[0.5, 1]"), "{err}");
    let (code, _, _) = quncert(&["scan", "--c-steps", "1"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = quncert(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = quncert(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["bounds", "scan", "verify", "tight", "state"] {
        assert!(out.contains(sub));
    }
}

#[test]
fn two_by_two_scan_matches_bounds() {
    let (code, out, _) = quncert(&["scan", "--c-steps", "2", "--p-steps", "2"]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = csv(&out);
    assert_eq!(header.join(","), "c,purity,mu_re,berta_re,sanchez_re,korzekwa_re,thm2_re,thm3_cf,thm4_l1");
    let order: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(order, vec![(0.5, 0.5), (0.5, 1.0), (1.0, 0.5), (1.0, 1.0)]);
    for r in &rows {
        for (i, kind) in BoundKind::ALL.iter().enumerate() {
            let expected = evaluate(&BoundRequest { kind: *kind, c: r[0], purity: r[1] }).unwrap().raw;
            assert!((r[2 + i] - expected).abs() <= 1e-11 * expected.abs().max(1.0));
        }
    }
}

#[test]
fn tight_columns_dominate_and_l1_is_exact() {
    let (code, out, _) = quncert(&["scan", "--c-steps", "11", "--p-steps", "11", "--tight"]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = csv(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for r in &rows {
        assert!((r[col("tight_l1")] - r[col("thm4_l1")]).abs() < 1e-9);
        assert!(r[col("tight_cf")] >= r[col("thm3_cf")] - 1e-9);
        for tag in ["mu_re", "berta_re", "sanchez_re", "korzekwa_re", "thm2_re"] {
            assert!(r[col("tight_re")] >= r[col(tag)] - 1e-9);
        }
    }
}

#[test]
fn measure_subset_and_clamp() {
    let (code, out, _) = quncert(&["scan", "--c-steps", "6", "--p-steps", "6", "--measures", "l1,re", "--clamp"]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = csv(&out);
    assert!(!header.contains(&"thm3_cf".to_string()));
    assert!(header.contains(&"thm4_l1".to_string()));
    assert!(rows.iter().flatten().all(|&v| v >= 0.0));
    let (_, raw, _) = quncert(&["scan", "--c-steps", "6", "--p-steps", "6"]);
    assert!(csv(&raw).1.iter().flatten().any(|&v| v < 0.0));
}

#[test]
fn scan_to_file_and_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let (code, out, _) = quncert(&["scan", "--c-steps", "3", "--p-steps", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 10);
    let bad = dir.path().join("missing").join("grid.csv");
    let (code, _, err) = quncert(&["scan", "--c-steps", "3", "--p-steps", "3", "--out", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cannot write"));
}

#[test]
fn verify_lemmas_passes() {
    let (code, out, _) = quncert(&["verify", "--suite", "lemmas", "--samples", "100000", "--seed", "7"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().any(|l| l.starts_with("overlap_lower_probe_d3\t100000\t")));
    assert!(out.ends_with("summary\t7/7 checks passed\n"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let (code, _, err) = quncert(&["verify", "--suite", "everything"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("unknown suite"));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "bounds", "--samples", "5000", "--seed", "3"];
    assert_eq!(quncert(&args), quncert(&args));
}

#[test]
fn corrupted_bound_fails_verification() {
    let config = SampleConfig::new(5, 20_000, 2).unwrap();
    let honest = check_bound_validity_with(
        "thm4_l1",
        MeasureKind::L1,
        |c, purity| Ok(evaluate(&BoundRequest { kind: BoundKind::PurityL1, c, purity })?.raw),
        &config,
    )
    .unwrap();
    assert_eq!(verification_exit_code(&[honest.clone()]), EXIT_OK);
    // inflating a saturable bound by 1% must be caught
    let corrupted = check_bound_validity_with(
        "thm4_l1_inflated",
        MeasureKind::L1,
        |c, purity| Ok(1.01 * evaluate(&BoundRequest { kind: BoundKind::PurityL1, c, purity })?.raw),
        &config,
    )
    .unwrap();
    assert!(corrupted.violations > 0);
    assert_eq!(verification_exit_code(&[honest, corrupted]), EXIT_FAILED);
}

#[test]
fn tight_reports_value_and_argmin() {
    let (code, out, _) = quncert(&["tight", "--measure", "re", "--c", "0.5", "--purity", "1", "--crosscheck", "256"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("value\t1\n"));
    assert!(out.contains("argmin_alpha\t1.57079632679\n"));
    assert!(out.contains("method\tboundary_1d\n"));
    assert!(out.contains("grid_2d_crosscheck\t1\n"));
    let (code, _, _) = quncert(&["tight", "--measure", "xx", "--c", "0.5", "--purity", "1"]);
    assert_eq!(code, EXIT_USAGE);
}

fn state_file(body: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.txt");
    fs::write(&path, body).unwrap();
    (dir, path.to_str().unwrap().to_string())
}

fn field(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("{key} missing in\n{report}"))
        .split('\t')
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

const BASES: &str = "basis Z:\n1 0\n0 1\nbasis X:\n0.7071067811865476 0.7071067811865476\n0.7071067811865476 -0.7071067811865476\n";

#[test]
fn state_plus_in_z_and_x() {
    let (_dir, path) = state_file(&format!("dim: 2\nmatrix:\n0.5 0.5\n0.5 0.5\n{BASES}"));
    let (code, out, err) = quncert(&["state", &path]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!((field(&out, "C_RE[Z]") - 1.0).abs() < 1e-12);
    assert!(field(&out, "C_RE[X]").abs() < 1e-12);
    assert!((field(&out, "c_max") - 0.5).abs() < 1e-12);
    assert!(!out.contains("violated"));
    assert_eq!(out.matches("satisfied").count(), 7);
}

#[test]
fn state_from_bloch_vector() {
    let (_dir, path) = state_file(&format!("# half-polarized along x\ndim: 2\nbloch: 0.5 0 0\n{BASES}"));
    let (code, out, _) = quncert(&["state", &path]);
    assert_eq!(code, EXIT_OK);
    assert!((field(&out, "C_l1[Z]") - 0.5).abs() < 1e-12);
    assert!(field(&out, "C_l1[X]").abs() < 1e-12);
}

#[test]
fn state_in_higher_dimension_skips_qubit_bounds() {
    let body = "dim: 3\nmatrix:\n0.5 0 0\n0 0.3 0.1i\n0 -0.1i 0.2\nbasis A:\n1 0 0\n0 1 0\n0 0 1\nbasis B:\n0 1 0\n1 0 0\n0 0 1\n";
    let (_dir, path) = state_file(body);
    let (code, out, _) = quncert(&["state", &path]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!((field(&out, "C_l1[A]") - 0.2).abs() < 1e-12);
    assert!(out.contains("qubit only"));
}

#[test]
fn state_errors_name_the_problem() {
    let (_dir, path) = state_file(&format!("dim: 2\nmatrix:\n0.45 0\n0 0.45\n{BASES}"));
    let (code, _, err) = quncert(&["state", &path]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("trace"), "{err}");

    let (_dir, path) = state_file("dim: 2\nmatrix:\n0.5 0\n0 0.5q\n");
    let (code, _, err) = quncert(&["state", &path]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 4"), "{err}");

    let (code, _, _) = quncert(&["state", "/nonexistent/state.txt"]);
    assert_eq!(code, EXIT_USAGE);
}
