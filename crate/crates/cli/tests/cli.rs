use std::path::Path;
use std::process::{Command, Output};

fn tmu_fem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmu-fem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tmu_fem(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

#[test]
fn solve_matches_golden_files() {
    assert_eq!(
        stdout(&[
            "solve",
            "--problem",
            "quadratic",
            "--mu",
            "0",
            "--elements",
            "1"
        ]),
        golden("solve_quadratic_mu0_n1.csv")
    );
    assert_eq!(
        stdout(&[
            "solve",
            "--problem",
            "constant-f",
            "--mu",
            "4",
            "--elements",
            "3",
            "--rhs-mode",
            "kernel"
        ]),
        golden("solve_constant_f_mu4_n3_kernel.csv")
    );
}

#[test]
fn solve_samples_nodes_and_interior_points() {
    let csv = stdout(&[
        "solve",
        "--problem",
        "singular",
        "--mu",
        "1",
        "--elements",
        "32",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,u_exact,u_h");
    assert_eq!(lines.len(), 1 + 9 * 32 + 1);
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 3);
        assert!(fields.iter().all(|v| v.is_finite()));
    }
    assert!(lines.last().unwrap().starts_with("1,"));
}

#[test]
fn custom_problem_leaves_exact_column_empty() {
    let csv = stdout(&[
        "solve",
        "--problem",
        "custom",
        "--f-coeffs",
        "1,-2",
        "--mu",
        "2",
        "--elements",
        "4",
    ]);
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1], "");
        assert!(fields[2].parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..2)
        .map(|i| {
            dir.path()
                .join(format!("study{i}.csv"))
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    for p in &paths {
        stdout(&[
            "study",
            "--problem",
            "singular",
            "--mu-list",
            "1,100000",
            "--elements",
            "4:64:x2",
            "--out",
            p,
        ]);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    assert_eq!(
        stdout(&["verify", "--seed", "3"]),
        stdout(&["verify", "--seed", "3"])
    );
}

#[test]
fn single_row_study() {
    let csv = stdout(&["study", "--mu-list", "1", "--elements", "4:4:x2"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines,
        [
            "mu,N,h,err_L2,eoc_L2,err_H1,eoc_H1",
            "1,4,0.25,2.12985e-02,0.00,3.19306e-01,0.00"
        ]
    );
}

#[test]
fn study_fields_parse_and_first_eoc_is_zero() {
    let csv = stdout(&[
        "study",
        "--problem",
        "singular",
        "--mu-list",
        "1,1000,100000",
        "--elements",
        "4:512:x2",
    ]);
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 24);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 7);
        assert!(row.iter().all(|f| f.parse::<f64>().unwrap().is_finite()));
        if i % 8 == 0 {
            assert_eq!((row[4], row[6]), ("0.00", "0.00"));
        }
    }
}

#[test]
fn quadratic_study_reaches_second_order() {
    let csv = stdout(&[
        "study",
        "--problem",
        "quadratic",
        "--mu-list",
        "1",
        "--elements",
        "8:256:x2",
    ]);
    let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
    assert_eq!(last[1], "256");
    assert!((last[4].parse::<f64>().unwrap() - 2.0).abs() < 0.05);
}

#[test]
fn verify_passes_with_any_seed() {
    for seed in ["20240917", "7"] {
        let out = tmu_fem(&["verify", "--seed", seed]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn tampered_tolerance_fails_verify() {
    let out = tmu_fem(&["verify", "--tolerance-scale", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn rejected_invocations() {
    let zero = tmu_fem(&["solve", "--elements", "0"]);
    assert_eq!(zero.status.code(), Some(2));

    let singular = tmu_fem(&[
        "solve",
        "--problem",
        "singular",
        "--rhs-mode",
        "direct",
        "--elements",
        "4",
    ]);
    assert_eq!(singular.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&singular.stderr).contains("outside L2"));

    let unwritable = tmu_fem(&[
        "solve",
        "--elements",
        "4",
        "--out",
        "/nonexistent-dir/u.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unwritable.stderr).contains("cannot write"));

    assert_eq!(tmu_fem(&["study", "--mu-list", "0"]).status.code(), Some(1));
    assert_eq!(
        tmu_fem(&["study", "--problem", "custom"]).status.code(),
        Some(1)
    );
    assert_eq!(
        tmu_fem(&["study", "--elements", "8:4:x2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tmu_fem(&["solve", "--elements", "4", "--problem", "cubic"])
            .status
            .code(),
        Some(2)
    );
}
