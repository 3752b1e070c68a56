use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bfcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfcg")).args(args).output().unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Value of `key=` on a report line.
fn field(line: &str, key: &str) -> Option<f64> {
    line.split_whitespace().find_map(|w| w.strip_prefix(key)?.strip_prefix('=')?.parse().ok())
}

#[test]
fn validate_builtin_passes() {
    let o = bfcg(&["validate", "--module", "adjoint(su2)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# bfcg-report 1\n"));
    assert!(text.contains("[validate adjoint(su2)]"));
    assert!(text.trim_end().ends_with("result PASS"));
}

#[test]
fn validate_spec_file_passes() {
    let spec = data("su2_adjoint.toml");
    let o = bfcg(&["validate", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn broken_jacobi_fails_and_is_named() {
    let spec = data("broken_jacobi.toml");
    let o = bfcg(&["validate", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("identity jacobi_f ")).unwrap();
    assert!(line.ends_with("FAIL"), "{line}");
    assert!(text.trim_end().ends_with("result FAIL"));
}

#[test]
fn missing_spec_exits_2() {
    let o = bfcg(&["validate", "--spec", "/nonexistent/module.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_module_and_bad_ladder_exit_2() {
    assert_eq!(bfcg(&["validate", "--module", "adjoint(e8)"]).status.code(), Some(2));
    assert_eq!(bfcg(&["bianchi", "--module", "abelian(1,1)", "--n", "8,8,16"]).status.code(), Some(2));
    assert_eq!(bfcg(&["bianchi", "--module", "abelian(1,1)", "--n", "4,6"]).status.code(), Some(2));
}

#[test]
fn dof_for_explicit_dimensions() {
    let o = bfcg(&["dof", "--p", "6", "--q", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.trim() == "n = 0"), "{text}");
    assert_eq!(bfcg(&["dof", "--p", "0", "--q", "4"]).status.code(), Some(2));
}

#[test]
fn dof_section_of_vector_poincare() {
    let o = bfcg(&["dof", "--module", "vector_poincare"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[dof vector_poincare]"));
    assert!(text.lines().any(|l| l.trim() == "n = 0"), "{text}");
}

#[test]
fn full_report_runs_every_check_in_order() {
    let o = bfcg(&["full-report", "--module", "vector_poincare", "--n", "4,5,6"]);
    let text = stdout(&o);
    let order: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).collect();
    assert_eq!(
        order,
        ["validate", "bianchi", "gauge-check", "eom", "algebra", "consistency", "offshell", "dof"]
            .map(|c| format!("[{c} vector_poincare]"))
    );
    assert!(text.lines().any(|l| l.trim() == "n = 0"));
    // such coarse ladders are far from the asymptotic regime
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn abelian_full_report_is_exact() {
    let o = bfcg(&["full-report", "--module", "abelian(2,2)", "--n", "4,6,8"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let mut exact_lines = 0;
    for line in text.lines() {
        if line.starts_with("identity ") {
            assert_eq!(field(line, "violation"), Some(0.0), "{line}");
            exact_lines += 1;
        }
        if line.contains("class=exact") {
            // both sides are nonzero constants summed in different orders
            let scale = field(line, "lhs").unwrap().abs().max(1.0);
            assert!(field(line, "residual").unwrap() <= 1e-12 * scale, "{line}");
            exact_lines += 1;
        }
        if line.contains("class=refinement") {
            assert!(line.contains("order=exact"), "{line}");
        }
    }
    assert!(exact_lines > 10);
}

#[test]
fn reports_are_deterministic() {
    let args = ["consistency", "--module", "adjoint(su2)", "--n", "4,5,6", "--seed", "7"];
    let a = bfcg(&args);
    let b = bfcg(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = bfcg(&["consistency", "--module", "adjoint(su2)", "--n", "4,5,6", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("bfcg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let o = bfcg(&["dof", "--p", "1", "--q", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# bfcg-report 1"));
    let bad = dir.join("missing-dir").join("report.txt");
    assert_eq!(bfcg(&["dof", "--p", "1", "--q", "0", "--out", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
