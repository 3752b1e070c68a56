//! Local degree-of-freedom count `n = N − F − S/2` for a crossed module of
//! dimensions `(p, q)`, in integer arithmetic.

use crate::{Error, Result};
use std::fmt::Write;

pub const DOF_HEADER: &str = "# bfcg-dof-report 1";

/// Every cell of the counting tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofTable {
    pub p: u64,
    pub q: u64,
    /// `(field, components)` for A, β, C, B.
    pub fields: Vec<(String, u64)>,
    pub n_canonical: u64,
    /// `(family, components)` for the eight first-class families.
    pub first_class: Vec<(String, u64)>,
    /// Relations among first-class constraints: `(label, count)`.
    pub dependencies: Vec<(String, u64)>,
    pub f: u64,
    pub second_class: Vec<(String, u64)>,
    pub s: u64,
    pub n: i64,
}

pub fn dof_count(p: u64, q: u64) -> Result<DofTable> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let named = |v: &[(&str, u64)]| v.iter().map(|(k, c)| (k.to_string(), *c)).collect::<Vec<_>>();
    let fields = named(&[("A", 4 * p), ("beta", 6 * q), ("C", 4 * q), ("B", 6 * p)]);
    let first_class = named(&[
        ("phi(B)", 3 * p),
        ("phi(C)", q),
        ("phi(beta)", 3 * q),
        ("phi(A)", p),
        ("phi(H)", 3 * p),
        ("phi(G)", q),
        ("phi(CB)", 3 * q),
        ("phi(BCbeta)", p),
    ]);
    let dependencies = named(&[("F-Bianchi", p), ("T-Bianchi", q)]);
    let second_class = named(&[("chi(B)", 3 * p), ("chi(C)", 3 * q), ("chi(A)", 3 * p), ("chi(beta)", 3 * q)]);
    let total = |v: &[(String, u64)]| v.iter().map(|(_, c)| c).sum::<u64>();
    let n_canonical = total(&fields);
    let f = total(&first_class) - total(&dependencies);
    let s = total(&second_class);
    let n = n_canonical as i64 - f as i64 - (s / 2) as i64;
    Ok(DofTable { p, q, fields, n_canonical, first_class, dependencies, f, second_class, s, n })
}

fn row(out: &mut String, key: &str, cells: &[(String, u64)]) {
    let body: Vec<String> = cells.iter().map(|(k, c)| format!("{k}={c}")).collect();
    writeln!(out, "{key} {}", body.join(" ")).unwrap();
}

pub fn dof_report(t: &DofTable) -> String {
    let mut s = String::new();
    writeln!(s, "{DOF_HEADER}").unwrap();
    writeln!(s, "p = {}", t.p).unwrap();
    writeln!(s, "q = {}", t.q).unwrap();
    row(&mut s, "fields", &t.fields);
    writeln!(s, "N = {}", t.n_canonical).unwrap();
    row(&mut s, "first-class", &t.first_class);
    row(&mut s, "dependencies", &t.dependencies);
    writeln!(s, "F = {}", t.f).unwrap();
    row(&mut s, "second-class", &t.second_class);
    writeln!(s, "S = {}", t.s).unwrap();
    writeln!(s, "n = {}", t.n).unwrap();
    s
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn scalar<T: std::str::FromStr>(line: Option<&str>, key: &str) -> Result<T> {
    let line = line.ok_or_else(|| bad(format!("missing `{key}`")))?;
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix(" = "))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| bad(format!("expected `{key} = <int>`, found `{line}`")))
}

fn cells(line: Option<&str>, key: &str) -> Result<Vec<(String, u64)>> {
    let line = line.ok_or_else(|| bad(format!("missing `{key}`")))?;
    let rest = line
        .strip_prefix(key)
        .ok_or_else(|| bad(format!("expected `{key}`, found `{line}`")))?;
    rest.split_whitespace()
        .map(|cell| {
            let (k, v) = cell.split_once('=').ok_or_else(|| bad(format!("bad cell `{cell}`")))?;
            let v = v.parse().map_err(|_| bad(format!("bad count in `{cell}`")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

pub fn parse_dof_report(text: &str) -> Result<DofTable> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some(DOF_HEADER) {
        return Err(bad("missing dof report header"));
    }
    let t = DofTable {
        p: scalar(lines.next(), "p")?,
        q: scalar(lines.next(), "q")?,
        fields: cells(lines.next(), "fields")?,
        n_canonical: scalar(lines.next(), "N")?,
        first_class: cells(lines.next(), "first-class")?,
        dependencies: cells(lines.next(), "dependencies")?,
        f: scalar(lines.next(), "F")?,
        second_class: cells(lines.next(), "second-class")?,
        s: scalar(lines.next(), "S")?,
        n: scalar(lines.next(), "n")?,
    };
    if let Some(extra) = lines.next() {
        return Err(bad(format!("trailing content `{extra}`")));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn poincare_counts() {
        let t = dof_count(6, 4).unwrap();
        assert_eq!((t.n_canonical, t.f, t.s, t.n), (100, 70, 60, 0));
    }

    #[test]
    fn bf_theory_has_empty_q_columns() {
        let t = dof_count(1, 0).unwrap();
        assert_eq!((t.n_canonical, t.f, t.s, t.n), (10, 7, 6, 0));
        assert_eq!(t.fields[1].1 + t.fields[2].1, 0);
        assert!(dof_report(&t).contains("n = 0"));
    }

    #[test]
    fn p_zero_is_rejected() {
        assert!(dof_count(0, 3).is_err());
    }

    #[test]
    fn garbage_is_rejected() {
        let text = dof_report(&dof_count(2, 2).unwrap());
        assert!(parse_dof_report(&text.replace("F = ", "F: ")).is_err());
        assert!(parse_dof_report(&text[1..]).is_err());
    }

    proptest! {
        #[test]
        fn closed_forms(p in 1u64..=50, q in 0u64..=50) {
            let t = dof_count(p, q).unwrap();
            prop_assert_eq!(t.n_canonical, 10 * (p + q));
            prop_assert_eq!(t.first_class.iter().map(|c| c.1).sum::<u64>(), 8 * (p + q));
            prop_assert_eq!(t.f, 7 * (p + q));
            prop_assert_eq!(t.s, 6 * (p + q));
            prop_assert_eq!(t.n, 0);
        }

        #[test]
        fn report_round_trips(p in 1u64..=50, q in 0u64..=50) {
            let t = dof_count(p, q).unwrap();
            let text = dof_report(&t);
            let back = parse_dof_report(&text).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(dof_report(&back), text);
        }
    }
}
