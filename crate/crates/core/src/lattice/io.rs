//! Plain-text configuration format: a `key value` header followed by one
//! `field <name> <ncomp>` block per field, one site per line.

use super::{make_lattice, num_pairs, Field, FieldConfiguration};
use crate::{Error, Result};
use std::fmt::Write;

pub const FORMAT_HEADER: &str = "# bfcg-configuration 1";
const STORAGE: &str = "site-major A[mu*p+a] beta[pair*q+alpha] B[pair*p+a] C[mu*q+alpha] pairs=lexicographic(mu<nu)";

pub fn render_configuration(cfg: &FieldConfiguration) -> String {
    let mut s = String::new();
    let l = &cfg.lattice;
    writeln!(s, "{FORMAT_HEADER}").unwrap();
    writeln!(s, "module {}", cfg.module).unwrap();
    writeln!(s, "dim {}", l.dim).unwrap();
    writeln!(s, "form_dim {}", cfg.form_dim).unwrap();
    writeln!(s, "n {}", l.n).unwrap();
    writeln!(s, "spacing {:?}", l.spacing).unwrap();
    writeln!(s, "p {}", cfg.p).unwrap();
    writeln!(s, "q {}", cfg.q).unwrap();
    writeln!(s, "storage {STORAGE}").unwrap();
    for (name, f) in ["A", "beta", "B", "C"].iter().zip(cfg.fields()) {
        writeln!(s, "field {name} {}", f.ncomp).unwrap();
        if f.ncomp == 0 {
            continue;
        }
        for site in 0..l.sites() {
            let row: Vec<String> = f.at(site).iter().map(|v| format!("{v:?}")).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
    }
    s
}

pub(crate) fn header<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<&'a str> {
    let line = lines
        .next()
        .ok_or_else(|| Error::Malformed(format!("missing header `{key}`")))?;
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| Error::Malformed(format!("expected `{key}`, found `{line}`")))
}

pub(crate) fn number<T: std::str::FromStr>(s: &str, key: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Malformed(format!("bad value for `{key}`: `{s}`")))
}

pub fn parse_configuration(text: &str) -> Result<FieldConfiguration> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(FORMAT_HEADER) {
        return Err(Error::Malformed("missing format header".into()));
    }
    let module = header(&mut lines, "module")?.trim().to_string();
    let dim: usize = number(header(&mut lines, "dim")?, "dim")?;
    let form_dim: usize = number(header(&mut lines, "form_dim")?, "form_dim")?;
    let n: usize = number(header(&mut lines, "n")?, "n")?;
    let spacing: f64 = number(header(&mut lines, "spacing")?, "spacing")?;
    let p: usize = number(header(&mut lines, "p")?, "p")?;
    let q: usize = number(header(&mut lines, "q")?, "q")?;
    header(&mut lines, "storage")?;
    let lattice = make_lattice(dim, n, spacing)?;
    if !(form_dim == dim || (dim == 3 && form_dim == 4)) {
        return Err(Error::Malformed(format!("form_dim {form_dim} on a {dim}-dimensional lattice")));
    }
    let mut cfg = FieldConfiguration::zeros(&module, lattice, form_dim, p, q);
    let np = num_pairs(form_dim);
    let expected = [form_dim * p, np * q, np * p, form_dim * q];
    for (k, name) in ["A", "beta", "B", "C"].iter().enumerate() {
        let decl = header(&mut lines, "field")?;
        let mut parts = decl.split_whitespace();
        if parts.next() != Some(name) {
            return Err(Error::Malformed(format!("expected field `{name}`, found `{decl}`")));
        }
        let ncomp: usize = number(parts.next().unwrap_or(""), name)?;
        if ncomp != expected[k] {
            return Err(Error::ShapeMismatch {
                field: name.to_string(),
                expected: vec![lattice.sites(), expected[k]],
                found: vec![lattice.sites(), ncomp],
            });
        }
        let field: &mut Field = cfg.fields_mut()[k];
        if ncomp == 0 {
            continue;
        }
        for site in 0..lattice.sites() {
            let row = lines
                .next()
                .ok_or_else(|| Error::Malformed(format!("field `{name}` truncated at site {site}")))?;
            let vals: Vec<f64> = row
                .split_whitespace()
                .map(|v| number(v, name))
                .collect::<Result<_>>()?;
            if vals.len() != ncomp {
                return Err(Error::ShapeMismatch {
                    field: name.to_string(),
                    expected: vec![ncomp],
                    found: vec![vals.len()],
                });
            }
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("field `{name}` at site {site}")));
            }
            field.at_mut(site).copy_from_slice(&vals);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Malformed(format!("trailing content `{extra}`")));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed_module::builtin_module;
    use crate::lattice::sample_smooth_fields;

    #[test]
    fn round_trip_is_exact() {
        let cm = builtin_module("adjoint(su2)").unwrap();
        let l = make_lattice(3, 4, 0.3).unwrap();
        let cfg = sample_smooth_fields(&cm, &l, 1, 5).unwrap();
        let back = parse_configuration(&render_configuration(&cfg)).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_truncated_and_non_finite_input() {
        let cm = builtin_module("abelian(1,1)").unwrap();
        let l = make_lattice(3, 4, 0.3).unwrap();
        let text = render_configuration(&sample_smooth_fields(&cm, &l, 1, 5).unwrap());
        let cut: String = text.lines().take(30).collect::<Vec<_>>().join("\n");
        assert!(parse_configuration(&cut).is_err());
        let lines: Vec<&str> = text.lines().collect();
        let mut bad = lines.clone();
        bad[11] = "NaN NaN NaN";
        assert!(matches!(parse_configuration(&bad.join("\n")), Err(Error::NonFinite(_) | Error::ShapeMismatch { .. })));
    }
}
