//! Plain-text phase points: a `key value` header, then the coordinate and
//! momentum blocks, one site per line in the canonical slot layout.

use super::{Layout, PhasePoint};
use crate::lattice::io::{header, number};
use crate::lattice::{make_lattice, Field};
use crate::{Error, Result};
use std::fmt::Write;

pub const PHASE_HEADER: &str = "# bfcg-phase-point 1";
const STORAGE: &str = "site-major B[pair*p+a] C[mu*q+alpha] A[mu*p+a] beta[pair*q+alpha] pairs=lexicographic(mu<nu)";

pub fn render_phase_point(pt: &PhasePoint) -> String {
    let mut s = String::new();
    let l = &pt.lattice;
    writeln!(s, "{PHASE_HEADER}").unwrap();
    writeln!(s, "module {}", pt.module).unwrap();
    writeln!(s, "n {}", l.n).unwrap();
    writeln!(s, "spacing {:?}", l.spacing).unwrap();
    writeln!(s, "p {}", pt.p).unwrap();
    writeln!(s, "q {}", pt.q).unwrap();
    writeln!(s, "storage {STORAGE}").unwrap();
    for (name, f) in [("coords", &pt.coords), ("momenta", &pt.momenta)] {
        writeln!(s, "{name} {}", f.ncomp).unwrap();
        for site in 0..l.sites() {
            let row: Vec<String> = f.at(site).iter().map(|v| format!("{v:?}")).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
    }
    s
}

pub fn parse_phase_point(text: &str) -> Result<PhasePoint> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(PHASE_HEADER) {
        return Err(Error::Malformed("missing phase-point header".into()));
    }
    let module = header(&mut lines, "module")?.trim().to_string();
    let n: usize = number(header(&mut lines, "n")?, "n")?;
    let spacing: f64 = number(header(&mut lines, "spacing")?, "spacing")?;
    let p: usize = number(header(&mut lines, "p")?, "p")?;
    let q: usize = number(header(&mut lines, "q")?, "q")?;
    header(&mut lines, "storage")?;
    let lattice = make_lattice(3, n, spacing)?;
    let width = Layout::new(p, q).width();
    let mut pt = PhasePoint::zeros(&module, lattice, p, q);
    for name in ["coords", "momenta"] {
        let ncomp: usize = number(header(&mut lines, name)?, name)?;
        if ncomp != width {
            return Err(Error::ShapeMismatch {
                field: name.to_string(),
                expected: vec![lattice.sites(), width],
                found: vec![lattice.sites(), ncomp],
            });
        }
        let field: &mut Field = if name == "coords" { &mut pt.coords } else { &mut pt.momenta };
        for site in 0..lattice.sites() {
            let row = lines
                .next()
                .ok_or_else(|| Error::Malformed(format!("`{name}` truncated at site {site}")))?;
            let vals: Vec<f64> = row
                .split_whitespace()
                .map(|v| number(v, name))
                .collect::<Result<_>>()?;
            if vals.len() != width {
                return Err(Error::ShapeMismatch {
                    field: name.to_string(),
                    expected: vec![width],
                    found: vec![vals.len()],
                });
            }
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("`{name}` at site {site}")));
            }
            field.at_mut(site).copy_from_slice(&vals);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Malformed(format!("trailing content `{extra}`")));
    }
    Ok(pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{MomentumRule, PhaseRecipe};
    use crate::crossed_module::builtin_module;

    #[test]
    fn round_trip_is_exact() {
        let dcm = builtin_module("vector_poincare").unwrap();
        let cm = dcm.compile().unwrap();
        let l = make_lattice(3, 4, 0.4).unwrap();
        let pt = PhaseRecipe::random(&dcm, 2, MomentumRule::Random { seed: 9 })
            .unwrap()
            .evaluate(&cm, &l)
            .unwrap();
        assert_eq!(parse_phase_point(&render_phase_point(&pt)).unwrap(), pt);
    }

    #[test]
    fn rejects_wrong_width() {
        let pt = PhasePoint::zeros("abelian(1,1)", make_lattice(3, 4, 1.0).unwrap(), 1, 1);
        let text = render_phase_point(&pt).replace("coords 20", "coords 19");
        assert!(matches!(parse_phase_point(&text), Err(Error::ShapeMismatch { .. })));
    }
}
