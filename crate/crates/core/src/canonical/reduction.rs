//! Second-class constraints as gauge-fixing conditions: with `χ = 0` and the
//! temporal momenta dropped, each first-class density collapses onto a
//! momentum-form density of the gauge-fixed theory.

use super::density::{eps3, Ctx, Family, PATCH, SPATIAL_PAIRS};
use super::smear::fill_patch;
use super::{density, PhasePoint};
use crate::crossed_module::CompiledModule;
use crate::Result;

/// Largest componentwise difference between a reduced first-class density
/// and its gauge-fixed counterpart (`None` for the temporal primaries, which
/// reduce to zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionRow {
    pub first_class: Family,
    pub reduced: Option<Family>,
    pub max_diff: f64,
}

pub const REDUCTION_PAIRS: [(Family, Option<Family>); 8] = [
    (Family::PhiB, None),
    (Family::PhiC, None),
    (Family::PhiBeta, None),
    (Family::PhiA, None),
    (Family::PhiH, Some(Family::SigmaH)),
    (Family::PhiG, Some(Family::SigmaG)),
    (Family::PhiCB, Some(Family::SigmaCB)),
    (Family::PhiBCB, Some(Family::SigmaBCB)),
];

/// The same coordinates with momenta fixed by `χ = 0` and vanishing temporal
/// momenta.
pub fn gauge_fix(cm: &CompiledModule, pt: &PhasePoint) -> Result<PhasePoint> {
    pt.check(cm)?;
    let mut out = pt.clone();
    for site in 0..pt.lattice.sites() {
        let pi = density::on_shell_momenta(cm, pt.layout(), pt.coords.at(site));
        out.momenta.at_mut(site).copy_from_slice(&pi);
    }
    Ok(out)
}

/// Reduced density of `fc` in the index form of its counterpart.
fn reduced<T: crate::dual::Scalar>(x: &Ctx<T>, fc: Family) -> Vec<T> {
    let mut v = fc.eval(x);
    match fc {
        // φ(H)^{ai} against the pair components S(H)^a_{jk}: take the ε-dual.
        Family::PhiH => {
            let p = x.p;
            let mut dual = Vec::with_capacity(3 * p);
            for (j, k) in SPATIAL_PAIRS {
                let i = (1..4).find(|&i| eps3(i, j, k) != 0.0).expect("complement");
                let e = eps3(i, j, k);
                dual.extend(v[(i - 1) * p..i * p].iter().map(|c| *c * e));
            }
            v = dual;
        }
        Family::PhiCB => {
            let q = x.q;
            v = (0..3).flat_map(|b| x.lower_h(&v[b * q..(b + 1) * q])).collect();
        }
        _ => {}
    }
    v
}

/// Imposes the gauge fixing at `pt` and compares every first-class density
/// with its gauge-fixed counterpart site by site.
pub fn gauge_fixed_reduction(cm: &CompiledModule, pt: &PhasePoint) -> Result<Vec<ReductionRow>> {
    let fixed = gauge_fix(cm, pt)?;
    let lay = fixed.layout();
    let mut patch = vec![0.0; PATCH * 2 * lay.width()];
    let mut rows: Vec<ReductionRow> = REDUCTION_PAIRS
        .iter()
        .map(|&(first_class, reduced)| ReductionRow { first_class, reduced, max_diff: 0.0 })
        .collect();
    for site in 0..fixed.lattice.sites() {
        fill_patch(&fixed, site, &mut patch);
        let x = Ctx::new(cm, lay, &patch, fixed.lattice.spacing);
        for row in rows.iter_mut() {
            let lhs = reduced(&x, row.first_class);
            let rhs = match row.reduced {
                Some(f) => f.eval(&x),
                None => vec![0.0; lhs.len()],
            };
            let d = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            row.max_diff = row.max_diff.max(d);
        }
    }
    Ok(rows)
}
