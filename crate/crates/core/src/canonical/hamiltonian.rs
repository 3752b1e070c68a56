//! Canonical and total Hamiltonians, Lagrange multipliers and the Dirac
//! consistency conditions.

use super::density::{axpy, eps3, zeros, Ctx, Family, PATCH, SPATIAL_PAIRS, V};
use super::smear::fill_patch;
use super::{Layout, PhasePoint};
use crate::crossed_module::CompiledModule;
use crate::dual::Scalar;
use crate::lattice::Field;
use crate::Result;

/// Lagrange multipliers stored in the coordinate layout: `λ(B)` on the `B`
/// slots, `λ(C)` on the `C` slots and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSet {
    pub values: Field,
}

impl MultiplierSet {
    pub fn zeros(pt: &PhasePoint) -> Self {
        Self {
            values: Field::zeros(pt.lattice.sites(), pt.layout().width()),
        }
    }

    /// Whether slot `k` of the coordinate layout is a temporal (free) component.
    pub fn is_temporal(lay: Layout, k: usize) -> bool {
        let (p, q) = (lay.p, lay.q);
        // B and beta: pairs (0, i) come first; C and A: μ = 0 comes first
        (k < 3 * p)
            || (lay.c()..lay.c() + q).contains(&k)
            || (lay.a()..lay.a() + p).contains(&k)
            || (lay.beta()..lay.beta() + 3 * q).contains(&k)
    }
}

/// The primary constraints at the patch centre, in coordinate layout.
pub(crate) fn primaries<T: Scalar>(x: &Ctx<T>) -> Vec<T> {
    let mut out = Family::PB.eval(x);
    out.extend(Family::PC.eval(x));
    out.extend(Family::PA.eval(x));
    out.extend(Family::PBeta.eval(x));
    out
}

/// `−[B_{a0i} ½ε^{ijk} H^a_{jk} + C_{α0} S(G)^α + β^α_{0k} ½ε^{kij} S(CB)_{αij}
///   + A^a_0 S(BCβ)_a] + λ·P`.
pub(crate) fn hamiltonian_density<T: Scalar>(x: &Ctx<T>, lambda: Option<&[f64]>) -> T {
    let cm = x.cm;
    let mut s = T::zero();
    for i in 1..4 {
        let mut dual_h: V<T> = zeros(x.p);
        let mut dual_cb: V<T> = zeros(x.q);
        for (j, k) in SPATIAL_PAIRS {
            let e = eps3(i, j, k);
            if e != 0.0 {
                axpy(&mut dual_h, e, &x.h(j, k));
                axpy(&mut dual_cb, e, &x.scb(j, k));
            }
        }
        s += cm.pair_g(&x.b(0, 0, i), &dual_h);
        s += dot(&x.beta(0, 0, i), &dual_cb);
    }
    s += cm.pair_h(&x.c(0, 0), &x.g3());
    s += dot(&x.a(0, 0), &x.sbcb());
    let mut h = -s;
    if let Some(lambda) = lambda {
        for (p, l) in primaries(x).iter().zip(lambda) {
            if *l != 0.0 {
                h += *p * *l;
            }
        }
    }
    h
}

fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    let mut s = T::zero();
    for (a, b) in x.iter().zip(y) {
        s += *a * *b;
    }
    s
}

pub fn canonical_hamiltonian(cm: &CompiledModule, pt: &PhasePoint) -> Result<f64> {
    super::evaluate_smeared(cm, &super::Functional::Hamiltonian { multipliers: None }, pt)
}

pub fn total_hamiltonian(cm: &CompiledModule, pt: &PhasePoint, lambda: &MultiplierSet) -> Result<f64> {
    super::evaluate_smeared(
        cm,
        &super::Functional::Hamiltonian {
            multipliers: Some(lambda.clone()),
        },
        pt,
    )
}

/// Spatial multipliers at the patch centre, in coordinate layout (temporal
/// slots left at zero).
fn spatial_multipliers(x: &Ctx<f64>) -> Vec<f64> {
    let (lay, p, q, cm) = (x.lay, x.p, x.q, x.cm);
    let mut out = vec![0.0; lay.width()];
    let a0 = x.a(0, 0);
    for i in 1..4 {
        // λ(A)_i = ∇_i A_0 − ∂ β_{i0}
        let mut la = x.cov_up_g(i, |o| x.a(o, 0));
        cm.del_apply(&x.beta(0, i, 0), -1.0, &mut la);
        out[lay.a() + i * p..lay.a() + (i + 1) * p].copy_from_slice(&la);
        // λ(C)_i = ∇^▷_i C_0 + C^β_i ▷_{βa}^α A^a_0 + ∂^α_a B^a_{0i}
        let mut lc = x.cov_up_h(i, |o| x.c(o, 0));
        axpy(&mut lc, 1.0, &x.act_raised(&x.cl(0, i), &a0));
        let mut db: V<f64> = zeros(q);
        cm.del_transpose(&x.bl(0, 0, i), 1.0, &mut db);
        axpy(&mut lc, 1.0, &x.raise_h(&db));
        out[lay.c() + i * q..lay.c() + (i + 1) * q].copy_from_slice(&lc);
    }
    for (k, (i, j)) in SPATIAL_PAIRS.into_iter().enumerate() {
        let slot = 3 + k;
        // λ(β)_{ij} = ∇^▷_i β_{0j} − ∇^▷_j β_{0i} − ▷(A_0) β_{ij}
        let mut lb = x.cov_up_h(i, |o| x.beta(o, 0, j));
        axpy(&mut lb, -1.0, &x.cov_up_h(j, |o| x.beta(o, 0, i)));
        cm.act_on(&a0, &x.beta(0, i, j), -1.0, &mut lb);
        out[lay.beta() + slot * q..lay.beta() + (slot + 1) * q].copy_from_slice(&lb);
        // λ(B)_{ij} = ∇_i B_{0j} − ∇_j B_{0i} + C^α_0 ▷_α^a_γ β^γ_{ij}
        //   − [A_0, B_{ij}] − (C^α_i ▷_α^a_γ β^γ_{0j} − C^α_j ▷_α^a_γ β^γ_{0i})
        let mut lbb = x.cov_up_g(i, |o| x.b(o, 0, j));
        axpy(&mut lbb, -1.0, &x.cov_up_g(j, |o| x.b(o, 0, i)));
        let mut m: V<f64> = zeros(p);
        cm.act_moment(&x.cl(0, 0), &x.beta(0, i, j), 1.0, &mut m);
        cm.act_moment(&x.cl(0, i), &x.beta(0, 0, j), -1.0, &mut m);
        cm.act_moment(&x.cl(0, j), &x.beta(0, 0, i), 1.0, &mut m);
        axpy(&mut lbb, 1.0, &x.raise_g(&m));
        cm.bracket_g(&a0, &x.b(0, i, j), -1.0, &mut lbb);
        out[lay.b() + slot * p..lay.b() + (slot + 1) * p].copy_from_slice(&lbb);
    }
    out
}

/// Multipliers fixed by the spatial-primary consistency conditions; the
/// temporal components are copied from `free`.
pub fn determine_multipliers(
    cm: &CompiledModule,
    pt: &PhasePoint,
    free: &MultiplierSet,
) -> Result<MultiplierSet> {
    pt.check(cm)?;
    let lay = pt.layout();
    let mut out = MultiplierSet::zeros(pt);
    let mut patch = vec![0.0; PATCH * 2 * lay.width()];
    for site in 0..pt.lattice.sites() {
        fill_patch(pt, site, &mut patch);
        let x = Ctx::new(cm, lay, &patch, pt.lattice.spacing);
        let spatial = spatial_multipliers(&x);
        let given = free.values.at(site);
        for (k, v) in out.values.at_mut(site).iter_mut().enumerate() {
            *v = if MultiplierSet::is_temporal(lay, k) { given[k] } else { spatial[k] };
        }
    }
    Ok(out)
}

/// How a consistency bracket `{K[f], H_T}` is predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyKind {
    /// Temporal primary: the matching secondary constraint.
    Temporal,
    /// Spatial primary: zero once the multipliers are determined.
    Spatial,
    /// Secondary constraint: a combination of secondary constraints.
    Secondary,
}

/// One consistency bracket `{K[f], H_T}` against its prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyRow {
    pub family: Family,
    pub kind: ConsistencyKind,
    pub bracket: f64,
    pub prediction: f64,
    pub residual: f64,
}

pub const CONSISTENCY_FAMILIES: [(Family, ConsistencyKind); 12] = [
    (Family::PhiB, ConsistencyKind::Temporal),
    (Family::PhiC, ConsistencyKind::Temporal),
    (Family::PhiBeta, ConsistencyKind::Temporal),
    (Family::PhiA, ConsistencyKind::Temporal),
    (Family::ChiB, ConsistencyKind::Spatial),
    (Family::ChiC, ConsistencyKind::Spatial),
    (Family::ChiA, ConsistencyKind::Spatial),
    (Family::ChiBeta, ConsistencyKind::Spatial),
    (Family::SH, ConsistencyKind::Secondary),
    (Family::SG, ConsistencyKind::Secondary),
    (Family::SCB, ConsistencyKind::Secondary),
    (Family::SBCB, ConsistencyKind::Secondary),
];

/// Predicted density of `{K(x), H_T}` in the components of `K`.
fn predicted_rate(x: &Ctx<f64>, family: Family) -> Vec<f64> {
    let (cm, p, q) = (x.cm, x.p, x.q);
    let a0 = x.a(0, 0);
    let dual = |i: usize, part: &dyn Fn(usize, usize) -> V<f64>, m: usize| {
        let mut out: V<f64> = zeros(m);
        for (j, k) in SPATIAL_PAIRS {
            let e = eps3(i, j, k);
            if e != 0.0 {
                axpy(&mut out, e, &part(j, k));
            }
        }
        out
    };
    let mut out = Vec::with_capacity(family.ncomp(p, q));
    match family {
        Family::PhiB => (1..4).for_each(|i| out.extend(x.lower_g(&dual(i, &|j, k| x.h(j, k), p)))),
        Family::PhiC => out.extend(x.lower_h(&x.g3())),
        Family::PhiBeta => (1..4).for_each(|i| out.extend(dual(i, &|j, k| x.scb(j, k), q))),
        Family::PhiA => out.extend(x.sbcb()),
        Family::SH => {
            for (j, k) in SPATIAL_PAIRS {
                let mut r: V<f64> = zeros(p);
                cm.bracket_g(&x.h(j, k), &a0, 1.0, &mut r);
                out.extend(r);
            }
        }
        Family::SG => {
            let mut r: V<f64> = zeros(q);
            cm.act_on(&a0, &x.g3(), -1.0, &mut r);
            for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
                cm.act_on(&x.h(i, j), &x.beta(0, 0, k), 1.0, &mut r);
            }
            out.extend(r);
        }
        Family::SCB => {
            for (j, k) in SPATIAL_PAIRS {
                let mut r: V<f64> = zeros(q);
                cm.act_on(&x.h(j, k), &x.c(0, 0), 1.0, &mut r);
                cm.act_on(&a0, &x.raise_h(&x.scb(j, k)), -1.0, &mut r);
                out.extend(x.lower_h(&r));
            }
        }
        Family::SBCB => {
            let mut up: V<f64> = zeros(p);
            cm.bracket_g(&a0, &x.raise_g(&x.sbcb()), -1.0, &mut up);
            for i in 1..4 {
                cm.bracket_g(&dual(i, &|j, k| x.h(j, k), p), &x.b(0, 0, i), 1.0, &mut up);
            }
            let mut r = x.lower_g(&up);
            cm.act_moment(&x.cl(0, 0), &x.g3(), 1.0, &mut r);
            for k in 1..4 {
                cm.act_moment(&dual(k, &|i, j| x.scb(i, j), q), &x.beta(0, 0, k), -1.0, &mut r);
            }
            out.extend(r);
        }
        _ => out.extend(std::iter::repeat(0.0).take(family.ncomp(p, q))),
    }
    out
}

/// `{K[f], H_T}` for every family of [`CONSISTENCY_FAMILIES`] with the
/// multipliers determined from `free`, against the predicted combinations of
/// constraints evaluated at the same point. Test fields come from `seed`.
pub fn consistency_residuals(
    cm: &CompiledModule,
    pt: &PhasePoint,
    free: &MultiplierSet,
    seed: u64,
) -> Result<Vec<ConsistencyRow>> {
    let lambda = determine_multipliers(cm, pt, free)?;
    let ht = super::Functional::Hamiltonian { multipliers: Some(lambda) };
    let g_ht = super::functional_gradient(cm, &ht, pt)?;
    let lay = pt.layout();
    let l = &pt.lattice;
    let mut rows = Vec::new();
    for (idx, (family, kind)) in CONSISTENCY_FAMILIES.into_iter().enumerate() {
        let test = super::smooth_test_field(family.ncomp(cm.p, cm.q), l, seed.wrapping_add(idx as u64));
        let g = super::functional_gradient(cm, &super::smear(cm, family, test.clone())?, pt)?;
        let bracket = super::bracket_of_gradients(l, &g, &g_ht);
        let mut patch = vec![0.0; PATCH * 2 * lay.width()];
        let mut terms = Vec::with_capacity(l.sites());
        for site in 0..l.sites() {
            fill_patch(pt, site, &mut patch);
            let x = Ctx::new(cm, lay, &patch, l.spacing);
            terms.push(dot(&predicted_rate(&x, family), test.at(site)));
        }
        let prediction = l.spacing.powi(3) * crate::lattice::pairwise_sum(&terms);
        rows.push(ConsistencyRow {
            family,
            kind,
            bracket,
            prediction,
            residual: (bracket - prediction).abs(),
        });
    }
    Ok(rows)
}
