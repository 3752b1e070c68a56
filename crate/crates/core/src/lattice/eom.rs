//! Field equations and their cross-check against the discrete action.

use super::action::{check_action, density_at};
use super::curvature::{g3_at, h_at, pair_of};
use super::derivative::d_at;
use super::{levi_civita4, num_pairs, pair_index, pairs, Field, FieldConfiguration};
use crate::crossed_module::CompiledModule;
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Max-abs (over sites and components) of each field equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomResiduals {
    pub h: f64,
    pub g3: f64,
    /// `ε^{μνρσ}(∇_μ B_{aνρ} + β^α_{μν} ▷_{αaβ} C^β_ρ)`
    pub e1: f64,
    /// `ε^{μνρσ}(∇_μ C_{αν} − ½ ∂_α^a B_{aμν})`
    pub e2: f64,
}

/// `E1_a^σ` at one site, `out[σ·p + a]`.
pub(crate) fn e1_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, out: &mut [f64]) {
    let (l, p, q) = (&cfg.lattice, cfg.p, cfg.q);
    let (a, b, beta, c) = (cfg.a.at(site), cfg.b.at(site), cfg.beta.at(site), cfg.c.at(site));
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut db = vec![0.0; p];
    let mut bl = vec![0.0; p];
    let mut bp = vec![0.0; p];
    let mut betap = vec![0.0; q];
    let mut betal = vec![0.0; q];
    for sigma in 0..4 {
        let o = &mut out[sigma * p..(sigma + 1) * p];
        for mu in 0..4 {
            for nu in 0..4 {
                for rho in 0..4 {
                    let e = levi_civita4([mu, nu, rho, sigma]);
                    if e == 0.0 {
                        continue;
                    }
                    // ∇_μ B_{νρ} with the index lowered
                    let (slot, sign) = pair_index(4, nu, rho).expect("distinct");
                    for (x, v) in db.iter_mut().enumerate() {
                        *v = sign * d_at(&cfg.b, l, site, mu, slot * p + x);
                    }
                    cm.lower_g(&db, e, o);
                    let bnr = pair_of(b, 4, p, nu, rho, &mut bp);
                    bl.iter_mut().for_each(|v| *v = 0.0);
                    cm.lower_g(bnr, 1.0, &mut bl);
                    cm.coad_g(&a[mu * p..(mu + 1) * p], &bl, e, o);
                    // β^α_{μν} ▷^γ_{aβ} q_{γα} C^β_ρ
                    let bmn = pair_of(beta, 4, q, mu, nu, &mut betap);
                    betal.iter_mut().for_each(|v| *v = 0.0);
                    cm.lower_h(bmn, 1.0, &mut betal);
                    let cr = &c[rho * q..(rho + 1) * q];
                    for t in &cm.act {
                        o[t.j] += e * t.v * betal[t.i] * cr[t.k];
                    }
                }
            }
        }
    }
}

/// `E2_α^{ρσ}` at one site, ordered pairs `ρ < σ`, `out[pair·q + α]`.
pub(crate) fn e2_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, out: &mut [f64]) {
    let (l, p, q) = (&cfg.lattice, cfg.p, cfg.q);
    let (a, b, c) = (cfg.a.at(site), cfg.b.at(site), cfg.c.at(site));
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut dc = vec![0.0; q];
    let mut bp = vec![0.0; p];
    let mut bl = vec![0.0; p];
    for (k, (rho, sigma)) in pairs(4).into_iter().enumerate() {
        let o = &mut out[k * q..(k + 1) * q];
        for mu in 0..4 {
            for nu in 0..4 {
                let e = levi_civita4([mu, nu, rho, sigma]);
                if e == 0.0 {
                    continue;
                }
                for (x, v) in dc.iter_mut().enumerate() {
                    *v = d_at(&cfg.c, l, site, mu, nu * q + x);
                }
                cm.act_on(&a[mu * p..(mu + 1) * p], &c[nu * q..(nu + 1) * q], 1.0, &mut dc);
                cm.lower_h(&dc, e, o);
                let bmn = pair_of(b, 4, p, mu, nu, &mut bp);
                bl.iter_mut().for_each(|v| *v = 0.0);
                cm.lower_g(bmn, 1.0, &mut bl);
                cm.del_transpose(&bl, -0.5 * e, o);
            }
        }
    }
}

fn collect(
    cm: &CompiledModule,
    cfg: &FieldConfiguration,
    ncomp: usize,
    kernel: fn(&CompiledModule, &FieldConfiguration, usize, &mut [f64]),
) -> Result<Field> {
    check_action(cm, cfg)?;
    let mut out = Field::zeros(cfg.lattice.sites(), ncomp);
    for site in 0..cfg.lattice.sites() {
        kernel(cm, cfg, site, out.at_mut(site));
    }
    Ok(out)
}

/// Per-site `E1` (first equation of the A/β pair).
pub fn eom_e1(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    collect(cm, cfg, 4 * cfg.p, e1_at)
}

/// Per-site `E2` (second equation of the A/β pair).
pub fn eom_e2(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    collect(cm, cfg, num_pairs(4) * cfg.q, e2_at)
}

pub fn eom_residuals(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<EomResiduals> {
    check_action(cm, cfg)?;
    let (p, q) = (cfg.p, cfg.q);
    let mut h = vec![0.0; 6 * p];
    let mut g = vec![0.0; 4 * q];
    let mut e1 = vec![0.0; 4 * p];
    let mut e2 = vec![0.0; 6 * q];
    let mut r = EomResiduals { h: 0.0, g3: 0.0, e1: 0.0, e2: 0.0 };
    let amax = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for site in 0..cfg.lattice.sites() {
        h_at(cm, cfg, site, &mut h);
        g3_at(cm, cfg, site, &mut g);
        e1_at(cm, cfg, site, &mut e1);
        e2_at(cm, cfg, site, &mut e2);
        r.h = r.h.max(amax(&h));
        r.g3 = r.g3.max(amax(&g));
        r.e1 = r.e1.max(amax(&e1));
        r.e2 = r.e2.max(amax(&e2));
    }
    Ok(r)
}

/// Finite-difference gradient of the action versus the field equations:
/// `∂S/∂A^a_σ(x) = −½ a⁴ E1_a^σ(x)` and `∂S/∂β^α_{ρσ}(x) = a⁴ E2_α^{ρσ}(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    pub samples: usize,
    pub max_abs_error: f64,
    pub max_abs_gradient: f64,
    pub relative: f64,
}

const FD_STEP: f64 = 1e-3;

/// Change of the action when one entry moves by `delta`; only the densities
/// within one lattice step of the site are affected.
fn local_action_change(
    cm: &CompiledModule,
    cfg: &mut FieldConfiguration,
    which: usize,
    site: usize,
    comp: usize,
    delta: f64,
) -> f64 {
    let l = cfg.lattice;
    let mut sites = vec![site];
    for axis in 0..4 {
        sites.push(l.shift(site, axis, 1));
        sites.push(l.shift(site, axis, -1));
    }
    let mut h = vec![0.0; 6 * cfg.p];
    let mut g = vec![0.0; 4 * cfg.q];
    let mut total = |cfg: &FieldConfiguration| -> f64 {
        sites.iter().map(|&s| density_at(cm, cfg, s, &mut h, &mut g)).sum()
    };
    let slot = |cfg: &mut FieldConfiguration, v: Option<f64>| -> f64 {
        let f = if which == 0 { &mut cfg.a } else { &mut cfg.beta };
        let x = &mut f.at_mut(site)[comp];
        if let Some(v) = v {
            *x = v;
        }
        *x
    };
    let orig = slot(cfg, None);
    slot(cfg, Some(orig + delta));
    let up = total(cfg);
    slot(cfg, Some(orig - delta));
    let dn = total(cfg);
    slot(cfg, Some(orig));
    (up - dn) * l.cell_volume()
}

pub fn eom_gradient_check(
    cm: &CompiledModule,
    cfg: &FieldConfiguration,
    samples: usize,
    seed: u64,
) -> Result<GradientCheck> {
    check_action(cm, cfg)?;
    let mut work = cfg.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vol = cfg.lattice.cell_volume();
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    let mut e1 = vec![0.0; 4 * cfg.p];
    let mut e2 = vec![0.0; 6 * cfg.q];
    for i in 0..samples {
        let which = if cfg.q == 0 { 0 } else { i % 2 };
        let site = rng.gen_range(0..cfg.lattice.sites());
        let (comp, predicted) = if which == 0 {
            let comp = rng.gen_range(0..4 * cfg.p);
            e1_at(cm, cfg, site, &mut e1);
            (comp, -0.5 * vol * e1[comp])
        } else {
            let comp = rng.gen_range(0..6 * cfg.q);
            e2_at(cm, cfg, site, &mut e2);
            (comp, vol * e2[comp])
        };
        let fd = local_action_change(cm, &mut work, which, site, comp, FD_STEP) / (2.0 * FD_STEP);
        err = err.max((fd - predicted).abs());
        scale = scale.max(fd.abs()).max(predicted.abs());
    }
    Ok(GradientCheck {
        samples,
        max_abs_error: err,
        max_abs_gradient: scale,
        relative: if scale > 0.0 { err / scale } else { err },
    })
}
