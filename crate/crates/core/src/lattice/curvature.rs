//! Curvatures of `(A, β)` and of the multiplier forms `(B, C)`.
//!
//! Three-form components are the cyclic sums
//! `X_{μνρ} = Y_{μνρ} + Y_{νρμ} + Y_{ρμν}`, i.e. the components of
//! `X = (1/6) X_{μνρ} dx^μ ∧ dx^ν ∧ dx^ρ`; they are stored on ordered triples.

use super::derivative::d_at;
use super::{num_pairs, pair_index, pairs, triples, Field, FieldConfiguration};
use crate::crossed_module::CompiledModule;
use crate::{Error, Result};

pub(crate) fn check(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<()> {
    if cm.p != cfg.p || cm.q != cfg.q {
        return Err(Error::LatticeMismatch(format!(
            "module {} has (p, q) = ({}, {}), configuration has ({}, {})",
            cm.name, cm.p, cm.q, cfg.p, cfg.q
        )));
    }
    if cfg.form_dim != cfg.lattice.dim {
        return Err(Error::LatticeMismatch(format!(
            "form dimension {} on a {}-dimensional lattice; spacetime derivatives unavailable",
            cfg.form_dim, cfg.lattice.dim
        )));
    }
    Ok(())
}

/// Adds `s·X_{μν}` (pair storage, `m` components) to `out`.
#[inline]
pub(crate) fn add_pair(x: &[f64], dim: usize, m: usize, mu: usize, nu: usize, s: f64, out: &mut [f64]) {
    if let Some((k, sign)) = pair_index(dim, mu, nu) {
        for (o, v) in out.iter_mut().zip(&x[k * m..(k + 1) * m]) {
            *o += s * sign * v;
        }
    }
}

/// `X_{μν}` into a scratch buffer.
#[inline]
pub(crate) fn pair_of<'a>(x: &[f64], dim: usize, m: usize, mu: usize, nu: usize, buf: &'a mut [f64]) -> &'a [f64] {
    buf.iter_mut().for_each(|v| *v = 0.0);
    add_pair(x, dim, m, mu, nu, 1.0, buf);
    buf
}

/// `F^a_{μν}` at one site, all ordered pairs.
pub(crate) fn f_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, out: &mut [f64]) {
    let (l, p, d) = (&cfg.lattice, cfg.p, cfg.form_dim);
    let a = cfg.a.at(site);
    for (k, (mu, nu)) in pairs(d).into_iter().enumerate() {
        let o = &mut out[k * p..(k + 1) * p];
        for (c, slot) in o.iter_mut().enumerate() {
            *slot = d_at(&cfg.a, l, site, mu, nu * p + c) - d_at(&cfg.a, l, site, nu, mu * p + c);
        }
        cm.bracket_g(&a[mu * p..(mu + 1) * p], &a[nu * p..(nu + 1) * p], 1.0, o);
    }
}

/// `H = F − ∂β` at one site.
pub(crate) fn h_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, out: &mut [f64]) {
    f_at(cm, cfg, site, out);
    let (p, q) = (cfg.p, cfg.q);
    let beta = cfg.beta.at(site);
    for k in 0..num_pairs(cfg.form_dim) {
        cm.del_apply(&beta[k * q..(k + 1) * q], -1.0, &mut out[k * p..(k + 1) * p]);
    }
}

/// `T^α_{μν} = ∂_μ C_ν − ∂_ν C_μ + ▷(A_μ) C_ν − ▷(A_ν) C_μ` at one site.
pub(crate) fn t_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, out: &mut [f64]) {
    let (l, p, q, d) = (&cfg.lattice, cfg.p, cfg.q, cfg.form_dim);
    let (a, c) = (cfg.a.at(site), cfg.c.at(site));
    for (k, (mu, nu)) in pairs(d).into_iter().enumerate() {
        let o = &mut out[k * q..(k + 1) * q];
        for (g, slot) in o.iter_mut().enumerate() {
            *slot = d_at(&cfg.c, l, site, mu, nu * q + g) - d_at(&cfg.c, l, site, nu, mu * q + g);
        }
        cm.act_on(&a[mu * p..(mu + 1) * p], &c[nu * q..(nu + 1) * q], 1.0, o);
        cm.act_on(&a[nu * p..(nu + 1) * p], &c[mu * q..(mu + 1) * q], -1.0, o);
    }
}

/// Cyclic 3-form curvature of a 2-form `x` with `m` components; `conn` adds
/// `s·ρ(A_μ) X_{νρ}` for the relevant representation.
fn three_form_at(
    cfg: &FieldConfiguration,
    x: &super::Field,
    m: usize,
    site: usize,
    out: &mut [f64],
    conn: impl Fn(&[f64], &[f64], &mut [f64]),
) {
    let (l, p, d) = (&cfg.lattice, cfg.p, cfg.form_dim);
    let a = cfg.a.at(site);
    let xs = x.at(site);
    let mut buf = vec![0.0; m];
    for (k, (i, j, r)) in triples(d).into_iter().enumerate() {
        let o = &mut out[k * m..(k + 1) * m];
        o.iter_mut().for_each(|v| *v = 0.0);
        for (mu, nu, rho) in [(i, j, r), (j, r, i), (r, i, j)] {
            let (slot, sign) = pair_index(d, nu, rho).expect("distinct");
            for (c, v) in o.iter_mut().enumerate() {
                *v += sign * d_at(x, l, site, mu, slot * m + c);
            }
            let xp = pair_of(xs, d, m, nu, rho, &mut buf);
            conn(&a[mu * p..(mu + 1) * p], xp, o);
        }
    }
}

/// `Gcal^α_{μνρ}` (curvature of β) at one site.
pub(crate) fn g3_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, out: &mut [f64]) {
    three_form_at(cfg, &cfg.beta, cfg.q, site, out, |a, x, o| cm.act_on(a, x, 1.0, o));
}

/// `G^a_{μνρ}` (curvature of B) at one site.
pub(crate) fn gb_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, out: &mut [f64]) {
    three_form_at(cfg, &cfg.b, cfg.p, site, out, |a, x, o| cm.bracket_g(a, x, 1.0, o));
}

fn collect(
    cm: &CompiledModule,
    cfg: &FieldConfiguration,
    ncomp: usize,
    kernel: fn(&CompiledModule, &FieldConfiguration, usize, &mut [f64]),
) -> Result<Field> {
    check(cm, cfg)?;
    let mut out = Field::zeros(cfg.lattice.sites(), ncomp);
    for site in 0..cfg.lattice.sites() {
        kernel(cm, cfg, site, out.at_mut(site));
    }
    Ok(out)
}

pub fn curvature_f(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    collect(cm, cfg, num_pairs(cfg.form_dim) * cfg.p, f_at)
}

pub fn fake_curvature(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    collect(cm, cfg, num_pairs(cfg.form_dim) * cfg.p, h_at)
}

pub fn curvature_t(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    collect(cm, cfg, num_pairs(cfg.form_dim) * cfg.q, t_at)
}

pub fn curvature_g3(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    collect(cm, cfg, triples(cfg.form_dim).len() * cfg.q, g3_at)
}

pub fn curvature_gb(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    collect(cm, cfg, triples(cfg.form_dim).len() * cfg.p, gb_at)
}

/// All curvatures of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBundle {
    pub f: Field,
    pub h: Field,
    pub g3: Field,
    pub t: Field,
    pub gb: Field,
}

impl CurvatureBundle {
    pub fn compute(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Self> {
        Ok(Self {
            f: curvature_f(cm, cfg)?,
            h: fake_curvature(cm, cfg)?,
            g3: curvature_g3(cm, cfg)?,
            t: curvature_t(cm, cfg)?,
            gb: curvature_gb(cm, cfg)?,
        })
    }
}
