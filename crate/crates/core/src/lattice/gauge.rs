//! Thin (group-valued) and fat (h-valued 1-form) gauge transformations.

use super::curvature::check;
use super::derivative::d_at;
use super::recipe::{sample_components, ScalarRecipe};
use super::{pair_index, pairs, Field, FieldConfiguration, Lattice};
use crate::crossed_module::CompiledModule;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub const DEFAULT_DEXP_ORDER: usize = 6;

/// Coefficient `k` in `B_{μν} ↦ B_{μν} + k (T(C_μ, η_ν) − T(C_ν, η_μ))`.
pub const FAT_B_SHIFT: f64 = 1.0;

/// Thin parameter `ε^a(x)` and fat parameter `η^α_μ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeData {
    pub thin: Field,
    pub fat: Field,
}

impl GaugeData {
    pub fn zeros(lattice: &Lattice, form_dim: usize, p: usize, q: usize) -> Self {
        Self {
            thin: Field::zeros(lattice.sites(), p),
            fat: Field::zeros(lattice.sites(), form_dim * q),
        }
    }

    /// Samples smooth parameters from recipes (`p` thin, `form_dim·q` fat components).
    pub fn from_recipes(
        lattice: &Lattice,
        form_dim: usize,
        thin: &[ScalarRecipe],
        fat: &[ScalarRecipe],
    ) -> Self {
        Self {
            thin: sample_components(thin, lattice, form_dim),
            fat: sample_components(fat, lattice, form_dim),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.thin.data.iter().chain(&self.fat.data).all(|x| x.is_finite())
    }
}

fn apply(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(x)).as_slice().to_vec()
}

/// `φ = exp(ε)`: `A ↦ Ad(e^{−ε}) A + Σ_{k≤order} (−ad_ε)^k/(k+1)! dε`,
/// `β, C ↦ e^{−▷_ε}`, `B ↦ Ad(e^{−ε}) B`.
pub fn thin_gauge_transform(
    cm: &CompiledModule,
    cfg: &FieldConfiguration,
    eps: &Field,
    order: usize,
) -> Result<FieldConfiguration> {
    check(cm, cfg)?;
    if order < 1 {
        return Err(Error::InvalidArgument("dexp truncation order must be at least 1".into()));
    }
    if eps.ncomp != cfg.p || eps.sites() != cfg.lattice.sites() {
        return Err(Error::LatticeMismatch("thin parameter does not match the configuration".into()));
    }
    if eps.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("thin gauge parameter".into()));
    }
    let (l, p, q, d) = (&cfg.lattice, cfg.p, cfg.q, cfg.form_dim);
    let mut out = cfg.clone();
    for site in 0..l.sites() {
        let e = eps.at(site);
        let neg_ad = -cm.ad_matrix(e);
        let g = neg_ad.clone().exp();
        let r = (-cm.act_matrix(e)).exp();
        // dexp series: Σ_k (−ad_ε)^k / (k+1)!
        let mut series = DMatrix::<f64>::identity(p, p);
        let mut term = DMatrix::<f64>::identity(p, p);
        for k in 1..=order {
            term = &term * &neg_ad / (k as f64 + 1.0);
            series += &term;
        }
        let a = cfg.a.at(site);
        let oa = out.a.at_mut(site);
        for mu in 0..d {
            let de: Vec<f64> = (0..p).map(|x| d_at(eps, l, site, mu, x)).collect();
            let rot = apply(&g, &a[mu * p..(mu + 1) * p]);
            let shift = apply(&series, &de);
            for x in 0..p {
                oa[mu * p + x] = rot[x] + shift[x];
            }
        }
        let rotate = |src: &[f64], dst: &mut [f64], m: &DMatrix<f64>, k: usize| {
            for (i, chunk) in src.chunks(k).enumerate() {
                dst[i * k..(i + 1) * k].copy_from_slice(&apply(m, chunk));
            }
        };
        if q > 0 {
            rotate(cfg.beta.at(site), out.beta.at_mut(site), &r, q);
            rotate(cfg.c.at(site), out.c.at_mut(site), &r, q);
        }
        rotate(cfg.b.at(site), out.b.at_mut(site), &g, p);
    }
    Ok(out)
}

/// `A ↦ A + ∂η`, `β_{μν} ↦ β + D_μη_ν − D_νη_μ + φ(η_μ, η_ν)` with
/// `D_μ = ∂_μ + ▷(A_μ)`, `C ↦ C`, `B_{μν} ↦ B + k(T(C_μ,η_ν) − T(C_ν,η_μ))`.
pub fn fat_gauge_transform(
    cm: &CompiledModule,
    cfg: &FieldConfiguration,
    eta: &Field,
) -> Result<FieldConfiguration> {
    check(cm, cfg)?;
    let (l, p, q, d) = (&cfg.lattice, cfg.p, cfg.q, cfg.form_dim);
    if eta.ncomp != d * q || eta.sites() != l.sites() {
        return Err(Error::LatticeMismatch("fat parameter does not match the configuration".into()));
    }
    if eta.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("fat gauge parameter".into()));
    }
    let mut out = cfg.clone();
    for site in 0..l.sites() {
        let (a, c, e) = (cfg.a.at(site), cfg.c.at(site), eta.at(site));
        let oa = out.a.at_mut(site);
        for mu in 0..d {
            cm.del_apply(&e[mu * q..(mu + 1) * q], 1.0, &mut oa[mu * p..(mu + 1) * p]);
        }
        let ob = out.beta.at_mut(site);
        for (k, (mu, nu)) in pairs(d).into_iter().enumerate() {
            let o = &mut ob[k * q..(k + 1) * q];
            for (x, v) in o.iter_mut().enumerate() {
                *v += d_at(eta, l, site, mu, nu * q + x) - d_at(eta, l, site, nu, mu * q + x);
            }
            let (em, en) = (&e[mu * q..(mu + 1) * q], &e[nu * q..(nu + 1) * q]);
            cm.act_on(&a[mu * p..(mu + 1) * p], en, 1.0, o);
            cm.act_on(&a[nu * p..(nu + 1) * p], em, -1.0, o);
            cm.bracket_h(em, en, 1.0, o);
        }
        let obb = out.b.at_mut(site);
        for (k, (mu, nu)) in pairs(d).into_iter().enumerate() {
            debug_assert_eq!(pair_index(d, mu, nu), Some((k, 1.0)));
            let o = &mut obb[k * p..(k + 1) * p];
            cm.tmap_apply(&c[mu * q..(mu + 1) * q], &e[nu * q..(nu + 1) * q], FAT_B_SHIFT, o);
            cm.tmap_apply(&c[nu * q..(nu + 1) * q], &e[mu * q..(mu + 1) * q], -FAT_B_SHIFT, o);
        }
    }
    Ok(out)
}
/// Largest deviation of `F`, `H` and `G` from exact covariance
/// (`Ad(e^{−ε})` on g-valued, `e^{−▷_ε}` on h-valued curvatures) under the
/// constant thin transformation `ε`.
pub fn constant_thin_covariance(cm: &CompiledModule, cfg: &FieldConfiguration, eps: &[f64]) -> Result<f64> {
    check(cm, cfg)?;
    if eps.len() != cfg.p {
        return Err(Error::ShapeMismatch {
            field: "thin parameter".into(),
            expected: vec![cfg.p],
            found: vec![eps.len()],
        });
    }
    let mut field = Field::zeros(cfg.lattice.sites(), cfg.p);
    for s in 0..cfg.lattice.sites() {
        field.at_mut(s).copy_from_slice(eps);
    }
    let t = thin_gauge_transform(cm, cfg, &field, DEFAULT_DEXP_ORDER)?;
    let g = (-cm.ad_matrix(eps)).exp();
    let r = (-cm.act_matrix(eps)).exp();
    let dev = |before: &Field, after: &Field, m: usize, mat: &DMatrix<f64>| -> f64 {
        if m == 0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for s in 0..before.sites() {
            for (chunk, got) in before.at(s).chunks(m).zip(after.at(s).chunks(m)) {
                for (x, y) in apply(mat, chunk).iter().zip(got) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        worst
    };
    use super::curvature::{curvature_f, curvature_g3, fake_curvature};
    Ok(dev(&curvature_f(cm, cfg)?, &curvature_f(cm, &t)?, cfg.p, &g)
        .max(dev(&fake_curvature(cm, cfg)?, &fake_curvature(cm, &t)?, cfg.p, &g))
        .max(dev(&curvature_g3(cm, cfg)?, &curvature_g3(cm, &t)?, cfg.q, &r)))
}

