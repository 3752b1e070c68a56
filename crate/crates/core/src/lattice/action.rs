use super::curvature::{check, g3_at, h_at};
use super::{levi_civita4, num_pairs, pairs, triples, Field, FieldConfiguration};
use crate::crossed_module::CompiledModule;
use crate::{Error, Result};

/// Lagrangian density at one site (without the cell volume).
pub(crate) fn density_at(cm: &CompiledModule, cfg: &FieldConfiguration, site: usize, h: &mut [f64], g: &mut [f64]) -> f64 {
    let (p, q) = (cfg.p, cfg.q);
    h_at(cm, cfg, site, h);
    g3_at(cm, cfg, site, g);
    let (b, c) = (cfg.b.at(site), cfg.c.at(site));
    let prs = pairs(4);
    let mut s = 0.0;
    // ¼ ε B H over all indices = Σ over ordered pairs
    for (i, &(mu, nu)) in prs.iter().enumerate() {
        for (j, &(rho, sigma)) in prs.iter().enumerate() {
            let e = levi_civita4([mu, nu, rho, sigma]);
            if e != 0.0 {
                s += e * cm.pair_g(&b[i * p..(i + 1) * p], &h[j * p..(j + 1) * p]);
            }
        }
    }
    // ⅙ ε C G = Σ_μ Σ over ordered triples
    for mu in 0..4 {
        for (k, &(nu, rho, sigma)) in triples(4).iter().enumerate() {
            let e = levi_civita4([mu, nu, rho, sigma]);
            if e != 0.0 {
                s += e * cm.pair_h(&c[mu * q..(mu + 1) * q], &g[k * q..(k + 1) * q]);
            }
        }
    }
    s
}

pub(crate) fn check_action(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<()> {
    check(cm, cfg)?;
    if cfg.form_dim != 4 {
        return Err(Error::LatticeMismatch("the action needs a 4-dimensional lattice".into()));
    }
    Ok(())
}

/// Per-site Lagrangian density.
pub fn action_density(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<Field> {
    check_action(cm, cfg)?;
    let mut h = vec![0.0; num_pairs(4) * cfg.p];
    let mut g = vec![0.0; 4 * cfg.q];
    let mut out = Field::zeros(cfg.lattice.sites(), 1);
    for site in 0..cfg.lattice.sites() {
        out.data[site] = density_at(cm, cfg, site, &mut h, &mut g);
    }
    Ok(out)
}

/// `S = a⁴ Σ_x ε^{μνρσ} (¼ B_{μν}·H_{ρσ} + ⅙ C_μ·G_{νρσ})`.
pub fn evaluate_action(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<f64> {
    let dens = action_density(cm, cfg)?;
    Ok(cfg.lattice.cell_volume() * pairwise_sum(&dens.data))
}

/// Pairwise (tree) summation; deterministic and accurate for long sums.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 64 {
        return x.iter().sum();
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}
