use super::action::check_action;
use super::curvature::{curvature_f, curvature_g3, curvature_gb, curvature_t, pair_of};
use super::derivative::d_at;
use super::{levi_civita4, triple_index, Field, FieldConfiguration};
use crate::crossed_module::CompiledModule;
use crate::Result;

/// Max-abs residual of each Bianchi identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BianchiResiduals {
    /// `ε^{λμνρ} ∇_μ F_{νρ}`
    pub df: f64,
    /// `ε^{λμνρ} (∇_μ T_{νρ} − ▷(F_{μν}) C_ρ)`
    pub dt: f64,
    /// `ε^{λμνρ} (⅔ ∇_λ G_{μνρ} − [F_{λμ}, B_{νρ}])`
    pub dg: f64,
    /// `ε^{λμνρ} (⅔ ∇_λ Gcal_{μνρ} − ▷(F_{λμ}) β_{νρ})`
    pub dgcal: f64,
}

impl BianchiResiduals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.df, self.dt, self.dg, self.dgcal]
    }

    pub const NAMES: [&'static str; 4] = ["dF", "dT", "dG", "dGcal"];
}

/// `s·X_{μνρ}` of a triple-stored field into `out`, plus `s·∂_λ X_{μνρ}` into `dout`.
fn triple_and_derivative(
    x: &Field,
    cfg: &FieldConfiguration,
    site: usize,
    m: usize,
    lambda: usize,
    idx: (usize, usize, usize),
    s: f64,
    out: &mut [f64],
    dout: &mut [f64],
) {
    let (slot, sign) = triple_index(4, idx.0, idx.1, idx.2).expect("distinct");
    let xs = x.at(site);
    for c in 0..m {
        out[c] = s * sign * xs[slot * m + c];
        dout[c] = s * sign * d_at(x, &cfg.lattice, site, lambda, slot * m + c);
    }
}

pub fn bianchi_residuals(cm: &CompiledModule, cfg: &FieldConfiguration) -> Result<BianchiResiduals> {
    let all: Vec<usize> = (0..cfg.lattice.sites()).collect();
    bianchi_residuals_at(cm, cfg, &all)
}

/// Max-abs residuals restricted to `sites`.
pub fn bianchi_residuals_at(
    cm: &CompiledModule,
    cfg: &FieldConfiguration,
    sites: &[usize],
) -> Result<BianchiResiduals> {
    check_action(cm, cfg)?;
    let (l, p, q) = (&cfg.lattice, cfg.p, cfg.q);
    let f = curvature_f(cm, cfg)?;
    let t = curvature_t(cm, cfg)?;
    let gb = curvature_gb(cm, cfg)?;
    let g3 = curvature_g3(cm, cfg)?;
    let amax = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut r = BianchiResiduals { df: 0.0, dt: 0.0, dg: 0.0, dgcal: 0.0 };
    let (mut ra, mut rc) = (vec![0.0; p], vec![0.0; q]);
    let (mut rgb, mut rg3) = (vec![0.0; p], vec![0.0; q]);
    let (mut bp, mut bq, mut bp2, mut bq2) = (vec![0.0; p], vec![0.0; q], vec![0.0; p], vec![0.0; q]);
    let (mut dp, mut dq) = (vec![0.0; p], vec![0.0; q]);
    let mut flm = vec![0.0; p];
    for &site in sites {
        let (a, b, beta, c) = (cfg.a.at(site), cfg.b.at(site), cfg.beta.at(site), cfg.c.at(site));
        let (fs, ts) = (f.at(site), t.at(site));
        rgb.iter_mut().for_each(|v| *v = 0.0);
        rg3.iter_mut().for_each(|v| *v = 0.0);
        for lambda in 0..4 {
            ra.iter_mut().for_each(|v| *v = 0.0);
            rc.iter_mut().for_each(|v| *v = 0.0);
            for mu in 0..4 {
                for nu in 0..4 {
                    for rho in 0..4 {
                        let e = levi_civita4([lambda, mu, nu, rho]);
                        if e == 0.0 {
                            continue;
                        }
                        let am = &a[mu * p..(mu + 1) * p];
                        let al = &a[lambda * p..(lambda + 1) * p];
                        // ∇F, free index λ
                        let (slot, sign) = super::pair_index(4, nu, rho).expect("distinct");
                        for x in 0..p {
                            ra[x] += e * sign * d_at(&f, l, site, mu, slot * p + x);
                        }
                        cm.bracket_g(am, pair_of(fs, 4, p, nu, rho, &mut bp), e, &mut ra);
                        // ∇T − F▷C, free index λ
                        for x in 0..q {
                            rc[x] += e * sign * d_at(&t, l, site, mu, slot * q + x);
                        }
                        cm.act_on(am, pair_of(ts, 4, q, nu, rho, &mut bq), e, &mut rc);
                        cm.act_on(
                            pair_of(fs, 4, p, mu, nu, &mut bp),
                            &c[rho * q..(rho + 1) * q],
                            -e,
                            &mut rc,
                        );
                        // G and Gcal identities, fully contracted
                        triple_and_derivative(&gb, cfg, site, p, lambda, (mu, nu, rho), 1.0, &mut bp2, &mut dp);
                        for x in 0..p {
                            rgb[x] += e * 2.0 / 3.0 * dp[x];
                        }
                        cm.bracket_g(al, &bp2, e * 2.0 / 3.0, &mut rgb);
                        pair_of(fs, 4, p, lambda, mu, &mut flm);
                        cm.bracket_g(&flm, pair_of(b, 4, p, nu, rho, &mut bp2), -e, &mut rgb);
                        if q > 0 {
                            triple_and_derivative(&g3, cfg, site, q, lambda, (mu, nu, rho), 1.0, &mut bq2, &mut dq);
                            for x in 0..q {
                                rg3[x] += e * 2.0 / 3.0 * dq[x];
                            }
                            cm.act_on(al, &bq2, e * 2.0 / 3.0, &mut rg3);
                            cm.act_on(&flm, pair_of(beta, 4, q, nu, rho, &mut bq), -e, &mut rg3);
                        }
                    }
                }
            }
            r.df = r.df.max(amax(&ra));
            r.dt = r.dt.max(amax(&rc));
        }
        r.dg = r.dg.max(amax(&rgb));
        r.dgcal = r.dgcal.max(amax(&rg3));
    }
    Ok(r)
}
