//! The two dependency relations among the first-class constraints: linear
//! combinations of constraints (with field-dependent coefficients) that equal
//! the time-free components of the Bianchi identities for `F` and `T`.
//!
//! With ordered-pair sums and upper algebra indices the evaluated forms are
//!
//! ```text
//! (F)  ∇_i φ(H)^i + ∂ φ(G) + Σ_{i<j} [F_ij, χ(B)^ij] − ∂ Σ_{i<j} β_ij ★ χ(B)^ij
//!        = Σ_i Σ_{j<k} ε^{ijk} ∇_i F_jk
//! (T)  ∇^▷_i φ(CB)^i − φ(H)^i ▷ C_i + ∂* S(BCβ) + Σ_{i<j} F_ij ▷ χ(β)^ij
//!        − Σ_{i<j} χ(B)^ij ▷ T_ij + ∂* ∇_i χ(A)^i − (∂ χ(C)^i) ▷ C_i
//!        = Σ_i Σ_{j<k} ε^{ijk} (∇^▷_i T_jk − F_jk ▷ C_i)
//! ```
//!
//! where `w ★ x = w_β ▷^β_a^α x^a` and `∂* = q⁻¹ ∂ᵀ Q` is the metric adjoint
//! of `∂`. Both right-hand sides vanish in the continuum.

use super::density::{eps3, Ctx, Family, PATCH, SPATIAL_PAIRS};
use super::smear::{fill_patch, neighbour};
use super::PhasePoint;
use crate::crossed_module::CompiledModule;
use crate::lattice::Field;
use crate::Result;

/// Sup-norm residuals of the two relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffshellResiduals {
    /// `max |LHS − RHS|` of the relation whose right side is the `F` Bianchi identity.
    pub relation_f: f64,
    /// `max |LHS − RHS|` of the relation whose right side is the `T` Bianchi identity.
    pub relation_t: f64,
    /// `max |ε ∇F|`, the lattice defect of the `F` Bianchi identity.
    pub bianchi_f: f64,
    /// `max |ε (∇T − F ▷ C)|`.
    pub bianchi_t: f64,
}

/// Per-site ingredients, all with upper algebra indices.
struct Local {
    a: Field,
    c: Field,
    beta: Field,
    f: Field,
    t: Field,
    phi_h: Field,
    phi_g: Field,
    phi_cb: Field,
    s_bcb: Field,
    chi_b: Field,
    chi_c: Field,
    chi_a: Field,
    chi_beta: Field,
}

fn locals(cm: &CompiledModule, pt: &PhasePoint) -> Local {
    let (p, q) = (cm.p, cm.q);
    let lay = pt.layout();
    let sites = pt.lattice.sites();
    let z = |blocks: usize, m: usize| Field::zeros(sites, blocks * m);
    let mut l = Local {
        a: z(3, p),
        c: z(3, q),
        beta: z(3, q),
        f: z(3, p),
        t: z(3, q),
        phi_h: z(3, p),
        phi_g: z(1, q),
        phi_cb: z(3, q),
        s_bcb: z(1, p),
        chi_b: z(3, p),
        chi_c: z(3, q),
        chi_a: z(3, p),
        chi_beta: z(3, q),
    };
    let mut patch = vec![0.0; PATCH * 2 * lay.width()];
    for site in 0..sites {
        fill_patch(pt, site, &mut patch);
        let x = Ctx::new(cm, lay, &patch, pt.lattice.spacing);
        let put = |f: &mut Field, blocks: Vec<Vec<f64>>| {
            let out = f.at_mut(site);
            for (b, v) in blocks.iter().enumerate() {
                out[b * v.len()..(b + 1) * v.len()].copy_from_slice(v);
            }
        };
        let pairs = |g: &dyn Fn(usize, usize) -> Vec<f64>| SPATIAL_PAIRS.iter().map(|&(j, k)| g(j, k)).collect();
        let dirs = |g: &dyn Fn(usize) -> Vec<f64>| (1..4).map(g).collect();
        put(&mut l.a, dirs(&|i| x.a(0, i).to_vec()));
        put(&mut l.c, dirs(&|i| x.c(0, i).to_vec()));
        put(&mut l.beta, pairs(&|j, k| x.beta(0, j, k).to_vec()));
        put(&mut l.f, pairs(&|j, k| x.f(j, k).to_vec()));
        put(&mut l.t, pairs(&|j, k| x.t(j, k).to_vec()));
        put(&mut l.phi_h, dirs(&|i| x.phi_h(i).to_vec()));
        put(&mut l.phi_g, vec![x.phi_g().to_vec()]);
        put(&mut l.phi_cb, dirs(&|i| x.phi_cb(i).to_vec()));
        put(&mut l.s_bcb, vec![x.raise_g(&Family::SBCB.eval(&x)).to_vec()]);
        put(&mut l.chi_b, pairs(&|j, k| x.raise_g(&x.pb(0, j, k)).to_vec()));
        put(&mut l.chi_c, dirs(&|i| x.raise_h(&x.pc(0, i)).to_vec()));
        put(&mut l.chi_a, dirs(&|i| x.raise_g(&x.p_a(0, i)).to_vec()));
        put(&mut l.chi_beta, pairs(&|j, k| x.raise_h(&x.p_beta(0, j, k)).to_vec()));
    }
    l
}

fn block(f: &Field, site: usize, b: usize, m: usize) -> &[f64] {
    &f.at(site)[b * m..(b + 1) * m]
}

fn pair_slot(j: usize, k: usize) -> usize {
    SPATIAL_PAIRS.iter().position(|&pr| pr == (j, k)).expect("ordered spatial pair")
}

/// Evaluates both relations and the Bianchi defects at `pt`.
pub fn offshell_relations(cm: &CompiledModule, pt: &PhasePoint) -> Result<OffshellResiduals> {
    let all: Vec<usize> = (0..pt.lattice.sites()).collect();
    offshell_relations_at(cm, pt, &all)
}

/// As [`offshell_relations`], with the maxima taken over `sites` only.
pub fn offshell_relations_at(cm: &CompiledModule, pt: &PhasePoint, sites: &[usize]) -> Result<OffshellResiduals> {
    pt.check(cm)?;
    let (p, q) = (cm.p, cm.q);
    let l = locals(cm, pt);
    let lat = &pt.lattice;
    let inv2a = 0.5 / lat.spacing;
    // ∇_i X at `site` for block `b` of `f`, with `adj` the action of A_i.
    let cov = |f: &Field, site: usize, i: usize, b: usize, m: usize, out: &mut [f64], g: bool| {
        let fwd = block(f, neighbour(lat, site, 2 * i - 1), b, m);
        let bwd = block(f, neighbour(lat, site, 2 * i), b, m);
        for c in 0..m {
            out[c] += (fwd[c] - bwd[c]) * inv2a;
        }
        let ai = block(&l.a, site, i - 1, p);
        if g {
            cm.bracket_g(ai, block(f, site, b, m), 1.0, out);
        } else {
            cm.act_on(ai, block(f, site, b, m), 1.0, out);
        }
    };
    let dstar = |x: &[f64], s: f64, out: &mut [f64]| {
        let mut low = vec![0.0; p];
        cm.lower_g(x, 1.0, &mut low);
        let mut w = vec![0.0; q];
        cm.del_transpose(&low, 1.0, &mut w);
        cm.raise_h(&w, s, out);
    };
    // β_ij ★ χ(B)^ij summed over pairs, per site.
    let star = Field {
        ncomp: q,
        data: (0..lat.sites())
            .flat_map(|site| {
                let mut out = vec![0.0; q];
                for b in 0..3 {
                    let mut bl = vec![0.0; q];
                    cm.lower_h(block(&l.beta, site, b, q), 1.0, &mut bl);
                    let mut low = vec![0.0; q];
                    cm.coact_h(block(&l.chi_b, site, b, p), &bl, -1.0, &mut low);
                    cm.raise_h(&low, 1.0, &mut out);
                }
                out
            })
            .collect(),
    };
    let mut res = OffshellResiduals { relation_f: 0.0, relation_t: 0.0, bianchi_f: 0.0, bianchi_t: 0.0 };
    for &site in sites {
        let mut la = vec![0.0; p];
        let mut ra = vec![0.0; p];
        let mut lb = vec![0.0; q];
        let mut rb = vec![0.0; q];
        for i in 1..4 {
            cov(&l.phi_h, site, i, i - 1, p, &mut la, true);
            cov(&l.phi_cb, site, i, i - 1, q, &mut lb, false);
            let ci = block(&l.c, site, i - 1, q);
            let mut act = vec![0.0; q];
            cm.act_on(block(&l.phi_h, site, i - 1, p), ci, 1.0, &mut act);
            let mut dc = vec![0.0; p];
            cm.del_apply(block(&l.chi_c, site, i - 1, q), 1.0, &mut dc);
            cm.act_on(&dc, ci, 1.0, &mut act);
            lb.iter_mut().zip(&act).for_each(|(o, v)| *o -= v);
            let mut da = vec![0.0; p];
            cov(&l.chi_a, site, i, i - 1, p, &mut da, true);
            dstar(&da, 1.0, &mut lb);
            for (j, k) in SPATIAL_PAIRS {
                let e = eps3(i, j, k);
                if e == 0.0 {
                    continue;
                }
                let b = pair_slot(j, k);
                let mut df = vec![0.0; p];
                cov(&l.f, site, i, b, p, &mut df, true);
                ra.iter_mut().zip(&df).for_each(|(o, v)| *o += e * v);
                let mut dt = vec![0.0; q];
                cov(&l.t, site, i, b, q, &mut dt, false);
                cm.act_on(block(&l.f, site, b, p), ci, -1.0, &mut dt);
                rb.iter_mut().zip(&dt).for_each(|(o, v)| *o += e * v);
            }
        }
        cm.del_apply(block(&l.phi_g, site, 0, q), 1.0, &mut la);
        cm.del_apply(block(&star, site, 0, q), -1.0, &mut la);
        dstar(block(&l.s_bcb, site, 0, p), 1.0, &mut lb);
        for b in 0..3 {
            let fb = block(&l.f, site, b, p);
            cm.bracket_g(fb, block(&l.chi_b, site, b, p), 1.0, &mut la);
            cm.act_on(fb, block(&l.chi_beta, site, b, q), 1.0, &mut lb);
            cm.act_on(block(&l.chi_b, site, b, p), block(&l.t, site, b, q), -1.0, &mut lb);
        }
        let sup = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let zero_p = vec![0.0; p];
        let zero_q = vec![0.0; q];
        res.relation_f = res.relation_f.max(sup(&la, &ra));
        res.relation_t = res.relation_t.max(sup(&lb, &rb));
        res.bianchi_f = res.bianchi_f.max(sup(&ra, &zero_p));
        res.bianchi_t = res.bianchi_t.max(sup(&rb, &zero_q));
    }
    Ok(res)
}
