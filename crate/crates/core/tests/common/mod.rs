#![allow(dead_code)]

use bfcg_core::crossed_module::{builtin_module, CompiledModule, DifferentialCrossedModule};
use bfcg_core::lattice::{make_lattice, FieldRecipe, Lattice};
use std::f64::consts::TAU;

pub const LENGTH: f64 = TAU;
pub const LADDER: [usize; 3] = [8, 16, 32];

pub fn module(name: &str) -> (DifferentialCrossedModule, CompiledModule) {
    let cm = builtin_module(name).unwrap();
    let c = cm.compile().unwrap();
    (cm, c)
}

pub fn lattice(dim: usize, n: usize) -> Lattice {
    make_lattice(dim, n, LENGTH / n as f64).unwrap()
}

pub fn recipe(cm: &DifferentialCrossedModule, dim: usize, seed: u64) -> FieldRecipe {
    FieldRecipe::random(cm, dim, 1, seed).unwrap()
}

pub mod oracle {
    //! Matrix-level restatement of the crossed-module identities.
    use bfcg_core::crossed_module::DifferentialCrossedModule;
    use nalgebra::DMatrix;

    fn ad(cm: &DifferentialCrossedModule, b: usize) -> DMatrix<f64> {
        DMatrix::from_fn(cm.p, cm.p, |a, c| cm.f[[a, b, c]])
    }
    fn ad_h(cm: &DifferentialCrossedModule, al: usize) -> DMatrix<f64> {
        DMatrix::from_fn(cm.q, cm.q, |g, be| cm.phi[[g, al, be]])
    }
    fn rho(cm: &DifferentialCrossedModule, a: usize) -> DMatrix<f64> {
        DMatrix::from_fn(cm.q, cm.q, |g, be| cm.act[[g, a, be]])
    }
    fn del(cm: &DifferentialCrossedModule) -> DMatrix<f64> {
        DMatrix::from_fn(cm.p, cm.q, |a, al| cm.del[[al, a]])
    }
    fn form(m: &ndarray::Array2<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[[i, j]])
    }
    fn sup(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |r, x| if x.is_nan() { f64::INFINITY } else { r.max(x.abs()) })
    }
    fn bracket(t: impl Fn(usize) -> DMatrix<f64>, x: usize, y: usize) -> DMatrix<f64> {
        &t(x) * &t(y) - &t(y) * &t(x)
    }
    fn nondegenerate(m: &DMatrix<f64>) -> bool {
        if m.nrows() == 0 {
            return true;
        }
        let s = m.clone().singular_values();
        s.min() >= 1e-8 * s.max()
    }

    /// Largest violation of any identity, `∞` for a degenerate form.
    pub fn worst_violation(cm: &DifferentialCrossedModule) -> f64 {
        let (p, q) = (cm.p, cm.q);
        let (qg, qh, d) = (form(&cm.form_g), form(&cm.form_h), del(cm));
        if !nondegenerate(&qg) || !nondegenerate(&qh) {
            return f64::INFINITY;
        }
        let mut w = sup(&(&qg - qg.transpose())).max(sup(&(&qh - qh.transpose())));
        for x in 0..p {
            for y in 0..p {
                // antisymmetry, ad and ▷ are representations
                let fxy = DMatrix::from_fn(p, 1, |a, _| cm.f[[a, x, y]]);
                let fyx = DMatrix::from_fn(p, 1, |a, _| cm.f[[a, y, x]]);
                w = w.max(sup(&(&fxy + &fyx)));
                let mut ad_f = DMatrix::zeros(p, p);
                let mut rho_f = DMatrix::zeros(q, q);
                for a in 0..p {
                    ad_f += ad(cm, a) * fxy[a];
                    rho_f += rho(cm, a) * fxy[a];
                }
                w = w.max(sup(&(bracket(|b| ad(cm, b), x, y) - ad_f)));
                w = w.max(sup(&(bracket(|b| rho(cm, b), x, y) - rho_f)));
            }
            // Q and q invariant
            w = w.max(sup(&(ad(cm, x).transpose() * &qg + &qg * ad(cm, x))));
            w = w.max(sup(&(rho(cm, x).transpose() * &qh + &qh * rho(cm, x))));
            // ∂(x ▷ u) = [x, ∂u]
            w = w.max(sup(&(&d * rho(cm, x) - ad(cm, x) * &d)));
        }
        for u in 0..q {
            for v in 0..q {
                let puv = DMatrix::from_fn(q, 1, |g, _| cm.phi[[g, u, v]]);
                let pvu = DMatrix::from_fn(q, 1, |g, _| cm.phi[[g, v, u]]);
                w = w.max(sup(&(&puv + &pvu)));
                let mut ad_p = DMatrix::zeros(q, q);
                for g in 0..q {
                    ad_p += ad_h(cm, g) * puv[g];
                }
                w = w.max(sup(&(bracket(|b| ad_h(cm, b), u, v) - ad_p)));
            }
            // [u, v] = ∂u ▷ v
            let mut via_del = DMatrix::zeros(q, q);
            for a in 0..p {
                via_del += rho(cm, a) * d[(a, u)];
            }
            w = w.max(sup(&(ad_h(cm, u) - via_del)));
        }
        w
    }

    /// `T^b_{αβ} = −(Q⁻¹)^{ba} ▷^γ_{aβ} q_{γα}` by dense inversion.
    pub fn t_tensor(cm: &DifferentialCrossedModule) -> ndarray::Array3<f64> {
        let (p, q) = (cm.p, cm.q);
        let inv = form(&cm.form_g).try_inverse().unwrap();
        ndarray::Array3::from_shape_fn((p, q, q), |(b, al, be)| {
            let mut s = 0.0;
            for a in 0..p {
                for g in 0..q {
                    s -= inv[(b, a)] * cm.act[[g, a, be]] * cm.form_h[[g, al]];
                }
            }
            s
        })
    }
}
