use super::metric::{is_nondegenerate, to_dmatrix};
use super::DifferentialCrossedModule;
use crate::{Error, Result};
use nalgebra::DMatrix;
use ndarray::Array3;

/// The antisymmetric map `T: h × h → g`, stored as `t[[b, α, β]] = T^b_{αβ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TMapTensor {
    pub t: Array3<f64>,
}

impl TMapTensor {
    /// `T^b(u, v) = T^b_{αβ} u^α v^β`
    pub fn apply(&self, u: &[f64], v: &[f64], out: &mut [f64]) {
        let (p, q, _) = self.t.dim();
        for (b, o) in out.iter_mut().enumerate().take(p) {
            let mut s = 0.0;
            for al in 0..q {
                if u[al] == 0.0 {
                    continue;
                }
                for be in 0..q {
                    s += self.t[[b, al, be]] * u[al] * v[be];
                }
            }
            *o = s;
        }
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let (p, q, _) = self.t.dim();
        let mut r: f64 = 0.0;
        for b in 0..p {
            for al in 0..q {
                for be in 0..q {
                    r = r.max((self.t[[b, al, be]] + self.t[[b, be, al]]).abs());
                }
            }
        }
        r
    }

    /// Max of `|Q_{ba} T^b_{αβ} + ▷_{αaβ}|`.
    pub fn defining_residual(&self, cm: &DifferentialCrossedModule) -> f64 {
        let (p, q) = (cm.p, cm.q);
        let mut r: f64 = 0.0;
        for a in 0..p {
            for al in 0..q {
                for be in 0..q {
                    let lhs: f64 = (0..p).map(|b| cm.form_g[[b, a]] * self.t[[b, al, be]]).sum();
                    let act_low: f64 = (0..q).map(|g| cm.act[[g, a, be]] * cm.form_h[[g, al]]).sum();
                    r = r.max((lhs + act_low).abs());
                }
            }
        }
        r
    }
}

/// Solves `Q_{ba} T^b_{αβ} = −▷_{αaβ}` for `T`.
pub fn t_map(cm: &DifferentialCrossedModule) -> Result<TMapTensor> {
    let (p, q) = (cm.p, cm.q);
    if !is_nondegenerate(&cm.form_g) {
        return Err(Error::SingularForm("g"));
    }
    // columns indexed by (α, β), rows by a
    let rhs = DMatrix::from_fn(p, q * q, |a, col| {
        let (al, be) = (col / q, col % q);
        -(0..q)
            .map(|g| cm.act[[g, a, be]] * cm.form_h[[g, al]])
            .sum::<f64>()
    });
    let qt = to_dmatrix(&cm.form_g).transpose();
    let sol = qt.lu().solve(&rhs).ok_or(Error::SingularForm("g"))?;
    let t = Array3::from_shape_fn((p, q, q), |(b, al, be)| sol[(b, al * q + be)]);
    Ok(TMapTensor { t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed_module::{builtin_module, catalog_names};

    #[test]
    fn abelian_t_is_zero() {
        let cm = builtin_module("abelian(2,3)").unwrap();
        assert!(t_map(&cm).unwrap().t.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn adjoint_su2_matches_dense_inverse() {
        let cm = builtin_module("adjoint(su2)").unwrap();
        let t = t_map(&cm).unwrap();
        let inv = to_dmatrix(&cm.form_g).try_inverse().unwrap();
        for b in 0..3 {
            for al in 0..3 {
                for be in 0..3 {
                    let mut want = 0.0;
                    for a in 0..3 {
                        let low: f64 = (0..3).map(|g| cm.act[[g, a, be]] * cm.form_h[[g, al]]).sum();
                        want -= inv[(a, b)] * low;
                    }
                    assert!((t.t[[b, al, be]] - want).abs() < 1e-14);
                }
            }
        }
        // Q = 1: T^a_{αβ} = −▷_{αaβ} = −ε_{αaβ}
        assert_eq!(t.t[[0, 1, 2]], -cm.f[[1, 0, 2]]);
    }

    #[test]
    fn catalog_t_maps_are_antisymmetric() {
        for name in catalog_names() {
            let cm = builtin_module(name).unwrap();
            let t = t_map(&cm).unwrap();
            assert!(t.antisymmetry_residual() <= 1e-12, "{name}");
            assert!(t.defining_residual(&cm) <= 1e-12, "{name}");
        }
    }

    #[test]
    fn singular_q_is_an_error() {
        let mut cm = builtin_module("abelian(2,1)").unwrap();
        cm.form_g.fill(0.0);
        assert!(matches!(t_map(&cm), Err(Error::SingularForm("g"))));
    }
}
