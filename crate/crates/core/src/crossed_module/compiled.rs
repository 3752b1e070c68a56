//! Sparse, precomputed view of a crossed module for inner loops.

use super::metric::checked_inverse;
use super::tmap::{t_map, TMapTensor};
use super::DifferentialCrossedModule;
use crate::dual::Scalar;
use crate::Result;

/// Nonzero `t[i][j][k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry3 {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub v: f64,
}

/// Nonzero `t[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry2 {
    pub i: usize,
    pub j: usize,
    pub v: f64,
}

#[derive(Debug, Clone)]
pub struct CompiledModule {
    pub name: String,
    pub p: usize,
    pub q: usize,
    /// `f^i_{jk}`
    pub f: Vec<Entry3>,
    /// `φ^i_{jk}`
    pub phi: Vec<Entry3>,
    /// `∂_i^j` (i ∈ h, j ∈ g)
    pub del: Vec<Entry2>,
    /// `▷^i_{jk}` (i, k ∈ h, j ∈ g)
    pub act: Vec<Entry3>,
    /// `T^i_{jk}`
    pub tmap: Vec<Entry3>,
    pub form_g: Vec<Entry2>,
    pub form_h: Vec<Entry2>,
    pub inv_g: Vec<Entry2>,
    pub inv_h: Vec<Entry2>,
    pub t: TMapTensor,
}

fn sparse3(a: &ndarray::Array3<f64>) -> Vec<Entry3> {
    a.indexed_iter()
        .filter(|(_, v)| **v != 0.0)
        .map(|((i, j, k), v)| Entry3 { i, j, k, v: *v })
        .collect()
}

fn sparse2(a: &ndarray::Array2<f64>) -> Vec<Entry2> {
    a.indexed_iter()
        .filter(|(_, v)| **v != 0.0)
        .map(|((i, j), v)| Entry2 { i, j, v: *v })
        .collect()
}

impl CompiledModule {
    pub fn new(cm: &DifferentialCrossedModule) -> Result<Self> {
        let inv_g = checked_inverse(&cm.form_g, "g")?;
        let inv_h = checked_inverse(&cm.form_h, "h")?;
        let t = t_map(cm)?;
        Ok(Self {
            name: cm.name.clone(),
            p: cm.p,
            q: cm.q,
            f: sparse3(&cm.f),
            phi: sparse3(&cm.phi),
            del: sparse2(&cm.del),
            act: sparse3(&cm.act),
            tmap: sparse3(&t.t),
            form_g: sparse2(&cm.form_g),
            form_h: sparse2(&cm.form_h),
            inv_g: sparse2(&inv_g),
            inv_h: sparse2(&inv_h),
            t,
        })
    }

    /// `out^a += s · f^a_{bc} x^b y^c`
    #[inline]
    pub fn bracket_g<T: Scalar>(&self, x: &[T], y: &[T], s: f64, out: &mut [T]) {
        for e in &self.f {
            out[e.i] += x[e.j] * y[e.k] * (s * e.v);
        }
    }

    /// `out^γ += s · φ^γ_{αβ} u^α v^β`
    #[inline]
    pub fn bracket_h<T: Scalar>(&self, u: &[T], v: &[T], s: f64, out: &mut [T]) {
        for e in &self.phi {
            out[e.i] += u[e.j] * v[e.k] * (s * e.v);
        }
    }

    /// `out^β += s · ▷^β_{aα} x^a u^α`
    #[inline]
    pub fn act_on<T: Scalar>(&self, x: &[T], u: &[T], s: f64, out: &mut [T]) {
        for e in &self.act {
            out[e.i] += x[e.j] * u[e.k] * (s * e.v);
        }
    }

    /// Coadjoint action on a lower g-index: `out_a += s · (−f^c_{ba} x^b w_c)`.
    #[inline]
    pub fn coad_g<T: Scalar>(&self, x: &[T], w: &[T], s: f64, out: &mut [T]) {
        for e in &self.f {
            out[e.k] -= x[e.j] * w[e.i] * (s * e.v);
        }
    }

    /// Dual action on a lower h-index: `out_α += s · (−▷^γ_{aα} x^a w_γ)`.
    #[inline]
    pub fn coact_h<T: Scalar>(&self, x: &[T], w: &[T], s: f64, out: &mut [T]) {
        for e in &self.act {
            out[e.k] -= x[e.j] * w[e.i] * (s * e.v);
        }
    }

    /// `out_a += s · w_γ ▷^γ_{aβ} u^β`, i.e. `x^a out_a = w(▷(x) u)`.
    #[inline]
    pub fn act_moment<T: Scalar>(&self, w: &[T], u: &[T], s: f64, out: &mut [T]) {
        for e in &self.act {
            out[e.j] += w[e.i] * u[e.k] * (s * e.v);
        }
    }

    /// `out^a += s · ∂_α^a u^α`
    #[inline]
    pub fn del_apply<T: Scalar>(&self, u: &[T], s: f64, out: &mut [T]) {
        for e in &self.del {
            out[e.j] += u[e.i] * (s * e.v);
        }
    }

    /// `out_α += s · ∂_α^a w_a` (transpose of `del_apply`)
    #[inline]
    pub fn del_transpose<T: Scalar>(&self, w: &[T], s: f64, out: &mut [T]) {
        for e in &self.del {
            out[e.i] += w[e.j] * (s * e.v);
        }
    }

    /// `out^b += s · T^b_{αβ} u^α v^β`
    #[inline]
    pub fn tmap_apply<T: Scalar>(&self, u: &[T], v: &[T], s: f64, out: &mut [T]) {
        for e in &self.tmap {
            out[e.i] += u[e.j] * v[e.k] * (s * e.v);
        }
    }

    #[inline]
    fn contract2<T: Scalar>(m: &[Entry2], x: &[T], s: f64, out: &mut [T]) {
        for e in m {
            out[e.j] += x[e.i] * (s * e.v);
        }
    }

    #[inline]
    pub fn lower_g<T: Scalar>(&self, x: &[T], s: f64, out: &mut [T]) {
        Self::contract2(&self.form_g, x, s, out)
    }

    #[inline]
    pub fn raise_g<T: Scalar>(&self, x: &[T], s: f64, out: &mut [T]) {
        Self::contract2(&self.inv_g, x, s, out)
    }

    #[inline]
    pub fn lower_h<T: Scalar>(&self, x: &[T], s: f64, out: &mut [T]) {
        Self::contract2(&self.form_h, x, s, out)
    }

    #[inline]
    pub fn raise_h<T: Scalar>(&self, x: &[T], s: f64, out: &mut [T]) {
        Self::contract2(&self.inv_h, x, s, out)
    }

    /// `Q(x, y)`
    pub fn pair_g<T: Scalar>(&self, x: &[T], y: &[T]) -> T {
        let mut s = T::zero();
        for e in &self.form_g {
            s += x[e.i] * y[e.j] * e.v;
        }
        s
    }

    /// `q(u, v)`
    pub fn pair_h<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        let mut s = T::zero();
        for e in &self.form_h {
            s += u[e.i] * v[e.j] * e.v;
        }
        s
    }

    /// Dense `p × p` matrix of `ad_x`: `(ad_x)^a_c = f^a_{bc} x^b`.
    pub fn ad_matrix(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.p, self.p);
        for e in &self.f {
            m[(e.i, e.k)] += e.v * x[e.j];
        }
        m
    }

    /// Dense `q × q` matrix of `▷_x`: `(▷_x)^α_γ = ▷^α_{bγ} x^b`.
    pub fn act_matrix(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.q, self.q);
        for e in &self.act {
            m[(e.i, e.k)] += e.v * x[e.j];
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use crate::crossed_module::builtin_module;

    #[test]
    fn coadjoint_matches_lowered_adjoint() {
        // With invariant Q, lowering commutes with the adjoint action.
        let cm = builtin_module("vector_poincare").unwrap().compile().unwrap();
        let x: Vec<f64> = (0..6).map(|i| 0.3 * i as f64 - 0.7).collect();
        let v: Vec<f64> = (0..6).map(|i| (i as f64).sin()).collect();
        let mut adv = vec![0.0; 6];
        cm.bracket_g(&x, &v, 1.0, &mut adv);
        let mut low_adv = vec![0.0; 6];
        cm.lower_g(&adv, 1.0, &mut low_adv);
        let mut low_v = vec![0.0; 6];
        cm.lower_g(&v, 1.0, &mut low_v);
        let mut co = vec![0.0; 6];
        cm.coad_g(&x, &low_v, 1.0, &mut co);
        for (a, b) in low_adv.iter().zip(&co) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
