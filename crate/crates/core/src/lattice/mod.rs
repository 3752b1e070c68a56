//! Periodic hypercubic lattices and site-sampled differential forms.

mod action;
mod bianchi;
mod curvature;
mod derivative;
mod eom;
mod gauge;
pub(crate) mod io;
mod recipe;

pub use action::{action_density, evaluate_action, pairwise_sum};
pub use bianchi::{bianchi_residuals, bianchi_residuals_at, BianchiResiduals};
pub use curvature::{
    curvature_f, curvature_gb, curvature_g3, curvature_t, fake_curvature, CurvatureBundle,
};
pub use derivative::discrete_derivative;
pub use eom::{eom_e1, eom_e2, eom_gradient_check, eom_residuals, EomResiduals, GradientCheck};
pub use gauge::{
    constant_thin_covariance, fat_gauge_transform, thin_gauge_transform, GaugeData, DEFAULT_DEXP_ORDER, FAT_B_SHIFT,
};
pub use io::{parse_configuration, render_configuration, FORMAT_HEADER};
pub use recipe::{
    random_components, sample_component_derivatives, sample_components, sample_smooth_fields,
    FieldRecipe, ScalarRecipe, Wave,
};

use crate::{Error, Result};

/// Periodic lattice with `n^dim` sites, enumerated lexicographically (axis 0 slowest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub dim: usize,
    pub n: usize,
    pub spacing: f64,
}

pub fn make_lattice(dim: usize, n: usize, spacing: f64) -> Result<Lattice> {
    if !(dim == 3 || dim == 4) {
        return Err(Error::InvalidArgument(format!("dimension {dim} not in {{3, 4}}")));
    }
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is below the minimum of 4 sites per axis"
        )));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidArgument(format!("spacing {spacing} must be positive")));
    }
    Ok(Lattice { dim, n, spacing })
}

impl Lattice {
    pub fn sites(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Physical side length `n·a`.
    pub fn length(&self) -> f64 {
        self.n as f64 * self.spacing
    }

    /// Cell volume `a^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.dim - 1 - axis) as u32)
    }

    #[inline]
    pub fn coord(&self, site: usize, axis: usize) -> usize {
        (site / self.stride(axis)) % self.n
    }

    pub fn coords(&self, site: usize) -> [usize; 4] {
        let mut c = [0; 4];
        for (axis, slot) in c.iter_mut().enumerate().take(self.dim) {
            *slot = self.coord(site, axis);
        }
        c
    }

    /// Sites whose coordinates are multiples of `n / m`: the points shared
    /// with a coarser `m`-site lattice of the same physical size.
    pub fn coarse_sites(&self, m: usize) -> Result<Vec<usize>> {
        if m == 0 || self.n % m != 0 {
            return Err(Error::InvalidArgument(format!("{m} does not divide n = {}", self.n)));
        }
        let step = self.n / m;
        Ok((0..self.sites())
            .filter(|&s| (0..self.dim).all(|ax| self.coord(s, ax) % step == 0))
            .collect())
    }

    /// Neighbour `site + step·e_axis` with periodic wrap.
    #[inline]
    pub fn shift(&self, site: usize, axis: usize, step: isize) -> usize {
        let s = self.stride(axis);
        let c = (site / s) % self.n;
        let n = self.n as isize;
        let nc = ((c as isize + step) % n + n) % n;
        site - c * s + nc as usize * s
    }
}

/// Ordered pairs `(μ, ν)`, `μ < ν`, in storage order.
pub fn pairs(dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for mu in 0..dim {
        for nu in (mu + 1)..dim {
            out.push((mu, nu));
        }
    }
    out
}

pub fn num_pairs(dim: usize) -> usize {
    dim * (dim - 1) / 2
}

/// Storage slot and sign of `X_{μν}`; `None` on the diagonal.
#[inline]
pub fn pair_index(dim: usize, mu: usize, nu: usize) -> Option<(usize, f64)> {
    if mu == nu {
        return None;
    }
    let (lo, hi, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    // offset of row `lo` in the upper triangle
    let idx = lo * (2 * dim - lo - 1) / 2 + (hi - lo - 1);
    Some((idx, sign))
}

/// Ordered triples `μ < ν < ρ`.
pub fn triples(dim: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            for c in (b + 1)..dim {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Storage slot and permutation sign of `X_{μνρ}`; `None` if an index repeats.
pub fn triple_index(dim: usize, mu: usize, nu: usize, rho: usize) -> Option<(usize, f64)> {
    if mu == nu || nu == rho || mu == rho {
        return None;
    }
    let mut idx = [mu, nu, rho];
    let mut sign = 1.0;
    for i in 0..3 {
        for j in 0..2 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let slot = triples(dim)
        .iter()
        .position(|t| *t == (idx[0], idx[1], idx[2]))
        .expect("valid triple");
    Some((slot, sign))
}

/// `ε^{μνρσ}` with `ε^{0123} = +1`.
pub fn levi_civita4(idx: [usize; 4]) -> f64 {
    permutation_sign(&idx)
}

/// `ε^{ijk}` with `ε^{123} = +1` (indices 0-based here).
pub fn levi_civita3(idx: [usize; 3]) -> f64 {
    permutation_sign(&idx)
}

fn permutation_sign(idx: &[usize]) -> f64 {
    let n = idx.len();
    for (i, &x) in idx.iter().enumerate() {
        if x >= n || idx[..i].contains(&x) {
            return 0.0;
        }
    }
    let mut inversions = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `ncomp` real components at every site, site-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub ncomp: usize,
    pub data: Vec<f64>,
}

impl Field {
    pub fn zeros(sites: usize, ncomp: usize) -> Self {
        Self {
            ncomp,
            data: vec![0.0; sites * ncomp],
        }
    }

    #[inline]
    pub fn at(&self, site: usize) -> &[f64] {
        &self.data[site * self.ncomp..(site + 1) * self.ncomp]
    }

    #[inline]
    pub fn at_mut(&mut self, site: usize) -> &mut [f64] {
        &mut self.data[site * self.ncomp..(site + 1) * self.ncomp]
    }

    pub fn sites(&self) -> usize {
        if self.ncomp == 0 {
            0
        } else {
            self.data.len() / self.ncomp
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }
}

/// Lattice samples of `A^a_μ`, `β^α_{μν}`, `B^a_{μν}`, `C^α_μ`.
///
/// Component layout at each site: `A[μ·p + a]`, `C[μ·q + α]`,
/// `β[pair·q + α]`, `B[pair·p + a]` with `pair = pair_index(form_dim, μ, ν)`.
/// `form_dim` equals the lattice dimension except for spatial slices of
/// spacetime fields, where it is 4 on a 3-dimensional lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfiguration {
    pub module: String,
    pub lattice: Lattice,
    pub form_dim: usize,
    pub p: usize,
    pub q: usize,
    pub a: Field,
    pub beta: Field,
    pub b: Field,
    pub c: Field,
}

impl FieldConfiguration {
    pub fn zeros(module: &str, lattice: Lattice, form_dim: usize, p: usize, q: usize) -> Self {
        let s = lattice.sites();
        let np = num_pairs(form_dim);
        Self {
            module: module.to_string(),
            lattice,
            form_dim,
            p,
            q,
            a: Field::zeros(s, form_dim * p),
            beta: Field::zeros(s, np * q),
            b: Field::zeros(s, np * p),
            c: Field::zeros(s, form_dim * q),
        }
    }

    pub fn fields(&self) -> [&Field; 4] {
        [&self.a, &self.beta, &self.b, &self.c]
    }

    pub fn fields_mut(&mut self) -> [&mut Field; 4] {
        [&mut self.a, &mut self.beta, &mut self.b, &mut self.c]
    }

    pub fn is_finite(&self) -> bool {
        self.fields().iter().all(|f| f.data.iter().all(|x| x.is_finite()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields())
            .fold(0.0f64, |m, (x, y)| m.max(x.max_abs_diff(y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_sizes() {
        assert_eq!(make_lattice(4, 8, 0.1).unwrap().sites(), 4096);
        assert_eq!(make_lattice(3, 4, 0.25).unwrap().sites(), 64);
        assert!(make_lattice(4, 2, 0.1).is_err());
        assert!(make_lattice(2, 8, 0.1).is_err());
        assert!(make_lattice(3, 8, 0.0).is_err());
    }

    #[test]
    fn shifts_wrap_periodically() {
        let l = make_lattice(3, 5, 1.0).unwrap();
        for site in 0..l.sites() {
            for axis in 0..3 {
                let up = l.shift(site, axis, 1);
                assert_eq!(l.shift(up, axis, -1), site);
                assert_eq!(l.coord(up, axis), (l.coord(site, axis) + 1) % 5);
                for other in 0..3 {
                    if other != axis {
                        assert_eq!(l.coord(up, other), l.coord(site, other));
                    }
                }
            }
        }
        assert_eq!(l.coords(l.stride(0)), [1, 0, 0, 0]);
    }

    #[test]
    fn pair_and_triple_indexing() {
        for dim in [3, 4] {
            for (k, (mu, nu)) in pairs(dim).into_iter().enumerate() {
                assert_eq!(pair_index(dim, mu, nu), Some((k, 1.0)));
                assert_eq!(pair_index(dim, nu, mu), Some((k, -1.0)));
            }
        }
        assert_eq!(triple_index(4, 2, 1, 3), Some((triple_index(4, 1, 2, 3).unwrap().0, -1.0)));
        assert_eq!(triple_index(4, 3, 1, 2), Some((3, 1.0)));
        assert_eq!(triple_index(4, 1, 1, 2), None);
    }

    #[test]
    fn epsilon_signs() {
        assert_eq!(levi_civita4([0, 1, 2, 3]), 1.0);
        assert_eq!(levi_civita4([1, 0, 2, 3]), -1.0);
        assert_eq!(levi_civita4([2, 3, 0, 1]), 1.0);
        assert_eq!(levi_civita4([0, 0, 2, 3]), 0.0);
        assert_eq!(levi_civita3([2, 0, 1]), 1.0);
    }
}
