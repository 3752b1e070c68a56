//! Resolution-independent smooth field recipes (real trigonometric polynomials).

use super::{num_pairs, Field, FieldConfiguration, Lattice};
use crate::crossed_module::DifferentialCrossedModule;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// `cos·cos(2π k·x/L) + sin·sin(2π k·x/L)`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub k: [i32; 4],
    pub cos: f64,
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScalarRecipe {
    pub constant: f64,
    pub waves: Vec<Wave>,
}

/// Spacetime axis `μ` sampled by lattice axis `μ - offset`; axes below the
/// offset are frozen at coordinate 0 (time slices).
struct Sampler<'a> {
    lattice: &'a Lattice,
    offset: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl<'a> Sampler<'a> {
    fn new(lattice: &'a Lattice, form_dim: usize) -> Self {
        let n = lattice.n;
        Self {
            lattice,
            offset: form_dim - lattice.dim,
            cos: (0..n).map(|m| (TAU * m as f64 / n as f64).cos()).collect(),
            sin: (0..n).map(|m| (TAU * m as f64 / n as f64).sin()).collect(),
        }
    }

    /// `(cos θ, sin θ)` of a wave at a site.
    #[inline]
    fn phase(&self, k: &[i32; 4], coords: &[usize; 4]) -> (f64, f64) {
        let n = self.lattice.n as i64;
        let mut m: i64 = 0;
        for axis in 0..self.lattice.dim {
            m += k[axis + self.offset] as i64 * coords[axis] as i64;
        }
        let m = m.rem_euclid(n) as usize;
        (self.cos[m], self.sin[m])
    }
}

impl ScalarRecipe {
    fn random(rng: &mut ChaCha8Rng, form_dim: usize, modes: i32, waves: usize, amp: f64) -> Self {
        let mut out = ScalarRecipe {
            constant: rng.gen_range(-amp..amp),
            waves: Vec::with_capacity(waves),
        };
        for _ in 0..waves {
            let mut k = [0i32; 4];
            while k.iter().all(|x| *x == 0) {
                for kk in k.iter_mut().take(form_dim) {
                    *kk = rng.gen_range(-modes..=modes);
                }
            }
            out.waves.push(Wave {
                k,
                cos: rng.gen_range(-amp..amp),
                sin: rng.gen_range(-amp..amp),
            });
        }
        out
    }

    fn eval(&self, s: &Sampler, coords: &[usize; 4]) -> f64 {
        let mut v = self.constant;
        for w in &self.waves {
            let (c, sn) = s.phase(&w.k, coords);
            v += w.cos * c + w.sin * sn;
        }
        v
    }

    fn eval_derivative(&self, s: &Sampler, coords: &[usize; 4], mu: usize) -> f64 {
        let scale = TAU / s.lattice.length();
        let mut v = 0.0;
        for w in &self.waves {
            let (c, sn) = s.phase(&w.k, coords);
            v += (w.sin * c - w.cos * sn) * w.k[mu] as f64 * scale;
        }
        v
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ScalarRecipe {
            constant: self.constant * factor,
            waves: self
                .waves
                .iter()
                .map(|w| Wave {
                    k: w.k,
                    cos: w.cos * factor,
                    sin: w.sin * factor,
                })
                .collect(),
        }
    }
}

/// Samples a list of scalar recipes as the components of a lattice field.
/// `form_dim` is the number of spacetime axes the recipes depend on.
pub fn sample_components(recipes: &[ScalarRecipe], lattice: &Lattice, form_dim: usize) -> Field {
    let s = Sampler::new(lattice, form_dim);
    let mut out = Field::zeros(lattice.sites(), recipes.len());
    for site in 0..lattice.sites() {
        let coords = lattice.coords(site);
        for (slot, r) in out.at_mut(site).iter_mut().zip(recipes) {
            *slot = r.eval(&s, &coords);
        }
    }
    out
}

/// Exact `∂_μ` of sampled recipes (spacetime axis `mu`).
pub fn sample_component_derivatives(
    recipes: &[ScalarRecipe],
    lattice: &Lattice,
    form_dim: usize,
    mu: usize,
) -> Field {
    let s = Sampler::new(lattice, form_dim);
    let mut out = Field::zeros(lattice.sites(), recipes.len());
    for site in 0..lattice.sites() {
        let coords = lattice.coords(site);
        for (slot, r) in out.at_mut(site).iter_mut().zip(recipes) {
            *slot = r.eval_derivative(&s, &coords, mu);
        }
    }
    out
}

/// Fourier description of a full configuration, reusable at any resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRecipe {
    pub module: String,
    pub form_dim: usize,
    pub p: usize,
    pub q: usize,
    pub a: Vec<ScalarRecipe>,
    pub beta: Vec<ScalarRecipe>,
    pub b: Vec<ScalarRecipe>,
    pub c: Vec<ScalarRecipe>,
}

pub const WAVES_PER_COMPONENT: usize = 2;
pub const DEFAULT_AMPLITUDE: f64 = 0.5;

/// Random scalar recipes; shared by field and gauge-parameter sampling.
pub fn random_components(
    count: usize,
    form_dim: usize,
    mode_count: usize,
    amplitude: f64,
    seed: u64,
) -> Vec<ScalarRecipe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            ScalarRecipe::random(&mut rng, form_dim, mode_count as i32, WAVES_PER_COMPONENT, amplitude)
        })
        .collect()
}

impl FieldRecipe {
    pub fn random(
        cm: &DifferentialCrossedModule,
        form_dim: usize,
        mode_count: usize,
        seed: u64,
    ) -> Result<Self> {
        Self::random_with_amplitude(cm, form_dim, mode_count, seed, DEFAULT_AMPLITUDE)
    }

    pub fn random_with_amplitude(
        cm: &DifferentialCrossedModule,
        form_dim: usize,
        mode_count: usize,
        seed: u64,
        amplitude: f64,
    ) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::InvalidArgument("mode_count must be at least 1".into()));
        }
        if !(3..=4).contains(&form_dim) {
            return Err(Error::InvalidArgument(format!("form dimension {form_dim}")));
        }
        let (p, q) = (cm.p, cm.q);
        let np = num_pairs(form_dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = mode_count as i32;
        let mut draw = |count: usize| -> Vec<ScalarRecipe> {
            (0..count)
                .map(|_| ScalarRecipe::random(&mut rng, form_dim, modes, WAVES_PER_COMPONENT, amplitude))
                .collect()
        };
        let a = draw(form_dim * p);
        let beta = draw(np * q);
        let b = draw(np * p);
        let c = draw(form_dim * q);
        Ok(Self {
            module: cm.name.clone(),
            form_dim,
            p,
            q,
            a,
            beta,
            b,
            c,
        })
    }

    /// Samples the recipe on `lattice`; a 3-dimensional lattice with a 4-form
    /// recipe gives the `t = 0` slice.
    pub fn evaluate(&self, lattice: &Lattice) -> Result<FieldConfiguration> {
        if lattice.dim > self.form_dim || self.form_dim - lattice.dim > 1 {
            return Err(Error::LatticeMismatch(format!(
                "recipe of form dimension {} on a {}-dimensional lattice",
                self.form_dim, lattice.dim
            )));
        }
        let fd = self.form_dim;
        Ok(FieldConfiguration {
            module: self.module.clone(),
            lattice: *lattice,
            form_dim: fd,
            p: self.p,
            q: self.q,
            a: sample_components(&self.a, lattice, fd),
            beta: sample_components(&self.beta, lattice, fd),
            b: sample_components(&self.b, lattice, fd),
            c: sample_components(&self.c, lattice, fd),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: &Vec<ScalarRecipe>| v.iter().map(|r| r.scaled(factor)).collect();
        Self {
            a: s(&self.a),
            beta: s(&self.beta),
            b: s(&self.b),
            c: s(&self.c),
            ..self.clone()
        }
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("plain data serializes")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// Smooth random configuration with `form_dim = lattice.dim`; deterministic in `seed`.
pub fn sample_smooth_fields(
    cm: &DifferentialCrossedModule,
    lattice: &Lattice,
    mode_count: usize,
    seed: u64,
) -> Result<FieldConfiguration> {
    FieldRecipe::random(cm, lattice.dim, mode_count, seed)?.evaluate(lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed_module::builtin_module;
    use crate::lattice::{discrete_derivative, make_lattice};

    #[test]
    fn sampling_is_deterministic_in_seed() {
        let cm = builtin_module("adjoint(su2)").unwrap();
        let l = make_lattice(3, 4, 0.25).unwrap();
        let x = sample_smooth_fields(&cm, &l, 1, 7).unwrap();
        let y = sample_smooth_fields(&cm, &l, 1, 7).unwrap();
        let z = sample_smooth_fields(&cm, &l, 1, 8).unwrap();
        assert_eq!(x, y);
        assert!(x.max_abs_diff(&z) > 0.0);
        assert!(sample_smooth_fields(&cm, &l, 0, 7).is_err());
    }

    #[test]
    fn recipe_round_trips_through_text() {
        let cm = builtin_module("abelian(1,1)").unwrap();
        let r = FieldRecipe::random(&cm, 4, 2, 3).unwrap();
        assert_eq!(FieldRecipe::from_text(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn discrete_derivative_converges_at_second_order() {
        let cm = builtin_module("abelian(1,1)").unwrap();
        let recipe = FieldRecipe::random(&cm, 3, 1, 11).unwrap();
        let mut errs = Vec::new();
        for n in [8usize, 16, 32] {
            let l = make_lattice(3, n, 2.0 * std::f64::consts::PI / n as f64).unwrap();
            let f = sample_components(&recipe.a, &l, 3);
            let exact = sample_component_derivatives(&recipe.a, &l, 3, 1);
            let num = discrete_derivative(&f, &l, 1);
            errs.push(num.max_abs_diff(&exact));
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 1.8 && order < 2.2, "{errs:?}");
        }
    }
}
