//! Smeared functionals, their exact phase-space gradients and the lattice
//! Poisson bracket.

use super::density::{Ctx, Family, PATCH};
use super::hamiltonian::{hamiltonian_density, MultiplierSet};
use super::{Layout, PhasePoint};
use crate::crossed_module::CompiledModule;
use crate::dual::{Dual, Rev, Scalar};
use crate::lattice::{Field, Lattice};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A functional `a³ Σ_x ℓ(x)` of the phase point with a local integrand.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// `a³ Σ_x test(x) · density(x)`.
    Smeared { family: Family, test: Field },
    /// Canonical Hamiltonian, or total Hamiltonian when multipliers are given.
    Hamiltonian { multipliers: Option<MultiplierSet> },
}

pub fn smear(cm: &CompiledModule, family: Family, test: Field) -> Result<Functional> {
    let want = family.ncomp(cm.p, cm.q);
    if test.ncomp != want {
        return Err(Error::ShapeMismatch {
            field: format!("test field of {}", family.name()),
            expected: vec![want],
            found: vec![test.ncomp],
        });
    }
    Ok(Functional::Smeared { family, test })
}

/// Exact derivatives of a functional with respect to every stored coordinate
/// and momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub dq: Field,
    pub dp: Field,
}

impl Functional {
    fn check(&self, cm: &CompiledModule, pt: &PhasePoint) -> Result<()> {
        pt.check(cm)?;
        let sites = pt.lattice.sites();
        let bad = match self {
            Functional::Smeared { family, test } => {
                test.ncomp != family.ncomp(cm.p, cm.q) || test.sites() != sites
            }
            Functional::Hamiltonian { multipliers: Some(m) } => {
                m.values.ncomp != pt.layout().width() || m.values.sites() != sites
            }
            Functional::Hamiltonian { multipliers: None } => false,
        };
        if bad {
            return Err(Error::LatticeMismatch(
                "smearing data does not match the phase point".into(),
            ));
        }
        Ok(())
    }

    /// Integrand at `site` (without the `a³` factor) from a filled patch.
    fn local<T: Scalar>(&self, x: &Ctx<T>, site: usize) -> T {
        match self {
            Functional::Smeared { family, test } => {
                let d = family.eval(x);
                let mut s = T::zero();
                for (v, t) in d.iter().zip(test.at(site)) {
                    if *t != 0.0 {
                        s += *v * *t;
                    }
                }
                s
            }
            Functional::Hamiltonian { multipliers } => {
                hamiltonian_density(x, multipliers.as_ref().map(|m| m.values.at(site)))
            }
        }
    }

    /// Patch slots the integrand depends on, read off one reverse sweep at a
    /// generic patch.
    fn dependencies(&self, cm: &CompiledModule, lay: Layout) -> Vec<usize> {
        let n2 = 2 * lay.width();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let values: Vec<f64> = (0..PATCH * n2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let probe = match self {
            Functional::Smeared { family, .. } => {
                let k = family.ncomp(cm.p, cm.q);
                Functional::Smeared {
                    family: *family,
                    test: Field {
                        ncomp: k,
                        data: (0..k).map(|_| rng.gen_range(0.5..1.5)).collect(),
                    },
                }
            }
            Functional::Hamiltonian { multipliers } => Functional::Hamiltonian {
                multipliers: multipliers.as_ref().map(|_| MultiplierSet {
                    values: Field {
                        ncomp: lay.width(),
                        data: (0..lay.width()).map(|_| rng.gen_range(0.5..1.5)).collect(),
                    },
                }),
            },
        };
        Rev::reset();
        let patch: Vec<Rev> = values.iter().map(|v| Rev::input(*v)).collect();
        let out = probe.local(&Ctx::new(cm, lay, &patch, 0.37), 0);
        let adj = Rev::adjoints(out, patch.len());
        Rev::reset();
        (0..adj.len()).filter(|&k| adj[k] != 0.0).collect()
    }
}

pub(crate) fn neighbour(l: &Lattice, site: usize, off: usize) -> usize {
    match off {
        0 => site,
        o => {
            let axis = (o - 1) / 2;
            l.shift(site, axis, if o % 2 == 1 { 1 } else { -1 })
        }
    }
}

pub(crate) fn fill_patch(pt: &PhasePoint, site: usize, out: &mut [f64]) {
    let n = pt.layout().width();
    for off in 0..PATCH {
        let s = neighbour(&pt.lattice, site, off);
        out[off * 2 * n..off * 2 * n + n].copy_from_slice(pt.coords.at(s));
        out[off * 2 * n + n..(off + 1) * 2 * n].copy_from_slice(pt.momenta.at(s));
    }
}

/// Per-site values of a constraint family.
pub fn evaluate_constraint(cm: &CompiledModule, family: Family, pt: &PhasePoint) -> Result<Field> {
    pt.check(cm)?;
    let lay = pt.layout();
    let mut out = Field::zeros(pt.lattice.sites(), family.ncomp(cm.p, cm.q));
    let mut patch = vec![0.0; PATCH * 2 * lay.width()];
    for site in 0..pt.lattice.sites() {
        fill_patch(pt, site, &mut patch);
        let x = Ctx::new(cm, lay, &patch, pt.lattice.spacing);
        out.at_mut(site).copy_from_slice(&family.eval(&x));
    }
    Ok(out)
}

pub fn evaluate_smeared(cm: &CompiledModule, f: &Functional, pt: &PhasePoint) -> Result<f64> {
    f.check(cm, pt)?;
    let lay = pt.layout();
    let mut patch = vec![0.0; PATCH * 2 * lay.width()];
    let mut terms = Vec::with_capacity(pt.lattice.sites());
    for site in 0..pt.lattice.sites() {
        fill_patch(pt, site, &mut patch);
        let x = Ctx::new(cm, lay, &patch, pt.lattice.spacing);
        terms.push(f.local(&x, site));
    }
    Ok(pt.lattice.spacing.powi(3) * crate::lattice::pairwise_sum(&terms))
}

/// Exact gradient by one reverse sweep per site; each patch slot's adjoint
/// is scattered back to the site that owns it.
pub fn functional_gradient(cm: &CompiledModule, f: &Functional, pt: &PhasePoint) -> Result<Gradient> {
    f.check(cm, pt)?;
    let lay = pt.layout();
    let n2 = 2 * lay.width();
    let deps = f.dependencies(cm, lay);
    let mut grad = empty_gradient(pt);
    let mut patch = vec![0.0; PATCH * n2];
    let mut vars = vec![Rev::cst(0.0); PATCH * n2];
    for site in 0..pt.lattice.sites() {
        fill_patch(pt, site, &mut patch);
        Rev::reset();
        for (v, x) in vars.iter_mut().zip(&patch) {
            *v = Rev::cst(*x);
        }
        for &slot in &deps {
            vars[slot] = Rev::input(patch[slot]);
        }
        let out = f.local(&Ctx::new(cm, lay, &vars, pt.lattice.spacing), site);
        let adj = Rev::adjoints(out, deps.len());
        for (k, &slot) in deps.iter().enumerate() {
            scatter(&mut grad, pt, site, slot, adj[k]);
        }
    }
    Rev::reset();
    Ok(grad)
}

/// The same gradient by forward-mode seeding of one patch slot at a time.
/// Slower; kept as an independent cross-check.
pub fn functional_gradient_forward(
    cm: &CompiledModule,
    f: &Functional,
    pt: &PhasePoint,
) -> Result<Gradient> {
    f.check(cm, pt)?;
    let lay = pt.layout();
    let n2 = 2 * lay.width();
    let mut grad = empty_gradient(pt);
    let mut patch = vec![0.0; PATCH * n2];
    let mut dual = vec![Dual::default(); PATCH * n2];
    for site in 0..pt.lattice.sites() {
        fill_patch(pt, site, &mut patch);
        for (d, v) in dual.iter_mut().zip(&patch) {
            *d = Dual::new(*v, 0.0);
        }
        for slot in 0..PATCH * n2 {
            dual[slot].eps = 1.0;
            let e = f.local(&Ctx::new(cm, lay, &dual, pt.lattice.spacing), site).eps;
            dual[slot].eps = 0.0;
            scatter(&mut grad, pt, site, slot, e);
        }
    }
    Ok(grad)
}

fn empty_gradient(pt: &PhasePoint) -> Gradient {
    let n = pt.layout().width();
    Gradient {
        dq: Field::zeros(pt.lattice.sites(), n),
        dp: Field::zeros(pt.lattice.sites(), n),
    }
}

#[inline]
fn scatter(grad: &mut Gradient, pt: &PhasePoint, site: usize, slot: usize, e: f64) {
    if e == 0.0 {
        return;
    }
    let n = pt.layout().width();
    let (off, k) = (slot / (2 * n), slot % (2 * n));
    let owner = neighbour(&pt.lattice, site, off);
    let vol = pt.lattice.spacing.powi(3);
    if k < n {
        grad.dq.at_mut(owner)[k] += vol * e;
    } else {
        grad.dp.at_mut(owner)[k - n] += vol * e;
    }
}

/// `{F, G} = a^{-3} Σ (∂F/∂q ∂G/∂p − ∂F/∂p ∂G/∂q)`.
pub fn bracket_of_gradients(l: &Lattice, gf: &Gradient, gg: &Gradient) -> f64 {
    let terms: Vec<f64> = (0..gf.dq.data.len())
        .map(|i| gf.dq.data[i] * gg.dp.data[i] - gf.dp.data[i] * gg.dq.data[i])
        .collect();
    crate::lattice::pairwise_sum(&terms) / l.spacing.powi(3)
}

pub fn poisson_bracket(
    cm: &CompiledModule,
    f: &Functional,
    g: &Functional,
    pt: &PhasePoint,
) -> Result<f64> {
    let gf = functional_gradient(cm, f, pt)?;
    let gg = functional_gradient(cm, g, pt)?;
    Ok(bracket_of_gradients(&pt.lattice, &gf, &gg))
}
