//! Canonical phase space of the BFCG action on a spatial 3-lattice.
//!
//! Every site carries all spacetime components of the four fields and their
//! momenta. Coordinate layout (momenta identical, shifted by `N`):
//!
//! | block | offset          | components                |
//! |-------|-----------------|---------------------------|
//! | `B`   | `0`             | `pair·p + a` (6 pairs)    |
//! | `C`   | `6p`            | `μ·q + α`                 |
//! | `A`   | `6p + 4q`       | `μ·p + a`                 |
//! | `β`   | `10p + 4q`      | `pair·q + α` (6 pairs)    |
//!
//! with `N = 10(p + q)`. Pairs are the ordered spacetime pairs `μ < ν` and the
//! bracket pairs each stored coordinate with its stored momentum:
//! `{q(x), p(y)} = δ_xy / a³`.

mod density;
mod hamiltonian;
mod io;
mod offshell;
mod reduction;
mod relations;
mod smear;

pub use density::{Family, IndexKind};
pub use hamiltonian::{
    canonical_hamiltonian, consistency_residuals, determine_multipliers, total_hamiltonian,
    ConsistencyKind, ConsistencyRow, MultiplierSet, CONSISTENCY_FAMILIES,
};
pub use io::{parse_phase_point, render_phase_point, PHASE_HEADER};
pub use offshell::{offshell_relations, offshell_relations_at, OffshellResiduals};
pub use reduction::{gauge_fix, gauge_fixed_reduction, ReductionRow, REDUCTION_PAIRS};
pub use relations::{
    check_algebra_relation, classification_table, relation, relation_ids, smeared_rhs, Classification, Relation, RelationCheck,
    Table, RELATIONS,
};
pub use smear::{
    bracket_of_gradients, evaluate_constraint, evaluate_smeared, functional_gradient,
    functional_gradient_forward, poisson_bracket, smear,
    Functional, Gradient,
};

use crate::crossed_module::{CompiledModule, DifferentialCrossedModule};
use crate::lattice::{
    random_components, sample_components, Field, FieldConfiguration, FieldRecipe, Lattice,
    ScalarRecipe,
};
use crate::{Error, Result};

/// Largest wave number of random phase points and test fields. With 1 every
/// trilinear lattice sum only sees mode triples on which central differences
/// obey the product rule, which would hide genuine `O(a²)` defects.
pub const PHASE_MODES: usize = 2;

/// Slot offsets of the four coordinate blocks for algebra dimensions `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub p: usize,
    pub q: usize,
}

impl Layout {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }
    pub fn b(&self) -> usize {
        0
    }
    pub fn c(&self) -> usize {
        6 * self.p
    }
    pub fn a(&self) -> usize {
        6 * self.p + 4 * self.q
    }
    pub fn beta(&self) -> usize {
        10 * self.p + 4 * self.q
    }
    /// Coordinates per site, `N = 10(p + q)`.
    pub fn width(&self) -> usize {
        10 * (self.p + self.q)
    }
}

/// Canonical coordinates and momenta on a 3-lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub module: String,
    pub lattice: Lattice,
    pub p: usize,
    pub q: usize,
    pub coords: Field,
    pub momenta: Field,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentumRule {
    /// Momenta from their definitions, so every primary constraint vanishes.
    OnShell,
    /// Independent smooth momenta.
    Random { seed: u64 },
}

impl PhasePoint {
    pub fn zeros(module: &str, lattice: Lattice, p: usize, q: usize) -> Self {
        let w = Layout::new(p, q).width();
        Self {
            module: module.to_string(),
            lattice,
            p,
            q,
            coords: Field::zeros(lattice.sites(), w),
            momenta: Field::zeros(lattice.sites(), w),
        }
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.p, self.q)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.data.iter().chain(&self.momenta.data).all(|v| v.is_finite())
    }

    pub(crate) fn check(&self, cm: &CompiledModule) -> Result<()> {
        if cm.p != self.p || cm.q != self.q {
            return Err(Error::LatticeMismatch(format!(
                "module {} has (p, q) = ({}, {}), phase point has ({}, {})",
                cm.name, cm.p, cm.q, self.p, self.q
            )));
        }
        if self.lattice.dim != 3 {
            return Err(Error::LatticeMismatch(format!(
                "phase space lives on a 3-lattice, got dimension {}",
                self.lattice.dim
            )));
        }
        Ok(())
    }

    /// The coordinates as a time-slice configuration (`form_dim = 4`).
    pub fn configuration(&self) -> FieldConfiguration {
        let l = self.layout();
        let mut cfg = FieldConfiguration::zeros(&self.module, self.lattice, 4, self.p, self.q);
        for site in 0..self.lattice.sites() {
            let x = self.coords.at(site);
            cfg.b.at_mut(site).copy_from_slice(&x[l.b()..l.c()]);
            cfg.c.at_mut(site).copy_from_slice(&x[l.c()..l.a()]);
            cfg.a.at_mut(site).copy_from_slice(&x[l.a()..l.beta()]);
            cfg.beta.at_mut(site).copy_from_slice(&x[l.beta()..l.width()]);
        }
        cfg
    }
}

fn ensure_slice(cfg: &FieldConfiguration) -> Result<()> {
    if cfg.form_dim != 4 || cfg.lattice.dim != 3 {
        return Err(Error::LatticeMismatch(format!(
            "expected a spacetime configuration on a 3-lattice, got form dimension {} on dimension {}",
            cfg.form_dim, cfg.lattice.dim
        )));
    }
    Ok(())
}

/// Builds a phase point from the time slice `cfg`.
pub fn phase_from_config(
    cm: &CompiledModule,
    cfg: &FieldConfiguration,
    rule: MomentumRule,
) -> Result<PhasePoint> {
    ensure_slice(cfg)?;
    let momenta = match rule {
        MomentumRule::OnShell => None,
        MomentumRule::Random { seed } => {
            let recipes = momentum_recipes(cfg.p, cfg.q, seed);
            Some(sample_components(&recipes, &cfg.lattice, 4))
        }
    };
    assemble(cm, cfg, momenta)
}

fn momentum_recipes(p: usize, q: usize, seed: u64) -> Vec<ScalarRecipe> {
    random_components(Layout::new(p, q).width(), 4, PHASE_MODES, 0.5, seed ^ 0x6d6f_6d65_6e74_61)
}

fn assemble(cm: &CompiledModule, cfg: &FieldConfiguration, momenta: Option<Field>) -> Result<PhasePoint> {
    let mut pt = PhasePoint::zeros(&cfg.module, cfg.lattice, cfg.p, cfg.q);
    pt.check(cm)?;
    let l = pt.layout();
    for site in 0..cfg.lattice.sites() {
        let x = pt.coords.at_mut(site);
        x[l.b()..l.c()].copy_from_slice(cfg.b.at(site));
        x[l.c()..l.a()].copy_from_slice(cfg.c.at(site));
        x[l.a()..l.beta()].copy_from_slice(cfg.a.at(site));
        x[l.beta()..l.width()].copy_from_slice(cfg.beta.at(site));
    }
    match momenta {
        Some(m) => pt.momenta = m,
        None => {
            for site in 0..cfg.lattice.sites() {
                let pi = density::on_shell_momenta(cm, l, pt.coords.at(site));
                pt.momenta.at_mut(site).copy_from_slice(&pi);
            }
        }
    }
    Ok(pt)
}

/// Resolution-independent description of a phase point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecipe {
    pub fields: FieldRecipe,
    pub rule: MomentumRule,
}

impl PhaseRecipe {
    /// Smooth coordinates and the chosen momentum rule.
    pub fn random(cm: &DifferentialCrossedModule, seed: u64, rule: MomentumRule) -> Result<Self> {
        Ok(Self {
            fields: FieldRecipe::random(cm, 4, PHASE_MODES, seed)?,
            rule,
        })
    }

    pub fn evaluate(&self, cm: &CompiledModule, lattice: &Lattice) -> Result<PhasePoint> {
        let cfg = self.fields.evaluate(lattice)?;
        phase_from_config(cm, &cfg, self.rule)
    }
}

/// Smooth test field with `ncomp` components on a 3-lattice.
pub fn smooth_test_field(ncomp: usize, lattice: &Lattice, seed: u64) -> Field {
    sample_components(&random_components(ncomp, 3, PHASE_MODES, 1.0, seed), lattice, 3)
}
