//! The constraint-algebra relations as smeared, finite-sum identities.
//!
//! A line `{K1(x), K2(y)} = c · [structure] K3(x) δ(x − y)` becomes
//! `{K1[f], K2[g]} = a³ Σ_x c · [structure](f(x), g(x), K3(x))`.
//! Each line is classified as exact on the lattice (its derivation uses no
//! product rule for differences) or as refinement-convergent.

use super::density::{Family, SPATIAL_PAIRS};
use super::smear::{bracket_of_gradients, evaluate_constraint, functional_gradient, smear};
use super::{smooth_test_field, PhasePoint};
use crate::crossed_module::CompiledModule;
use crate::lattice::{levi_civita4, pairwise_sum, Field};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Holds to rounding on any lattice.
    Exact,
    /// Holds up to `O(a²)` from the discrete product rule.
    Refinement,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Exact => "exact",
            Classification::Refinement => "refinement",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Primary,
    GaugeFixed,
    FirstClass,
    Mixed,
}

/// One line of a bracket table.
#[derive(Debug, Clone, Copy)]
pub struct Relation {
    pub id: &'static str,
    pub table: Table,
    pub left: Family,
    pub right: Family,
    /// The constraint on the right-hand side; `None` for a constant bracket.
    pub result: Option<Family>,
    pub class: Classification,
    pub statement: &'static str,
    rhs: Rhs,
}

/// Shapes of right-hand sides; the number is the overall coefficient.
#[derive(Debug, Clone, Copy)]
enum Rhs {
    /// `c ε^{ijk} Q_{ab} f_a^{jk} g_b^i` (primary P(B), P(A))
    EpsQ(f64),
    /// `c ε^{ijk} q_{αβ} f_α^k g_β^{ij}` (primary P(C), P(β))
    EpsSmallQ(f64),
    /// `c Σ_blocks f·[g, K]` with `g` a single g-vector
    AdjBlocks(f64),
    /// `c K·[f, g]` for single g-vectors `f`, `g`
    AdjPair(f64),
    /// `c Σ_k f·(K^{(k)} ▷ g_k)`, `K^{(k)} = Σ_{i<j} ε^{ijk} Σ(H)_{ij}`
    EpsHAct(f64),
    /// `c f·(g ▷ K)` with `g` a g-vector, `f`, `K` single h-vectors
    ActOnK(f64),
    /// `c Σ_k K_k·(g ▷ f_k)`
    ActOnF(f64),
    /// `c Σ_i f·(K_i ▷ q⁻¹ g_i)` with `K` carrying a spatial index
    KActRaisedG(f64),
    /// `c Σ_k f_k·(g ▷ K_k)` with `g` a g-vector
    ActBlocks(f64),
    /// `c Σ_{i≠j} f_i·[g_j, Q⁻¹ K^{ij}]`, `K` a spatial pair family
    AdjPairIJ(f64),
    /// `c Σ_i f·(g_i ▷ q⁻¹ K^i)`
    GActRaisedK(f64),
    /// `c Σ_{i<j} f·(Q⁻¹ K^{ij} ▷ g_{ij})`
    RaisedKActG(f64),
    /// `c Σ_{i≠j} f_i·(g_j ▷ q⁻¹ K^{ij})`
    GActRaisedKIJ(f64),
    /// `c Σ_{i≠j} f_i·(Q⁻¹ K^{ij} ▷ g_j)`
    RaisedKIJActG(f64),
    /// `c Σ_b K_b·[f, g_b]`, single `f`, blocks of `g`
    KAdjFG(f64),
    /// `c Σ_b K_b·(f ▷ g_b)`
    KActFG(f64),
}

use Classification::{Exact, Refinement};
use Family::*;
use Table::*;

macro_rules! rel {
    ($id:expr, $t:expr, $l:expr, $r:expr, $k:expr, $c:expr, $rhs:expr, $s:expr) => {
        Relation { id: $id, table: $t, left: $l, right: $r, result: $k, class: $c, rhs: $rhs, statement: $s }
    };
}

/// All lines: two primary brackets, five gauge-fixed, five first-class and
/// nine mixed first/second-class brackets.
pub const RELATIONS: [Relation; 21] = [
    rel!("primary-1", Primary, PB, PA, None, Exact, Rhs::EpsQ(1.0),
        "{P(B)_a^{jk}, P(A)_b^i} = eps^{ijk} Q_ab"),
    rel!("primary-2", Primary, PC, PBeta, None, Exact, Rhs::EpsSmallQ(-1.0),
        "{P(C)_alpha^k, P(beta)_beta^{ij}} = -eps^{ijk} q_alpha beta"),
    rel!("gauge-1", GaugeFixed, SigmaH, SigmaBCB, Some(SigmaH), Refinement, Rhs::AdjBlocks(1.0),
        "{Sigma(H)^a_ij, Sigma(BCbeta)_b} = f^a_bc Sigma(H)^c_ij"),
    rel!("gauge-2", GaugeFixed, SigmaG, SigmaCB, Some(SigmaH), Refinement, Rhs::EpsHAct(-1.0),
        "{Sigma(G)^alpha, Sigma(CB)_beta^k} = -sum_{i<j} eps^{ijk} tri^alpha_{c beta} Sigma(H)^c_ij"),
    rel!("gauge-3", GaugeFixed, SigmaBCB, SigmaBCB, Some(SigmaBCB), Refinement, Rhs::AdjPair(1.0),
        "{Sigma(BCbeta)_a, Sigma(BCbeta)_b} = f^c_ab Sigma(BCbeta)_c"),
    rel!("gauge-4", GaugeFixed, SigmaG, SigmaBCB, Some(SigmaG), Refinement, Rhs::ActOnK(1.0),
        "{Sigma(G)^alpha, Sigma(BCbeta)_a} = tri^alpha_{a beta} Sigma(G)^beta"),
    rel!("gauge-5", GaugeFixed, SigmaCB, SigmaBCB, Some(SigmaCB), Refinement, Rhs::ActOnF(-1.0),
        "{Sigma(CB)_alpha^k, Sigma(BCbeta)_a} = -tri^beta_{a alpha} Sigma(CB)_beta^k"),
    rel!("first-class-1", FirstClass, PhiG, PhiCB, Some(PhiH), Refinement, Rhs::KActRaisedG(-1.0),
        "{phi(G)^alpha, phi(CB)^{beta i}} = -tri^alpha_a^beta phi(H)^{ai}"),
    rel!("first-class-2", FirstClass, PhiG, PhiBCB, Some(PhiG), Refinement, Rhs::ActOnK(1.0),
        "{phi(G)^alpha, phi(BCbeta)_a} = tri^alpha_{a beta} phi(G)^beta"),
    rel!("first-class-3", FirstClass, PhiCB, PhiBCB, Some(PhiCB), Refinement, Rhs::ActBlocks(1.0),
        "{phi(CB)^{alpha k}, phi(BCbeta)_a} = tri^alpha_{a beta} phi(CB)^{beta k}"),
    rel!("first-class-4", FirstClass, PhiH, PhiBCB, Some(PhiH), Refinement, Rhs::AdjBlocks(1.0),
        "{phi(H)^{ai}, phi(BCbeta)_b} = f^a_bc phi(H)^{ci}"),
    rel!("first-class-5", FirstClass, PhiBCB, PhiBCB, Some(PhiBCB), Refinement, Rhs::AdjPair(1.0),
        "{phi(BCbeta)_a, phi(BCbeta)_b} = f^c_ab phi(BCbeta)_c"),
    rel!("mixed-1", Mixed, PhiH, ChiA, Some(ChiB), Exact, Rhs::AdjPairIJ(-1.0),
        "{phi(H)^{ai}, chi(A)_b^j} = -f^a_bc chi(B)^{c ij}"),
    rel!("mixed-2", Mixed, PhiG, ChiA, Some(ChiC), Exact, Rhs::GActRaisedK(1.0),
        "{phi(G)^alpha, chi(A)_a^i} = tri^alpha_{a gamma} chi(C)^{gamma i}"),
    rel!("mixed-3", Mixed, PhiG, ChiBeta, Some(ChiB), Exact, Rhs::RaisedKActG(-1.0),
        "{phi(G)^alpha, chi(beta)_beta^{ij}} = -tri^alpha_{a beta} chi(B)^{a ij}"),
    rel!("mixed-4", Mixed, PhiCB, ChiA, Some(ChiBeta), Exact, Rhs::GActRaisedKIJ(-1.0),
        "{phi(CB)^{alpha i}, chi(A)_a^j} = -tri^alpha_a^gamma chi(beta)_gamma^{ij}"),
    rel!("mixed-5", Mixed, PhiCB, ChiC, Some(ChiB), Exact, Rhs::RaisedKIJActG(1.0),
        "{phi(CB)^{alpha i}, chi(C)_beta^j} = tri^alpha_{a beta} chi(B)^{a ij}"),
    rel!("mixed-6", Mixed, PhiBCB, ChiA, Some(ChiA), Exact, Rhs::KAdjFG(1.0),
        "{phi(BCbeta)_a, chi(A)_b^i} = f^a_bc chi(A)^{ci}"),
    rel!("mixed-7", Mixed, PhiBCB, ChiBeta, Some(ChiBeta), Exact, Rhs::KActFG(1.0),
        "{phi(BCbeta)_a, chi(beta)_alpha^{jk}} = tri^{gamma a}_alpha chi(beta)_gamma^{jk}"),
    rel!("mixed-8", Mixed, PhiBCB, ChiC, Some(ChiC), Exact, Rhs::KActFG(1.0),
        "{phi(BCbeta)_a, chi(C)_alpha^i} = -tri_alpha^a_beta chi(C)^{beta i}"),
    rel!("mixed-9", Mixed, PhiBCB, ChiB, Some(ChiB), Exact, Rhs::KAdjFG(1.0),
        "{phi(BCbeta)_a, chi(B)_b^{jk}} = f^a_bc chi(B)^{c jk}"),
];

impl Table {
    pub fn name(&self) -> &'static str {
        match self {
            Table::Primary => "primary",
            Table::GaugeFixed => "gauge-fixed",
            Table::FirstClass => "first-class",
            Table::Mixed => "first/second-class",
        }
    }
}

/// Markdown rendering of every line with its classification; the committed
/// copy lives in `docs/relation_classification.md`.
pub fn classification_table() -> String {
    let mut s = String::from(
        "# Relation classification\n\n\
         `exact`: holds to rounding on every lattice. `refinement`: differs from the\n\
         continuum identity by `O(a²)` product-rule defects of central differences.\n\n\
         | id | table | bracket | statement | class |\n\
         |----|-------|---------|-----------|-------|\n",
    );
    for r in &RELATIONS {
        s.push_str(&format!(
            "| {} | {} | {{{}, {}}} | `{}` | {} |\n",
            r.id,
            r.table.name(),
            r.left.name(),
            r.right.name(),
            r.statement,
            r.class.name()
        ));
    }
    s
}

pub fn relation_ids() -> Vec<&'static str> {
    RELATIONS.iter().map(|r| r.id).collect()
}

pub fn relation(id: &str) -> Result<&'static Relation> {
    RELATIONS
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownRelation(id.to_string()))
}

/// Outcome of one relation at one phase point.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub id: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Evaluates both sides of relation `id` with smooth test fields drawn from
/// `seeds = (seed_f, seed_g)`.
pub fn check_algebra_relation(
    cm: &CompiledModule,
    id: &str,
    pt: &PhasePoint,
    seeds: (u64, u64),
) -> Result<RelationCheck> {
    let r = relation(id)?;
    let l = &pt.lattice;
    let f = smooth_test_field(r.left.ncomp(cm.p, cm.q), l, seeds.0);
    let g = smooth_test_field(r.right.ncomp(cm.p, cm.q), l, seeds.1);
    let gf = functional_gradient(cm, &smear(cm, r.left, f.clone())?, pt)?;
    let gg = functional_gradient(cm, &smear(cm, r.right, g.clone())?, pt)?;
    let lhs = bracket_of_gradients(l, &gf, &gg);
    let rhs = smeared_rhs(cm, r, pt, &f, &g)?;
    Ok(RelationCheck {
        id: r.id,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `a³ Σ_x` of the right-hand side contraction.
pub fn smeared_rhs(cm: &CompiledModule, r: &Relation, pt: &PhasePoint, f: &Field, g: &Field) -> Result<f64> {
    let k = match r.result {
        Some(fam) => Some(evaluate_constraint(cm, fam, pt)?),
        None => None,
    };
    let terms: Vec<f64> = (0..pt.lattice.sites())
        .map(|x| contract(cm, r.rhs, f.at(x), g.at(x), k.as_ref().map_or(&[][..], |k| k.at(x))))
        .collect();
    Ok(pt.lattice.spacing.powi(3) * pairwise_sum(&terms))
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn blk(x: &[f64], k: usize, m: usize) -> &[f64] {
    &x[k * m..(k + 1) * m]
}

/// Signed block of a spatial pair family at spatial labels `(i, j)`, `i ≠ j`.
fn pair_blk(x: &[f64], i: usize, j: usize, m: usize) -> (usize, f64) {
    let _ = (x, m);
    let (lo, hi, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    let k = SPATIAL_PAIRS.iter().position(|&pr| pr == (lo, hi)).expect("spatial pair");
    (k, s)
}

fn contract(cm: &CompiledModule, rhs: Rhs, f: &[f64], g: &[f64], k: &[f64]) -> f64 {
    let (p, q) = (cm.p, cm.q);
    let raise_g = |x: &[f64]| {
        let mut o = vec![0.0; p];
        cm.raise_g(x, 1.0, &mut o);
        o
    };
    let raise_h = |x: &[f64]| {
        let mut o = vec![0.0; q];
        cm.raise_h(x, 1.0, &mut o);
        o
    };
    let adj = |x: &[f64], y: &[f64]| {
        let mut o = vec![0.0; p];
        cm.bracket_g(x, y, 1.0, &mut o);
        o
    };
    let act = |x: &[f64], u: &[f64]| {
        let mut o = vec![0.0; q];
        cm.act_on(x, u, 1.0, &mut o);
        o
    };
    // spatial labels 1..4 for blocks 0..3 of vector families
    let spatial = 1..4usize;
    match rhs {
        Rhs::EpsQ(c) => {
            // f: P(B) over PAIRS4, g: P(A) over μ = 0..4
            let mut s = 0.0;
            for (kp, (j, kk)) in SPATIAL_PAIRS.into_iter().enumerate() {
                for i in spatial.clone() {
                    let e = levi_civita4([0, i, j, kk]);
                    if e != 0.0 {
                        s += e * cm.pair_g(blk(f, 3 + kp, p), blk(g, i, p));
                    }
                }
            }
            c * s
        }
        Rhs::EpsSmallQ(c) => {
            // f: P(C) over μ, g: P(β) over PAIRS4
            let mut s = 0.0;
            for (kp, (i, j)) in SPATIAL_PAIRS.into_iter().enumerate() {
                for kk in spatial.clone() {
                    let e = levi_civita4([0, i, j, kk]);
                    if e != 0.0 {
                        s += e * cm.pair_h(blk(f, kk, q), blk(g, 3 + kp, q));
                    }
                }
            }
            c * s
        }
        Rhs::AdjBlocks(c) => {
            let nb = f.len() / p;
            c * (0..nb).map(|b| dot(blk(f, b, p), &adj(g, blk(k, b, p)))).sum::<f64>()
        }
        Rhs::AdjPair(c) => c * dot(k, &adj(f, g)),
        Rhs::EpsHAct(c) => {
            let mut s = 0.0;
            for kk in spatial.clone() {
                let mut dual = vec![0.0; p];
                for (kp, (i, j)) in SPATIAL_PAIRS.into_iter().enumerate() {
                    let e = levi_civita4([0, i, j, kk]);
                    if e != 0.0 {
                        dual.iter_mut().zip(blk(k, kp, p)).for_each(|(d, v)| *d += e * v);
                    }
                }
                s += dot(f, &act(&dual, blk(g, kk - 1, q)));
            }
            c * s
        }
        Rhs::ActOnK(c) => c * dot(f, &act(g, k)),
        Rhs::ActOnF(c) => c * (0..3).map(|b| dot(blk(k, b, q), &act(g, blk(f, b, q)))).sum::<f64>(),
        Rhs::KActRaisedG(c) => {
            c * (0..3).map(|b| dot(f, &act(blk(k, b, p), &raise_h(blk(g, b, q))))).sum::<f64>()
        }
        Rhs::ActBlocks(c) => c * (0..3).map(|b| dot(blk(f, b, q), &act(g, blk(k, b, q)))).sum::<f64>(),
        Rhs::AdjPairIJ(c) => {
            let mut s = 0.0;
            for i in spatial.clone() {
                for j in spatial.clone().filter(|&j| j != i) {
                    let (kp, sg) = pair_blk(k, i, j, p);
                    let kij = raise_g(blk(k, kp, p));
                    s += sg * dot(blk(f, i - 1, p), &adj(blk(g, j - 1, p), &kij));
                }
            }
            c * s
        }
        Rhs::GActRaisedK(c) => {
            c * (0..3).map(|b| dot(f, &act(blk(g, b, p), &raise_h(blk(k, b, q))))).sum::<f64>()
        }
        Rhs::RaisedKActG(c) => {
            c * (0..3).map(|b| dot(f, &act(&raise_g(blk(k, b, p)), blk(g, b, q)))).sum::<f64>()
        }
        Rhs::GActRaisedKIJ(c) => {
            let mut s = 0.0;
            for i in spatial.clone() {
                for j in spatial.clone().filter(|&j| j != i) {
                    let (kp, sg) = pair_blk(k, i, j, q);
                    let kij = raise_h(blk(k, kp, q));
                    s += sg * dot(blk(f, i - 1, q), &act(blk(g, j - 1, p), &kij));
                }
            }
            c * s
        }
        Rhs::RaisedKIJActG(c) => {
            let mut s = 0.0;
            for i in spatial.clone() {
                for j in spatial.clone().filter(|&j| j != i) {
                    let (kp, sg) = pair_blk(k, i, j, p);
                    let kij = raise_g(blk(k, kp, p));
                    s += sg * dot(blk(f, i - 1, q), &act(&kij, blk(g, j - 1, q)));
                }
            }
            c * s
        }
        Rhs::KAdjFG(c) => {
            let nb = g.len() / p;
            c * (0..nb).map(|b| dot(blk(k, b, p), &adj(f, blk(g, b, p)))).sum::<f64>()
        }
        Rhs::KActFG(c) => {
            let nb = g.len() / q;
            c * (0..nb).map(|b| dot(blk(k, b, q), &act(f, blk(g, b, q)))).sum::<f64>()
        }
    }
}
