use crate::{RunConfig, Section};
use bfcg_core::canonical::{
    check_algebra_relation, consistency_residuals, gauge_fixed_reduction, offshell_relations_at,
    relation_ids, smooth_test_field, Classification, ConsistencyKind, MomentumRule, MultiplierSet,
    PhasePoint, PhaseRecipe, RELATIONS,
};
use bfcg_core::convergence::{convergence_study, fit_order, Order};
use bfcg_core::crossed_module::{validate_crossed_module, CompiledModule, DifferentialCrossedModule, DEFAULT_TOLERANCE};
use bfcg_core::dof::{dof_count, dof_report};
use bfcg_core::lattice::{
    bianchi_residuals_at, constant_thin_covariance, eom_gradient_check, evaluate_action, fat_gauge_transform,
    make_lattice, random_components, thin_gauge_transform, BianchiResiduals, CurvatureBundle, FieldRecipe,
    GaugeData, Lattice,
};
use bfcg_core::{Error, Result};

/// Least convergence order accepted for refinement-classified checks.
pub const MIN_ORDER: f64 = 1.8;
const BIANCHI_MAX_ORDER: f64 = 2.2;
const EOM_SAMPLES: usize = 200;
const EOM_TOLERANCE: f64 = 1e-6;
const REDUCTION_TOLERANCE: f64 = 1e-12;
/// Default refinement ladder.
pub const DEFAULT_LADDER: [usize; 3] = [8, 16, 32];
/// The dependency relations nest two differences of products and reach the
/// asymptotic regime only from `n = 16`.
pub const OFFSHELL_LADDER: [usize; 3] = [16, 32, 64];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Validate,
    Curvature,
    GaugeCheck,
    Bianchi,
    Eom,
    Algebra,
    Consistency,
    Offshell,
    Dof,
}

/// The `full-report` sequence.
pub const CHECK_ORDER: [Check; 8] = [
    Check::Validate,
    Check::Bianchi,
    Check::GaugeCheck,
    Check::Eom,
    Check::Algebra,
    Check::Consistency,
    Check::Offshell,
    Check::Dof,
];

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Validate => "validate",
            Check::Curvature => "curvature",
            Check::GaugeCheck => "gauge-check",
            Check::Bianchi => "bianchi",
            Check::Eom => "eom",
            Check::Algebra => "algebra",
            Check::Consistency => "consistency",
            Check::Offshell => "offshell",
            Check::Dof => "dof",
        }
    }
}

pub fn run_check(check: Check, dcm: &DifferentialCrossedModule, cfg: &RunConfig) -> Result<Section> {
    let (lines, pass) = match check {
        Check::Dof => dof(dcm, cfg)?,
        Check::Validate => validate(dcm, cfg),
        _ => {
            let cm = dcm.compile()?;
            match check {
                Check::Curvature => curvature(dcm, &cm, cfg)?,
                Check::GaugeCheck => gauge(dcm, &cm, cfg)?,
                Check::Bianchi => bianchi(dcm, &cm, cfg)?,
                Check::Eom => eom(dcm, &cm, cfg)?,
                Check::Algebra => algebra(dcm, &cm, cfg)?,
                Check::Consistency => consistency(dcm, &cm, cfg)?,
                Check::Offshell => offshell(dcm, &cm, cfg)?,
                Check::Validate | Check::Dof => unreachable!(),
            }
        }
    };
    Ok(Section { check, module: dcm.name.clone(), lines, pass })
}

type Lines = (Vec<String>, bool);

fn lattice(cfg: &RunConfig, ns: &[usize], dim: usize, n: usize) -> Result<Lattice> {
    make_lattice(dim, n, cfg.length(ns) / n as f64)
}

fn single(cfg: &RunConfig) -> Vec<usize> {
    cfg.ns.as_ref().map_or(vec![DEFAULT_LADDER[0]], |ns| vec![ns[0]])
}

fn ladder(cfg: &RunConfig, default: &[usize]) -> Result<Vec<usize>> {
    let ns = cfg.ns.clone().unwrap_or_else(|| default.to_vec());
    if ns.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "refinement checks need at least 3 resolutions in --n, got {}",
            ns.len()
        )));
    }
    Ok(ns)
}

/// Sites present at every resolution of the ladder.
fn shared_sites(l: &Lattice, ns: &[usize]) -> Result<Vec<usize>> {
    let g = ns.iter().fold(0, |a, &b| gcd(a, b));
    l.coarse_sites(g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn spacings(cfg: &RunConfig, ns: &[usize]) -> Vec<f64> {
    ns.iter().map(|&n| cfg.length(ns) / n as f64).collect()
}

fn order_line(name: &str, ns: &[usize], residuals: &[f64], order: Order) -> String {
    let r: Vec<String> = residuals.iter().map(|v| format!("{v:.6e}")).collect();
    let n: Vec<String> = ns.iter().map(|v| v.to_string()).collect();
    format!("{name} n={} residuals={} order={order}", n.join(","), r.join(","))
}

fn validate(dcm: &DifferentialCrossedModule, cfg: &RunConfig) -> Lines {
    let report = validate_crossed_module(dcm, cfg.tol.unwrap_or(DEFAULT_TOLERANCE));
    let lines = report
        .checks
        .iter()
        .map(|c| format!("identity {} violation={:.6e} {}", c.name, c.violation, crate::verdict(c.pass)))
        .collect();
    (lines, report.passed())
}

fn curvature(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig) -> Result<Lines> {
    let ns = single(cfg);
    let n = ns[0];
    let c = FieldRecipe::random(dcm, 4, 1, cfg.seed)?.evaluate(&lattice(cfg, &ns, 4, n)?)?;
    let b = CurvatureBundle::compute(cm, &c)?;
    let named = [("F", &b.f), ("H", &b.h), ("G", &b.g3), ("T", &b.t), ("GB", &b.gb)];
    let lines = named.iter().map(|(k, f)| format!("max|{k}| n={n} {:.6e}", f.max_abs())).collect();
    let pass = named.iter().all(|(_, f)| f.data.iter().all(|v| v.is_finite()));
    Ok((lines, pass))
}

fn gauge(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig) -> Result<Lines> {
    let ns = &ladder(cfg, &DEFAULT_LADDER)?;
    let recipe = FieldRecipe::random(dcm, 4, 1, cfg.seed)?;
    let thin = random_components(dcm.p, 4, 1, 0.3, cfg.seed ^ 0x7468);
    let fat = random_components(4 * dcm.q, 4, 1, 0.3, cfg.seed ^ 0x6661);
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, is_thin) in [("thin |dS|", true), ("fat |dS|", false)] {
        let report = convergence_study(4, cfg.length(ns), ns, |l| {
            let c = recipe.evaluate(l)?;
            let g = GaugeData::from_recipes(l, 4, &thin, &fat);
            let t = if is_thin { thin_gauge_transform(cm, &c, &g.thin, 12)? } else { fat_gauge_transform(cm, &c, &g.fat)? };
            Ok((evaluate_action(cm, &t)? - evaluate_action(cm, &c)?).abs())
        })?;
        let r: Vec<f64> = report.rows.iter().map(|r| r.residual).collect();
        let ok = report.order.at_least(MIN_ORDER);
        lines.push(format!("{} {}", order_line(name, ns, &r, report.order), crate::verdict(ok)));
        pass &= ok;
    }
    let c = recipe.evaluate(&lattice(cfg, ns, 4, ns[0])?)?;
    let eps: Vec<f64> = (0..dcm.p).map(|i| 0.4 - 0.25 * i as f64).collect();
    let dev = constant_thin_covariance(cm, &c, &eps)?;
    let ok = dev <= cfg.tol.unwrap_or(DEFAULT_TOLERANCE);
    lines.push(format!("constant-thin covariance n={} deviation={dev:.6e} {}", ns[0], crate::verdict(ok)));
    Ok((lines, pass && ok))
}

fn bianchi(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig) -> Result<Lines> {
    let ns = &ladder(cfg, &DEFAULT_LADDER)?;
    let recipe = FieldRecipe::random(dcm, 4, 1, cfg.seed)?;
    let mut rows = Vec::new();
    for &n in ns {
        let l = lattice(cfg, ns, 4, n)?;
        rows.push(bianchi_residuals_at(cm, &recipe.evaluate(&l)?, &shared_sites(&l, ns)?)?.as_array());
    }
    let mut lines = Vec::new();
    let mut pass = true;
    for (k, name) in BianchiResiduals::NAMES.iter().enumerate() {
        let r: Vec<f64> = rows.iter().map(|row| row[k]).collect();
        let order = fit_order(&spacings(cfg, ns), &r)?;
        let ok = order == Order::Exact || order.within(MIN_ORDER, BIANCHI_MAX_ORDER);
        lines.push(format!("{} {}", order_line(name, ns, &r, order), crate::verdict(ok)));
        pass &= ok;
    }
    Ok((lines, pass))
}

fn eom(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig) -> Result<Lines> {
    let ns = single(cfg);
    let n = ns[0];
    let c = FieldRecipe::random(dcm, 4, 1, cfg.seed)?.evaluate(&lattice(cfg, &ns, 4, n)?)?;
    let g = eom_gradient_check(cm, &c, EOM_SAMPLES, cfg.seed)?;
    let ok = g.relative <= cfg.tol.unwrap_or(EOM_TOLERANCE);
    let line = format!(
        "gradient n={n} samples={} max_abs_error={:.6e} max_abs_gradient={:.6e} relative={:.6e} {}",
        g.samples,
        g.max_abs_error,
        g.max_abs_gradient,
        g.relative,
        crate::verdict(ok)
    );
    Ok((vec![line], ok))
}

fn phase_points(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig, ns: &[usize]) -> Result<Vec<PhasePoint>> {
    let recipe = PhaseRecipe::random(dcm, cfg.seed, MomentumRule::Random { seed: cfg.seed.wrapping_add(1) })?;
    ns.iter().map(|&n| recipe.evaluate(cm, &lattice(cfg, ns, 3, n)?)).collect()
}

fn algebra(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig) -> Result<Lines> {
    let ns = &ladder(cfg, &DEFAULT_LADDER)?;
    let points = phase_points(dcm, cm, cfg, ns)?;
    let tol = cfg.tol.unwrap_or(DEFAULT_TOLERANCE);
    let seeds = (cfg.seed.wrapping_mul(2).wrapping_add(11), cfg.seed.wrapping_mul(2).wrapping_add(12));
    let mut lines = Vec::new();
    let mut pass = true;
    for (id, rel) in relation_ids().into_iter().zip(RELATIONS.iter()) {
        let checks = points
            .iter()
            .map(|pt| check_algebra_relation(cm, id, pt, seeds))
            .collect::<Result<Vec<_>>>()?;
        let r: Vec<f64> = checks.iter().map(|c| c.residual).collect();
        let last = checks.last().expect("ladder is non-empty");
        let (ok, order) = match rel.class {
            Classification::Exact => (r.iter().all(|v| *v <= tol), None),
            Classification::Refinement => {
                let o = fit_order(&spacings(cfg, ns), &r)?;
                (o.at_least(MIN_ORDER), Some(o))
            }
        };
        let order = order.map_or(String::new(), |o| format!(" order={o}"));
        lines.push(format!(
            "relation {id} class={} lhs={:.6e} rhs={:.6e} residual={:.6e}{order} {}",
            rel.class.name(),
            last.lhs,
            last.rhs,
            r.iter().cloned().fold(0.0, f64::max),
            crate::verdict(ok)
        ));
        pass &= ok;
    }
    Ok((lines, pass))
}

fn consistency(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig) -> Result<Lines> {
    let ns = &ladder(cfg, &DEFAULT_LADDER)?;
    let points = phase_points(dcm, cm, cfg, ns)?;
    let tol = cfg.tol.unwrap_or(DEFAULT_TOLERANCE);
    let mut tables = Vec::new();
    for pt in &points {
        let mut free = MultiplierSet::zeros(pt);
        free.values = smooth_test_field(pt.layout().width(), &pt.lattice, cfg.seed.wrapping_add(2));
        tables.push(consistency_residuals(cm, pt, &free, cfg.seed.wrapping_add(3))?);
    }
    let mut lines = Vec::new();
    let mut pass = true;
    for k in 0..tables[0].len() {
        let row = &tables[tables.len() - 1][k];
        let r: Vec<f64> = tables.iter().map(|t| t[k].residual).collect();
        let (ok, order) = match row.kind {
            ConsistencyKind::Secondary => {
                let o = fit_order(&spacings(cfg, ns), &r)?;
                (o.at_least(MIN_ORDER), format!(" order={o}"))
            }
            _ => {
                let scale = tables.iter().map(|t| t[k].prediction.abs()).fold(1.0, f64::max);
                (r.iter().all(|v| *v <= tol * scale), String::new())
            }
        };
        lines.push(format!(
            "bracket {} kind={:?} bracket={:.6e} prediction={:.6e} residual={:.6e}{order} {}",
            row.family.name(),
            row.kind,
            row.bracket,
            row.prediction,
            r.iter().cloned().fold(0.0, f64::max),
            crate::verdict(ok)
        ));
        pass &= ok;
    }
    for row in gauge_fixed_reduction(cm, &points[0])? {
        let ok = row.max_diff <= cfg.tol.unwrap_or(REDUCTION_TOLERANCE);
        let target = row.reduced.map_or("0", |f| f.name());
        lines.push(format!(
            "reduction {} -> {target} max_diff={:.6e} {}",
            row.first_class.name(),
            row.max_diff,
            crate::verdict(ok)
        ));
        pass &= ok;
    }
    Ok((lines, pass))
}

fn offshell(dcm: &DifferentialCrossedModule, cm: &CompiledModule, cfg: &RunConfig) -> Result<Lines> {
    let ns = &ladder(cfg, &OFFSHELL_LADDER)?;
    let points = phase_points(dcm, cm, cfg, ns)?;
    let rows = points
        .iter()
        .map(|pt| offshell_relations_at(cm, pt, &shared_sites(&pt.lattice, ns)?))
        .collect::<Result<Vec<_>>>()?;
    let a = spacings(cfg, ns);
    let mut lines = Vec::new();
    let mut pass = true;
    let series: [(&str, fn(&bfcg_core::canonical::OffshellResiduals) -> f64, bool); 4] = [
        ("relation-F |LHS-RHS|", |r| r.relation_f, true),
        ("relation-T |LHS-RHS|", |r| r.relation_t, true),
        ("bianchi-F |RHS|", |r| r.bianchi_f, false),
        ("bianchi-T |RHS|", |r| r.bianchi_t, false),
    ];
    for (name, get, graded) in series {
        let r: Vec<f64> = rows.iter().map(get).collect();
        let order = fit_order(&a, &r)?;
        let mut line = order_line(name, ns, &r, order);
        if graded {
            let ok = order.at_least(MIN_ORDER);
            line = format!("{line} {}", crate::verdict(ok));
            pass &= ok;
        }
        lines.push(line);
    }
    Ok((lines, pass))
}

/// The dof section for explicit dimensions, independent of any module.
pub fn dof_section(p: u64, q: u64) -> Result<Section> {
    let (lines, pass) = dof_lines(p, q)?;
    Ok(Section { check: Check::Dof, module: format!("p={p},q={q}"), lines, pass })
}

fn dof(dcm: &DifferentialCrossedModule, cfg: &RunConfig) -> Result<Lines> {
    let (p, q) = cfg.dims.unwrap_or((dcm.p as u64, dcm.q as u64));
    dof_lines(p, q)
}

fn dof_lines(p: u64, q: u64) -> Result<Lines> {
    let t = dof_count(p, q)?;
    let lines = dof_report(&t).lines().skip(1).map(str::to_string).collect();
    Ok((lines, t.n == 0))
}
