mod common;

use bfcg_core::canonical::{
    bracket_of_gradients, canonical_hamiltonian, check_algebra_relation, classification_table,
    consistency_residuals, determine_multipliers, evaluate_constraint, evaluate_smeared,
    functional_gradient, functional_gradient_forward, gauge_fix, gauge_fixed_reduction, offshell_relations,
    parse_phase_point, phase_from_config, poisson_bracket, relation, render_phase_point, smear,
    smooth_test_field, ConsistencyKind, Family, Functional, MomentumRule, MultiplierSet, PhasePoint,
    PhaseRecipe, RELATIONS,
};
use bfcg_core::crossed_module::CompiledModule;
use bfcg_core::lattice::Field;
use bfcg_core::Error;
use common::{lattice, module};
use proptest::prelude::*;

const FIRST_CLASS: [Family; 8] = [
    Family::PhiB,
    Family::PhiC,
    Family::PhiBeta,
    Family::PhiA,
    Family::PhiH,
    Family::PhiG,
    Family::PhiCB,
    Family::PhiBCB,
];

fn point(name: &str, n: usize, seed: u64) -> (CompiledModule, PhasePoint) {
    let (dcm, cm) = module(name);
    let recipe = PhaseRecipe::random(&dcm, seed, MomentumRule::Random { seed: seed + 1 }).unwrap();
    let pt = recipe.evaluate(&cm, &lattice(3, n)).unwrap();
    (cm, pt)
}

fn smeared(cm: &CompiledModule, pt: &PhasePoint, fam: Family, seed: u64) -> Functional {
    smear(cm, fam, smooth_test_field(fam.ncomp(cm.p, cm.q), &pt.lattice, seed)).unwrap()
}

#[test]
fn committed_classification_matches_relation_table() {
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/relation_classification.md")).unwrap();
    assert_eq!(doc, classification_table());
    assert_eq!(RELATIONS.len(), 21);
    assert!(matches!(relation("mixed-10"), Err(Error::UnknownRelation(_))));
}

#[test]
fn first_class_pairs_outside_the_tables_commute() {
    let (cm, pt) = point("adjoint(su2)", 8, 4);
    let listed = |a: Family, b: Family| RELATIONS.iter().any(|r| (r.left, r.right) == (a, b) || (r.left, r.right) == (b, a));
    let mut checked = 0;
    for (i, &a) in FIRST_CLASS.iter().enumerate() {
        for &b in &FIRST_CLASS[i..] {
            if listed(a, b) {
                continue;
            }
            let v = poisson_bracket(&cm, &smeared(&cm, &pt, a, 1), &smeared(&cm, &pt, b, 2), &pt).unwrap();
            assert!(v.abs() <= 1e-10, "{} {}: {v}", a.name(), b.name());
            checked += 1;
        }
    }
    assert!(checked >= 25);
}

#[test]
fn constraints_vanish_at_the_zero_point() {
    let (_, cm) = module("adjoint(su2)");
    let pt = PhasePoint::zeros("adjoint(su2)", lattice(3, 4), 3, 3);
    for fam in Family::ALL {
        assert_eq!(evaluate_constraint(&cm, fam, &pt).unwrap().max_abs(), 0.0, "{}", fam.name());
    }
    let r = offshell_relations(&cm, &pt).unwrap();
    assert_eq!((r.relation_f, r.relation_t, r.bianchi_f, r.bianchi_t), (0.0, 0.0, 0.0, 0.0));
    assert_eq!(canonical_hamiltonian(&cm, &pt).unwrap(), 0.0);
}

#[test]
fn on_shell_momenta_satisfy_every_primary_constraint() {
    let (dcm, cm) = module("vector_poincare");
    let recipe = PhaseRecipe::random(&dcm, 6, MomentumRule::OnShell).unwrap();
    let pt = recipe.evaluate(&cm, &lattice(3, 4)).unwrap();
    for fam in [Family::PB, Family::PC, Family::PA, Family::PBeta] {
        assert!(evaluate_constraint(&cm, fam, &pt).unwrap().max_abs() <= 1e-14, "{}", fam.name());
    }
}

#[test]
fn phase_point_needs_a_spacetime_slice_on_three_lattice() {
    let (dcm, cm) = module("adjoint(su2)");
    let cfg = common::recipe(&dcm, 4, 1).evaluate(&lattice(4, 4)).unwrap();
    assert!(matches!(phase_from_config(&cm, &cfg, MomentumRule::OnShell), Err(Error::LatticeMismatch(_))));
}

#[test]
fn forward_and_reverse_gradients_agree() {
    let (cm, pt) = point("vector_poincare", 4, 2);
    for fam in [Family::PhiBCB, Family::PhiCB, Family::SCB] {
        let f = smeared(&cm, &pt, fam, 9);
        let r = functional_gradient(&cm, &f, &pt).unwrap();
        let d = functional_gradient_forward(&cm, &f, &pt).unwrap();
        assert!(r.dq.max_abs_diff(&d.dq) <= 1e-12 && r.dp.max_abs_diff(&d.dp) <= 1e-12, "{}", fam.name());
    }
}

#[test]
fn wrong_test_field_width_is_rejected() {
    let (cm, pt) = point("adjoint(su2)", 4, 1);
    let bad = Field::zeros(pt.lattice.sites(), 2);
    assert!(matches!(smear(&cm, Family::PhiH, bad), Err(Error::ShapeMismatch { .. })));
}

#[test]
fn abelian_algebra_relations_hold_exactly() {
    let (cm, pt) = point("abelian(2,2)", 6, 3);
    for r in RELATIONS.iter() {
        let c = check_algebra_relation(&cm, r.id, &pt, (5, 6)).unwrap();
        assert!(c.residual <= 1e-11, "{}: {}", r.id, c.residual);
    }
}

#[test]
fn abelian_offshell_relations_hold_exactly() {
    for name in ["abelian(1,1)", "abelian(3,2)"] {
        let (cm, pt) = point(name, 6, 7);
        let r = offshell_relations(&cm, &pt).unwrap();
        assert!(r.relation_f <= 1e-12 && r.relation_t <= 1e-12, "{name}: {r:?}");
    }
}

#[test]
fn consistency_rows_behave_as_classified() {
    let (cm, pt) = point("vector_poincare", 6, 11);
    let mut free = MultiplierSet::zeros(&pt);
    free.values = smooth_test_field(pt.layout().width(), &pt.lattice, 12);
    let rows = consistency_residuals(&cm, &pt, &free, 13).unwrap();
    assert_eq!(rows.len(), 12);
    for row in rows.iter().filter(|r| r.kind != ConsistencyKind::Secondary) {
        assert!(row.residual <= 1e-10 * row.prediction.abs().max(1.0), "{}: {}", row.family.name(), row.residual);
    }
    for row in rows.iter().filter(|r| r.kind == ConsistencyKind::Spatial) {
        assert_eq!(row.prediction, 0.0);
    }
}

#[test]
fn determined_multipliers_keep_the_free_components() {
    let (cm, pt) = point("adjoint(su2)", 4, 5);
    let mut free = MultiplierSet::zeros(&pt);
    free.values = smooth_test_field(pt.layout().width(), &pt.lattice, 6);
    let lam = determine_multipliers(&cm, &pt, &free).unwrap();
    let lay = pt.layout();
    for s in 0..pt.lattice.sites() {
        for k in (0..lay.width()).filter(|&k| MultiplierSet::is_temporal(lay, k)) {
            assert_eq!(lam.values.at(s)[k], free.values.at(s)[k]);
        }
    }
}

#[test]
fn gauge_fixing_is_idempotent_and_reduces_exactly() {
    let (cm, pt) = point("adjoint(so31)", 4, 8);
    let fixed = gauge_fix(&cm, &pt).unwrap();
    assert_eq!(gauge_fix(&cm, &fixed).unwrap(), fixed);
    for row in gauge_fixed_reduction(&cm, &pt).unwrap() {
        assert!(row.max_diff <= 1e-12, "{}: {}", row.first_class.name(), row.max_diff);
    }
}

#[test]
fn phase_point_text_round_trips() {
    let (_, pt) = point("adjoint(su2)", 4, 3);
    let text = render_phase_point(&pt);
    assert_eq!(parse_phase_point(&text).unwrap(), pt);
    assert!(parse_phase_point(&text[..text.len() / 2]).is_err());
    assert!(parse_phase_point(&format!("{text}1 2 3\n")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bracket_is_antisymmetric_and_bilinear(
        i in 0..Family::ALL.len(),
        j in 0..Family::ALL.len(),
        seed in 0u64..1000,
        s in -3.0f64..3.0,
    ) {
        let (cm, pt) = point("adjoint(su2)", 4, seed);
        let (a, b) = (Family::ALL[i], Family::ALL[j]);
        let f = smeared(&cm, &pt, a, seed + 1);
        let g = smeared(&cm, &pt, b, seed + 2);
        let h = smeared(&cm, &pt, b, seed + 3);
        let fg = poisson_bracket(&cm, &f, &g, &pt).unwrap();
        let gf = poisson_bracket(&cm, &g, &f, &pt).unwrap();
        prop_assert!((fg + gf).abs() <= 1e-12 * fg.abs().max(1.0));
        // {f, g + s h} = {f, g} + s {f, h}
        let (Functional::Smeared { test: tg, .. }, Functional::Smeared { test: th, .. }) = (&g, &h) else { unreachable!() };
        let mut comb = tg.clone();
        comb.data.iter_mut().zip(&th.data).for_each(|(x, y)| *x += s * y);
        let lhs = poisson_bracket(&cm, &f, &smear(&cm, b, comb).unwrap(), &pt).unwrap();
        let rhs = fg + s * poisson_bracket(&cm, &f, &h, &pt).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn smeared_value_is_linear_in_the_test_field(
        i in 0..Family::ALL.len(),
        seed in 0u64..1000,
        s in -3.0f64..3.0,
    ) {
        let (cm, pt) = point("vector_poincare", 4, seed);
        let fam = Family::ALL[i];
        let m = fam.ncomp(cm.p, cm.q);
        let t1 = smooth_test_field(m, &pt.lattice, seed + 1);
        let t2 = smooth_test_field(m, &pt.lattice, seed + 2);
        let mut comb = t1.clone();
        comb.data.iter_mut().zip(&t2.data).for_each(|(x, y)| *x += s * y);
        let v = |t: Field| evaluate_smeared(&cm, &smear(&cm, fam, t).unwrap(), &pt).unwrap();
        let (v1, v2, vc) = (v(t1), v(t2), v(comb));
        prop_assert!((vc - v1 - s * v2).abs() <= 1e-10 * vc.abs().max(1.0));
    }

    #[test]
    fn gradient_pairing_reproduces_bracket_of_linear_functionals(seed in 0u64..1000) {
        let (cm, pt) = point("abelian(1,2)", 4, seed);
        let f = smeared(&cm, &pt, Family::PhiH, seed);
        let g = smeared(&cm, &pt, Family::PhiCB, seed + 1);
        let gf = functional_gradient(&cm, &f, &pt).unwrap();
        let gg = functional_gradient(&cm, &g, &pt).unwrap();
        prop_assert_eq!(bracket_of_gradients(&pt.lattice, &gf, &gg), poisson_bracket(&cm, &f, &g, &pt).unwrap());
    }
}
