use bfcg_core::dof::{dof_count, dof_report, parse_dof_report, DOF_HEADER};
use proptest::prelude::*;

#[test]
fn poincare_dimensions() {
    let t = dof_count(6, 4).unwrap();
    assert_eq!((t.n_canonical, t.f, t.s, t.n), (100, 70, 60, 0));
    let text = dof_report(&t);
    assert!(text.starts_with(DOF_HEADER));
    assert!(text.lines().any(|l| l.trim() == "n = 0"), "{text}");
}

#[test]
fn bf_theory_has_no_h_columns() {
    let t = dof_count(1, 0).unwrap();
    assert_eq!((t.n_canonical, t.f, t.s, t.n), (10, 7, 6, 0));
    for (name, count) in t.fields.iter().chain(&t.first_class).chain(&t.second_class) {
        let h_type = ["C", "beta", "G", "CB"].iter().any(|k| name == k || name.contains(&format!("({k})")));
        if h_type {
            assert_eq!(*count, 0, "{name}");
        }
    }
}

#[test]
fn zero_dimensional_g_is_rejected() {
    assert!(dof_count(0, 3).is_err());
}

proptest! {
    #[test]
    fn counts_follow_closed_forms(p in 1u64..200, q in 0u64..200) {
        let t = dof_count(p, q).unwrap();
        prop_assert_eq!(t.n_canonical, 10 * (p + q));
        prop_assert_eq!(t.first_class.iter().map(|(_, c)| c).sum::<u64>(), 8 * (p + q));
        prop_assert_eq!(t.f, 7 * (p + q));
        prop_assert_eq!(t.s, 6 * (p + q));
        prop_assert_eq!(t.n, 0);
    }

    #[test]
    fn report_round_trips(p in 1u64..60, q in 0u64..60) {
        let t = dof_count(p, q).unwrap();
        let text = dof_report(&t);
        let back = parse_dof_report(&text).unwrap();
        prop_assert_eq!(dof_report(&back), text);
        prop_assert_eq!(back, t);
    }
}
