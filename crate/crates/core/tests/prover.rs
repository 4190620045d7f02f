use hsd::prover::{existence_table, prove, prove_type, ProveOptions, Rule, Verdict};
use hsd::{is_feasible, verify_design};
use proptest::prelude::*;

#[test]
fn infeasible_pairs_never_exist() {
    for n in 0..=100 {
        for u in 0..=100 {
            if !is_feasible(n, u).feasible {
                assert!(matches!(prove(n, u, &ProveOptions::default()), Verdict::Infeasible(_)), "({n}, {u})");
            }
        }
    }
}

#[test]
fn worked_cells() {
    let v = prove(12, 4, &ProveOptions::materialize());
    let r = v.recipe().unwrap();
    assert_eq!(r.rule, Rule::FillA);
    assert_eq!(r.summary(), "R-FILL-A(h=3 s=3 v=3 w=1)[R-CAT(catalog C1/9^4 1^1), R-CAT(catalog derived/3^4)]");
    assert!(verify_design(v.design().unwrap()).passed());

    let v = prove(13, 16, &ProveOptions::materialize());
    assert_eq!(v.recipe().unwrap().summary(), "R-CAT(catalog L3.16/3^13 16^1)");
    assert_eq!(v.design().unwrap().block_count() as u64, is_feasible(13, 16).expected_blocks.unwrap());

    assert_eq!(prove(9, 1, &ProveOptions::default()).label(), "INFEASIBLE");
    assert_eq!(prove(29, 16, &ProveOptions::default()).label(), "UNKNOWN_HERE");
    assert_eq!(prove(4, 4, &ProveOptions::default()).label(), "EXISTS");
}

#[test]
fn row_six_is_infeasible() {
    let t = existence_table(6, 15, &ProveOptions::default());
    assert!(t.cells.iter().filter(|c| c.n == 6).all(|c| c.verdict.label() == "INFEASIBLE"));
}

#[test]
fn recipe_tree_renders_one_node_per_line() {
    let v = prove(21, 8, &ProveOptions::default());
    let r = v.recipe().unwrap();
    let text = r.to_string();
    assert_eq!(text.lines().count(), r.size());
    assert!(text.starts_with("R-FILL-B 3^21 8^1: h=3 s=5 t=1 v=0 w=8\n  R-TDW "));
}

#[test]
fn large_targets_need_the_flag() {
    let v = prove(88, 125, &ProveOptions::default());
    assert_eq!(v.label(), "UNKNOWN_HERE");
    let v = prove(88, 125, &ProveOptions { large: true, ..Default::default() });
    assert_eq!(v.recipe().unwrap().summary().split('[').next(), Some("R-FILL-A(h=3 s=8 v=5 w=120)"));
}

#[test]
fn fsols_gap_is_reported() {
    // HSD(12^5 4^1) would come from an FSOLS(3^5 1^1)
    let v = prove_type(&"12^5 4^1".parse().unwrap(), &ProveOptions::default());
    match v {
        Verdict::Unknown { frontier, .. } => assert!(frontier.iter().any(|f| f.contains("R-FSOLS")), "{frontier:?}"),
        other => panic!("{other}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn materialized_cells_are_certified_and_deterministic(n in 4u64..=24, u in 0u64..=20) {
        let plan = prove(n, u, &ProveOptions::default());
        prop_assert_eq!(&plan, &prove(n, u, &ProveOptions::default()));
        if !is_feasible(n, u).feasible {
            prop_assert_eq!(plan.label(), "INFEASIBLE");
        }
        if let Verdict::Exists { recipe, .. } = &plan {
            let v = prove(n, u, &ProveOptions::materialize());
            prop_assert_eq!(v.recipe(), Some(recipe));
            let d = v.design().unwrap();
            prop_assert!(verify_design(d).passed());
            prop_assert_eq!(d.block_count() as u64, is_feasible(n, u).expected_blocks.unwrap());
        }
    }
}
