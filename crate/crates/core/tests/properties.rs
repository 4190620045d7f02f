#[path = "support/props.rs"]
mod props;

use std::sync::OnceLock;

use hsd::{Design, StarterSet};
use proptest::prelude::*;

use props::*;

fn designs() -> &'static [(String, Design)] {
    static D: OnceLock<Vec<(String, Design)>> = OnceLock::new();
    D.get_or_init(small_designs)
}

fn starters() -> &'static [(String, StarterSet)] {
    static S: OnceLock<Vec<(String, StarterSet)>> = OnceLock::new();
    S.get_or_init(step_one_starters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn verify_agrees_with_quasigroup_checks(i in any::<usize>(), m in mutation()) {
        let (_, d) = &designs()[i % designs().len()];
        check_verify_vs_quasigroup(d, &m)?;
    }

    #[test]
    fn census_agrees_with_development(i in any::<usize>(), which in any::<usize>(), pos in 0..4usize, point in any::<u32>()) {
        let (_, s) = &starters()[i % starters().len()];
        check_census_vs_develop(&mutate_starters(s, which, pos, point))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn canonical_form_and_orbit_lengths((b, g, step) in block_and_group()) {
        check_canonical_and_orbit(b, g, step)?;
    }
}
