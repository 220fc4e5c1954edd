mod common;

use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(256))]

    #[test]
    fn chain_order_matches_enumeration(seed in any::<u64>()) {
        common::bsgs_matches_enumeration(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn refinement_is_stable(seed in any::<u64>()) {
        common::refinement_is_idempotent(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn zech_logarithms(seed in any::<u64>()) {
        common::zech_identity(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn intertwiners(seed in any::<u64>()) {
        common::intertwiner_is_exact(seed).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn closure_idempotent(seed in any::<u64>()) {
        common::closure_is_idempotent(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn dispatcher_output_verifies(seed in any::<u64>()) {
        common::dispatcher_output_verifies(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn propagated_forms_satisfy_witness(seed in any::<u64>()) {
        common::propagation_witness_holds(seed).map_err(TestCaseError::fail)?;
    }
}
