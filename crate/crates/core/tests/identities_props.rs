use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmet::code::{random_code, random_nondegenerate_code};
use rankmet::geometry::QSystem;
use rankmet::gf::FieldCtx;
use rankmet::identities::{pless_check_all, total_weight_stats};
use rankmet::linalg::Budget;
use rankmet::Error;

fn fields() -> Vec<Arc<FieldCtx>> {
    [(2, 1, 2), (2, 1, 3), (3, 1, 2)]
        .iter()
        .map(|&(p, e, m)| Arc::new(FieldCtx::new(p, e, m, None).unwrap()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn mean_matches_and_variance_respects_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = fields().swap_remove(rng.gen_range(0..3));
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(k..=(k * ctx.m()).min(6));
        let c = random_nondegenerate_code(ctx, n, k, &mut rng);
        let s = total_weight_stats(&c, Budget::default()).unwrap();
        prop_assert!(s.mean_matches);
        prop_assert!(s.bound_consistent, "{:?} n={} k={} dual_d={:?}", s, c.n(), c.k(), c.dual_distance(Budget::default()));
        prop_assert!(s.variance >= s.formula_var_bound);
        let scattered = QSystem::from_code(&c).unwrap().is_scattered(Budget::default()).unwrap();
        prop_assert_eq!(s.variance_attains_bound, scattered);
    }

    #[test]
    fn power_moments_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = fields().swap_remove(rng.gen_range(0..3));
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(k..=4);
        let c = random_code(ctx, n, k, &mut rng);
        match pless_check_all(&c, Budget::default()) {
            Ok(checks) => {
                prop_assert_eq!(checks.len(), n + 1);
                for p in checks {
                    prop_assert!(p.equal, "r = {}: {} vs {}", p.r, p.lhs, p.rhs);
                }
            }
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn degenerate_codes_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = random_nondegenerate_code(fields().swap_remove(1), 3, 2, &mut rng).zero_augment(1);
    assert!(matches!(total_weight_stats(&c, Budget::default()), Err(Error::Degenerate)));
}
