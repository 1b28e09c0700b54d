use std::sync::Arc;

use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmet::code::{random_code, random_nondegenerate_code, rank_support, RankCode};
use rankmet::geometry::QSystem;
use rankmet::gf::FieldCtx;
use rankmet::linalg::{projective_points, Budget, Level};
use rankmet::minimal::{
    bounds_ledger, existence_bound, hyperplane_sections_nested, is_minimal, is_minimal_cross_checked,
    search_minimal, verify_witness, Method, Strategy,
};

fn fields() -> Vec<Arc<FieldCtx>> {
    [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2)]
        .iter()
        .map(|&(p, e, m)| Arc::new(FieldCtx::new(p, e, m, None).unwrap()))
        .collect()
}

fn random_small(rng: &mut ChaCha8Rng) -> RankCode {
    let ctx = fields().swap_remove(rng.gen_range(0..4));
    let k = rng.gen_range(1..=2);
    let n = rng.gen_range(k..=5);
    random_code(ctx, n, k, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn methods_agree_and_witnesses_verify(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_small(&mut rng);
        let reports = is_minimal_cross_checked(&c, Budget::default()).unwrap();
        prop_assert_eq!(reports.len(), 3);
        let verdict = reports[0].verdict;
        for r in &reports {
            prop_assert_eq!(r.verdict, verdict);
            if let Some(w) = &r.witness {
                prop_assert!(verify_witness(&c, w));
            }
        }
        let ledger = bounds_ledger(&c, Budget::default()).unwrap();
        prop_assert!(ledger.is_consistent(), "{:?}", ledger.inconsistencies);
        if verdict {
            prop_assert_ne!(ledger.n_ge_k_plus_m_minus_1, Some(false));
            prop_assert!(ledger.wmax_le_n_minus_k_plus_1);
            prop_assert!(ledger.hyperplane_size_ge_q_pow_k_minus_1);
            prop_assert_ne!(ledger.gen_lower_bound_ok, Some(false));
        }
    }
}

#[test]
fn support_inclusion_is_reverse_section_inclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let ctx = fields().swap_remove(rng.gen_range(0..4));
        let k = rng.gen_range(2..=3);
        let n = rng.gen_range(k..=(k * ctx.m()).min(5));
        let c = random_nondegenerate_code(ctx.clone(), n, k, &mut rng);
        let u = QSystem::from_code(&c).unwrap();
        let msgs = projective_points(&ctx, Level::Ext, k, Budget::default()).unwrap();
        let supports: Vec<_> = msgs.iter().map(|m| rank_support(&ctx, &c.encode(m))).collect();
        for (i, a) in msgs.iter().enumerate() {
            for (j, b) in msgs.iter().enumerate() {
                let inclusion = supports[i].contains(&ctx, &supports[j]).unwrap();
                assert_eq!(inclusion, hyperplane_sections_nested(&u, a, b), "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn existence_bound_never_contradicts_exhaustive_search() {
    let mut checked = 0;
    for (q, m, n, k) in [(2, 2, 2, 2), (2, 2, 3, 2), (2, 2, 4, 2), (2, 2, 5, 2), (3, 2, 3, 2), (3, 2, 4, 2), (2, 3, 4, 2), (2, 2, 4, 3)] {
        let bound = existence_bound(q, m, n, k).unwrap();
        let out = search_minimal(q, m, n, k, Strategy::Exhaustive, Budget::default()).unwrap();
        assert!(out.certificate.exhausted || out.code.is_some());
        if bound.is_positive() {
            assert!(out.code.is_some(), "bound {bound} positive but none found at {:?}", (q, m, n, k));
        }
        if let Some(code) = &out.code {
            assert!(is_minimal(code, Method::Pairwise, Budget::default()).unwrap().verdict);
            assert_eq!((code.n(), code.k()), (n, k));
        } else {
            checked += 1;
        }
    }
    assert!(checked > 0);
}
