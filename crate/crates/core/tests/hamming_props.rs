use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmet::code::{random_code, random_nondegenerate_code, RankCode};
use rankmet::gf::FieldCtx;
use rankmet::hamming::{associated_code, associated_weight, verify_weight_correspondence, HammingCode};
use rankmet::linalg::Budget;
use rankmet::minimal::{is_minimal, Method};

fn fields() -> Vec<Arc<FieldCtx>> {
    [(2, 1, 2), (2, 1, 3), (3, 1, 2)]
        .iter()
        .map(|&(p, e, m)| Arc::new(FieldCtx::new(p, e, m, None).unwrap()))
        .collect()
}

fn random_nondegenerate(rng: &mut ChaCha8Rng) -> RankCode {
    let ctx = fields().swap_remove(rng.gen_range(0..3));
    let k = rng.gen_range(1..=2);
    let n = rng.gen_range(k..=(k * ctx.m()).min(5));
    random_nondegenerate_code(ctx, n, k, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn associated_code_carries_the_weights(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_nondegenerate(&mut rng);
        let h = associated_code(&c, Budget::default()).unwrap();
        let q = c.q();
        prop_assert_eq!(h.n() as u64, (q.pow(c.n() as u32) - 1) / (q - 1));
        prop_assert_eq!(h.k(), c.k());
        prop_assert!(verify_weight_correspondence(&c, Budget::default()).unwrap().holds);
        prop_assert!(h.total_weight(Budget::default()).unwrap().holds);
        let d = c.min_rank_distance(Budget::default()).unwrap();
        prop_assert_eq!(h.min_distance(Budget::default()).unwrap() as u64, associated_weight(q, c.n(), d));
        for (r, &dr) in c.generalized_rank_weights(Budget::default()).unwrap().iter().enumerate() {
            prop_assert_eq!(
                h.generalized_weight(r + 1, Budget::default()).unwrap() as u64,
                associated_weight(q, c.n(), dr)
            );
        }
    }
}

#[test]
fn associated_minimality_matches_rank_minimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..30 {
        let ctx = fields().swap_remove(rng.gen_range(0..3));
        let n = rng.gen_range(2..=(2 * ctx.m()).min(5));
        let c = random_nondegenerate_code(ctx, n, 2, &mut rng);
        let rank_min = is_minimal(&c, Method::Cutting, Budget::default()).unwrap().verdict;
        let h = associated_code(&c, Budget::default()).unwrap();
        assert_eq!(h.is_minimal(Budget::default()).unwrap(), rank_min);
        if rank_min { yes += 1 } else { no += 1 }
    }
    assert!(yes > 0 && no > 0, "sample hit only one side: {yes} minimal, {no} not");
}

#[test]
fn raw_hamming_minimal_implies_rank_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut hamming_minimal = 0;
    for _ in 0..300 {
        let ctx = fields().swap_remove(rng.gen_range(0..3));
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(k..=6);
        let c = random_code(ctx, n, k, &mut rng);
        if HammingCode::from_rank_code(&c).is_minimal(Budget::default()).unwrap() {
            hamming_minimal += 1;
            assert!(is_minimal(&c, Method::Cutting, Budget::default()).unwrap().verdict);
        }
    }
    assert!(hamming_minimal > 0);
}
