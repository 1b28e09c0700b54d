use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmet::code::{random_code, rank_support, rank_weight, RankCode};
use rankmet::gf::{Elem, FieldCtx};
use rankmet::linalg::{add_vec, random_full_rank, random_invertible, random_vector, Budget, Level};

fn small_fields() -> Vec<Arc<FieldCtx>> {
    [(2, 1, 2), (2, 1, 3), (3, 1, 2), (5, 1, 2), (2, 1, 4)]
        .iter()
        .map(|&(p, e, m)| Arc::new(FieldCtx::new(p, e, m, None).unwrap()))
        .collect()
}

/// Rank over `F_p` by plain modular elimination on the digit matrix.
fn oracle_rank(ctx: &FieldCtx, v: &[Elem]) -> usize {
    assert_eq!(ctx.e(), 1);
    let p = ctx.p() as i64;
    let mut rows: Vec<Vec<i64>> = (0..ctx.m())
        .map(|j| v.iter().map(|&x| ctx.expand(x)[j].0 as i64).collect())
        .collect();
    let cols = v.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&t| rows[rank][c] * t % p == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x = ((*x - f * y) % p + p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_small_code(rng: &mut ChaCha8Rng) -> RankCode {
    let ctx = small_fields().swap_remove(rng.gen_range(0..5));
    let k = rng.gen_range(1..=2);
    let n = rng.gen_range(k..=5);
    random_code(ctx, n, k, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rank_matches_oracle_and_support_is_subadditive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = small_fields().swap_remove(rng.gen_range(0..5));
        let n = rng.gen_range(1..=6);
        let v = random_vector(&ctx, Level::Ext, n, &mut rng);
        let w = random_vector(&ctx, Level::Ext, n, &mut rng);
        prop_assert_eq!(rank_weight(&ctx, &v), oracle_rank(&ctx, &v));
        let joint = rank_support(&ctx, &v).sum(&ctx, &rank_support(&ctx, &w)).unwrap();
        prop_assert!(joint.contains(&ctx, &rank_support(&ctx, &add_vec(&ctx, &v, &w))).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn weight_distribution_is_isometry_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_small_code(&mut rng);
        let a = random_invertible(c.ctx(), Level::Sub, c.n(), &mut rng);
        let ca = c.apply_isometry(&a).unwrap();
        prop_assert_eq!(
            c.weight_distribution(Budget::default()).unwrap(),
            ca.weight_distribution(Budget::default()).unwrap()
        );
        prop_assert_eq!(c.effective_length(), ca.effective_length());
    }

    #[test]
    fn projective_shortcut_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_small_code(&mut rng);
        let fast = c.weight_distribution(Budget::default()).unwrap();
        prop_assert_eq!(&fast, &c.weight_distribution_exhaustive(Budget::default()).unwrap());
        prop_assert_eq!(fast.total(), num_bigint::BigUint::from(c.ctx().size()).pow(c.k() as u32));
    }

    #[test]
    fn distance_lower_bound_from_support(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_small_code(&mut rng);
        let c = if rng.gen_bool(0.3) { c.zero_augment(1) } else { c };
        let d = c.min_rank_distance(Budget::default()).unwrap() as i64;
        let bound = c.effective_length() as i64 - (c.k() as i64 - 1) * c.m() as i64;
        prop_assert!(d >= bound, "d = {} < {}", d, bound);
        prop_assert_eq!(c.nondegeneracy(Budget::default()).dual_criterion_agrees, Some(true));
        if c.is_nondegenerate() {
            prop_assert!(c.n() <= c.k() * c.m());
            prop_assert_eq!(c.max_rank(Budget::default()).unwrap(), c.n().min(c.m()));
        }
    }

    #[test]
    fn anticodes_have_subfield_bases(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = small_fields().swap_remove(rng.gen_range(0..5));
        let m = ctx.m();
        let n = rng.gen_range(1..=m);
        let k = rng.gen_range(1..=n);
        // k rows over F_q mixed by an invertible matrix over F_{q^m}
        let base = random_full_rank(&ctx, Level::Sub, k, n, &mut rng);
        let mix = random_invertible(&ctx, Level::Ext, k, &mut rng);
        let rows = rankmet::linalg::mat_mul(&ctx, &mix, &base);
        let c = RankCode::new(ctx.clone(), n, rows).unwrap();
        prop_assert_eq!(c.max_rank(Budget::default()).unwrap(), k);
        prop_assert!(c.subfield_generator().is_some());
        let other = random_code(ctx, n, k, &mut rng);
        if other.max_rank(Budget::default()).unwrap() > k {
            prop_assert!(other.subfield_generator().is_none());
        }
    }

    #[test]
    fn generalized_weights_match_definition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = small_fields().swap_remove(rng.gen_range(0..3));
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(k..=(k * ctx.m()).min(5));
        let c = rankmet::code::random_nondegenerate_code(ctx, n, k, &mut rng);
        let ws = c.generalized_rank_weights(Budget::default()).unwrap();
        prop_assert_eq!(ws[0], c.min_rank_distance(Budget::default()).unwrap());
        prop_assert_eq!(*ws.last().unwrap(), n);
        prop_assert!(ws.windows(2).all(|w| w[0] < w[1]));
        for r in 1..=k {
            prop_assert_eq!(ws[r - 1], c.generalized_rank_weight_definitional(r, Budget::default()).unwrap());
        }
    }
}
