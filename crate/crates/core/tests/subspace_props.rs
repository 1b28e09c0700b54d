use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmet::gf::FieldCtx;
use rankmet::linalg::{
    enumerate_subspaces, gaussian_binomial, random_vector, Budget, Level, Matrix, Subspace,
};

fn random_subspace(ctx: &FieldCtx, level: Level, n: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let count = rng.gen_range(0..=n + 1);
    let rows: Matrix = (0..count).map(|_| random_vector(ctx, level, n, rng)).collect();
    Subspace::span(ctx, level, n, &rows).unwrap()
}

fn contexts() -> Vec<(FieldCtx, Level)> {
    vec![
        (FieldCtx::new(2, 1, 2, None).unwrap(), Level::Sub),
        (FieldCtx::new(2, 1, 2, None).unwrap(), Level::Ext),
        (FieldCtx::new(3, 1, 2, None).unwrap(), Level::Ext),
        (FieldCtx::new(2, 2, 2, None).unwrap(), Level::Sub),
        (FieldCtx::new(5, 1, 1, None).unwrap(), Level::Sub),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonical_form_and_duality(i in 0usize..5, n in 1usize..7, seed in any::<u64>()) {
        let (ctx, level) = contexts().swap_remove(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_subspace(&ctx, level, n, &mut rng);
        let again = Subspace::span(&ctx, level, n, s.basis()).unwrap();
        prop_assert_eq!(&again, &s);
        let perp = s.orthogonal(&ctx);
        prop_assert_eq!(s.dim() + perp.dim(), n);
        prop_assert_eq!(perp.orthogonal(&ctx), s.clone());
        for u in s.basis() {
            for v in perp.basis() {
                prop_assert!(rankmet::linalg::dot(&ctx, u, v).is_zero());
            }
        }
    }

    #[test]
    fn sum_and_intersection_dimensions(i in 0usize..5, n in 1usize..7, seed in any::<u64>()) {
        let (ctx, level) = contexts().swap_remove(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_subspace(&ctx, level, n, &mut rng);
        let b = random_subspace(&ctx, level, n, &mut rng);
        let sum = a.sum(&ctx, &b).unwrap();
        let meet = a.intersection(&ctx, &b).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(a.contains(&ctx, &meet).unwrap() && b.contains(&ctx, &meet).unwrap());
        prop_assert!(sum.contains(&ctx, &a).unwrap() && sum.contains(&ctx, &b).unwrap());
    }
}

#[test]
fn enumeration_matches_gaussian_binomial() {
    let fields = [
        FieldCtx::new(2, 1, 1, None).unwrap(),
        FieldCtx::new(3, 1, 1, None).unwrap(),
        FieldCtx::new(2, 1, 2, None).unwrap(),
        FieldCtx::new(5, 1, 1, None).unwrap(),
        FieldCtx::new(7, 1, 1, None).unwrap(),
        FieldCtx::new(2, 1, 3, None).unwrap(),
    ];
    let mut cases = 0;
    for ctx in &fields {
        let order = ctx.size() as u64;
        for n in 0..=8usize {
            for t in 0..=n {
                let count = gaussian_binomial(n as u64, t as u64, order).unwrap();
                if count > BigUint::from(100_000u32) {
                    continue;
                }
                let all: Vec<Subspace> = enumerate_subspaces(ctx, Level::Ext, n, t, Budget::default())
                    .unwrap()
                    .collect();
                assert_eq!(BigUint::from(all.len()), count, "Q={order} N={n} t={t}");
                let distinct: HashSet<&Subspace> = all.iter().collect();
                assert_eq!(distinct.len(), all.len(), "duplicates for Q={order} N={n} t={t}");
                assert!(all.iter().all(|s| s.dim() == t));
                cases += 1;
            }
        }
    }
    assert!(cases > 100);
}
