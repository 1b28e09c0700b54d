use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmet::code::{random_nondegenerate_code, rank_weight, RankCode};
use rankmet::geometry::QSystem;
use rankmet::gf::FieldCtx;
use rankmet::linalg::{projective_points, Budget, Level, Subspace};

fn fields() -> Vec<Arc<FieldCtx>> {
    [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2)]
        .iter()
        .map(|&(p, e, m)| Arc::new(FieldCtx::new(p, e, m, None).unwrap()))
        .collect()
}

fn random_code(rng: &mut ChaCha8Rng, max_n: usize) -> RankCode {
    let ctx = fields().swap_remove(rng.gen_range(0..4));
    let k = rng.gen_range(1..=3);
    let n = rng.gen_range(k..=(k * ctx.m()).min(max_n));
    random_nondegenerate_code(ctx, n, k, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn linear_set_multiplicities_sum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_code(&mut rng, 7);
        let u = QSystem::from_code(&c).unwrap();
        let ls = u.linear_set(Budget::default()).unwrap();
        let q = u.q();
        prop_assert_eq!(ls.total_multiplicity(), (q.pow(u.dim() as u32) - 1) / (q - 1));
        for entry in ls.report() {
            prop_assert_eq!(u.point_weight(&entry.point), entry.weight);
        }
    }

    #[test]
    fn hyperplane_weight_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_code(&mut rng, 7);
        let u = QSystem::from_code(&c).unwrap();
        for v in projective_points(c.ctx(), Level::Ext, c.k(), Budget::default()).unwrap() {
            let dim = u.kernel_intersection_dim(std::slice::from_ref(&v));
            prop_assert_eq!(dim, c.n() - rank_weight(c.ctx(), &c.encode(&v)));
        }
    }

    #[test]
    fn parameters_survive_the_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_code(&mut rng, 7);
        let u = QSystem::from_code(&c).unwrap();
        let back = u.psi();
        prop_assert_eq!((back.n(), back.k()), (c.n(), c.k()));
        prop_assert_eq!(
            back.weight_distribution(Budget::default()).unwrap(),
            c.weight_distribution(Budget::default()).unwrap()
        );
        prop_assert_eq!(QSystem::from_code(&back).unwrap().dim(), u.dim());
    }

    #[test]
    fn weight_ladder_tracks_linearity_index(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_code(&mut rng, 6);
        let u = QSystem::from_code(&c).unwrap();
        prop_assume!(!u.flat().is_full());
        let l = u.linearity_index(Budget::default()).unwrap();
        let d = c.generalized_rank_weights(Budget::default()).unwrap();
        for i in 1..c.k() {
            prop_assert_eq!(d[i] - d[i - 1] == c.m(), i >= c.k() - l, "i = {}, l = {}, d = {:?}", i, l, d);
        }
        let rep = u.linearity_report(Budget::default()).unwrap();
        prop_assert!(rep.agrees && rep.lower_bound_holds);
    }

    #[test]
    fn quotient_by_linear_part(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_code(&mut rng, 7);
        let u = QSystem::from_code(&c).unwrap();
        let t = u.largest_linear_subspace(Budget::default()).unwrap();
        prop_assume!(t.dim() > 0 && t.dim() < u.k());
        let w = u.quotient(&t).unwrap();
        prop_assert_eq!(w.dim(), u.dim() - t.dim() * u.m());
        prop_assert_eq!(w.k(), u.k() - t.dim());
        prop_assert_eq!(w.linearity_index(Budget::default()).unwrap(), 0);
    }

    #[test]
    fn standard_equations_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_code(&mut rng, 6);
        let u = QSystem::from_code(&c).unwrap();
        for r in 1..c.k() {
            prop_assert!(u.standard_equations(r, Budget::default()).unwrap().holds);
        }
    }
}

#[test]
fn linearity_witness_is_extension_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ctx = Arc::new(FieldCtx::new(2, 1, 2, None).unwrap());
    for _ in 0..30 {
        let c = random_nondegenerate_code(ctx.clone(), rng.gen_range(3..=6), 3, &mut rng);
        let u = QSystem::from_code(&c).unwrap();
        let w = u.largest_linear_subspace(Budget::default()).unwrap();
        // the witness and its multiple by the generator both lie in U
        let g = ctx.generator();
        for v in w.basis() {
            assert!(u.contains(v));
            let gv: Vec<_> = v.iter().map(|&x| ctx.mul(g, x)).collect();
            assert!(u.contains(&gv));
        }
        let full = Subspace::full(Level::Ext, 3);
        assert!(full.contains(&ctx, &w).unwrap());
    }
}
