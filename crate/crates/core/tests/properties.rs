mod common;

use common::{random_dist, random_instance, random_network, ratio};
use netform::equilibrium::{best_defection_for_add, best_defection_for_add_exhaustive};
use netform::harness::{format_sig, InstanceFile};
use netform::recsets::{construct_recommendations, validate_recommendations};
use netform::scalar::{int, rational_to_f64};
use netform::{utility, Error, OpportunityDistribution, ParamPoint, Population, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn two_point(n: i64, d: i64) -> OpportunityDistribution {
    OpportunityDistribution::two_point(ratio(n, d)).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mu_grows_and_pass_probability_shrinks(seed in any::<u64>(), support in 2usize..6) {
        let dist = random_dist(&mut rng(seed), support);
        for d in 0..12 {
            prop_assert!(dist.mu(d + 1) >= dist.mu(d));
            prop_assert!(dist.mu(d) <= int(d));
            let pass = dist.pass_probability(d);
            prop_assert!(pass >= Rational::zero() && pass <= Rational::one());
            if d >= 1 {
                prop_assert!(dist.pass_probability(d + 1) <= pass);
            }
        }
    }

    #[test]
    fn utility_stays_between_exogenous_floor_and_one(seed in any::<u64>(), n in 2usize..7, density in 0.0f64..1.0) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n);
        let net = random_network(&mut r, n, density);
        for i in 0..n {
            let u: Rational = utility(&inst, &net, i).unwrap();
            let organic = net.neighbors(i).filter(|&j| !inst.is_recommended(i, j)).count();
            let cost = inst.gamma().clone() * int(organic);
            let p0 = inst.dist(i).p0().clone();
            prop_assert!(u >= Rational::one() - p0 - cost.clone());
            prop_assert!(u <= Rational::one() - cost);
        }
    }

    #[test]
    fn float_utility_tracks_exact(seed in any::<u64>(), n in 2usize..7, density in 0.0f64..1.0) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n);
        let net = random_network(&mut r, n, density);
        for i in 0..n {
            let exact: Rational = utility(&inst, &net, i).unwrap();
            let float: f64 = utility(&inst, &net, i).unwrap();
            prop_assert!((rational_to_f64(&exact) - float).abs() < 1e-9);
        }
    }

    #[test]
    fn sorted_prefix_matches_every_subset(seed in any::<u64>(), density in 0.2f64..0.9) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, 6);
        let net = random_network(&mut r, 6, density);
        for i in 0..6 {
            for j in i + 1..6 {
                if net.has_edge(i, j) {
                    continue;
                }
                let fast = best_defection_for_add(&inst, &net, i, j).unwrap();
                let slow = best_defection_for_add_exhaustive(&inst, &net, i, j).unwrap();
                prop_assert_eq!(&fast.side_i.delta, &slow.side_i.delta);
                prop_assert_eq!(&fast.side_j.delta, &slow.side_j.delta);
                prop_assert_eq!(fast.is_profitable(), slow.is_profitable());
            }
        }
    }

    #[test]
    fn constructed_recommendations_validate(
        ng in 1usize..12,
        nb in 1usize..12,
        k in 0usize..4,
        share in 0usize..4,
    ) {
        let share = share.min(k);
        let rho = if k == 0 { Rational::zero() } else { ratio(share as i64, k as i64) };
        let pop = Population::new(ng, nb, two_point(1, 2), two_point(9, 10)).unwrap();
        let params = ParamPoint::new(ratio(1, 25), k, rho).unwrap();
        match construct_recommendations(&pop, &params) {
            Ok(recs) => prop_assert!(validate_recommendations(&recs, &pop, &params).is_empty()),
            Err(Error::Feasibility(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), ng in 1usize..6, nb in 1usize..6, density in 0.0f64..1.0) {
        let mut r = rng(seed);
        let g0 = r.gen_range(1..10);
        let pop = Population::new(ng, nb, two_point(g0, 20), two_point(g0 + r.gen_range(1..10), 20)).unwrap();
        let gamma = ratio(r.gen_range(1..40), 100);
        let params = ParamPoint::new(gamma, 0, Rational::zero()).unwrap();
        let network = Some(random_network(&mut r, ng + nb, density));
        let file = InstanceFile { population: pop, params, recs: None, network };
        prop_assert_eq!(InstanceFile::parse(&file.to_text()).unwrap(), file);
    }

    #[test]
    fn twelve_digit_text_reads_back(x in -1e6f64..1e6) {
        let back: f64 = format_sig(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
    }
}
