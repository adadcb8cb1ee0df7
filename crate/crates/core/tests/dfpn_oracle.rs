mod common;

use common::{naive_equilibria, naive_is_dfpn, random_instance, random_network};
use netform::equilibrium::{enumerate_equilibria, is_dfpn_with, DefectionKind, EnumerateOptions, PairScoring};
use netform::{utility, Rational};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCORINGS: [PairScoring; 2] = [PairScoring::Separate, PairScoring::Joint];

#[test]
fn checker_matches_definition_on_random_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut stable = [0, 0];
    for _ in 0..600 {
        let n = rng.gen_range(2..=6);
        let inst = random_instance(&mut rng, n);
        let density = rng.gen_range(0.1..0.9);
        let net = random_network(&mut rng, n, density);
        for (s, scoring) in SCORINGS.into_iter().enumerate() {
            let verdict = is_dfpn_with(&inst, &net, scoring).unwrap();
            assert_eq!(verdict.is_equilibrium(), naive_is_dfpn(&inst, &net, scoring), "{scoring:?} {inst:?} {net}");
            let Some(w) = verdict.witness() else {
                stable[s] += 1;
                continue;
            };
            let (i, j) = w.pair;
            let gain = |side: usize, v: usize| {
                let after = w.scored_network(&net, side).unwrap();
                utility::<Rational>(&inst, &after, v).unwrap() - utility::<Rational>(&inst, &net, v).unwrap()
            };
            assert_eq!(gain(0, i), w.delta_i);
            assert_eq!(gain(1, j), w.delta_j);
            assert!(w.delta_i.is_positive(), "{inst:?} {net} {w:?}");
            if w.kind == DefectionKind::AddWithSevering {
                assert!(w.delta_j.is_positive(), "{inst:?} {net} {w:?}");
            }
        }
    }
    assert!(stable.iter().all(|&s| s > 0), "{stable:?}");
}

#[test]
fn enumeration_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nonempty = 0;
    for _ in 0..40 {
        let n = rng.gen_range(2..=5);
        let inst = random_instance(&mut rng, n);
        for scoring in SCORINGS {
            let expected = naive_equilibria(&inst, scoring);
            for canonicalize in [false, true] {
                let opts = EnumerateOptions { canonicalize, scoring, ..Default::default() };
                let found = enumerate_equilibria(&inst, &opts).unwrap();
                assert_eq!(found.equilibria, expected, "{scoring:?} {inst:?}");
            }
            nonempty += usize::from(!expected.is_empty());
        }
    }
    assert!(nonempty > 20, "{nonempty}");
}
