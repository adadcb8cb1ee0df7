//! Shared oracles and generators for the integration tests.
#![allow(dead_code)]

use netform::equilibrium::PairScoring;
use netform::{utility, Group, Instance, Network, OpportunityDistribution, Rational};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// DFPN straight from the definition: every single severance, and every
/// missing link with every pair of severed subsets. Under separate scoring
/// each side sees only its own severances; under joint scoring both see
/// the whole deviation.
pub fn naive_is_dfpn(inst: &Instance, net: &Network, scoring: PairScoring) -> bool {
    let n = inst.n();
    let u = |g: &Network, v: usize| utility::<Rational>(inst, g, v).unwrap();
    for (i, j) in net.edges() {
        let mut cut = net.clone();
        cut.remove_edge(i, j);
        if u(&cut, i) > u(net, i) || u(&cut, j) > u(net, j) {
            return false;
        }
    }
    let deviate = |base: &Network, a: usize, subset: u32, nbrs: &[usize]| {
        let mut dev = base.clone();
        for (bit, &l) in nbrs.iter().enumerate() {
            if subset >> bit & 1 == 1 {
                dev.remove_edge(a, l);
            }
        }
        dev
    };
    for i in 0..n {
        for j in i + 1..n {
            if net.has_edge(i, j) {
                continue;
            }
            let ni: Vec<usize> = net.neighbors(i).collect();
            let nj: Vec<usize> = net.neighbors(j).collect();
            let (ui, uj) = (u(net, i), u(net, j));
            let mut linked = net.clone();
            linked.add_edge(i, j).unwrap();
            match scoring {
                PairScoring::Separate => {
                    let i_gains = (0u32..1 << ni.len()).any(|a| u(&deviate(&linked, i, a, &ni), i) > ui);
                    let j_gains = (0u32..1 << nj.len()).any(|b| u(&deviate(&linked, j, b, &nj), j) > uj);
                    if i_gains && j_gains {
                        return false;
                    }
                }
                PairScoring::Joint => {
                    for a in 0u32..1 << ni.len() {
                        let half = deviate(&linked, i, a, &ni);
                        for b in 0u32..1 << nj.len() {
                            let dev = deviate(&half, j, b, &nj);
                            if u(&dev, i) > ui && u(&dev, j) > uj {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Every DFPN network of `inst` by scanning all edge sets.
pub fn naive_equilibria(inst: &Instance, scoring: PairScoring) -> Vec<Network> {
    let n = inst.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let net = Network::from_edges(n, pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p))
            .unwrap();
        if naive_is_dfpn(inst, &net, scoring) {
            out.push(net);
        }
    }
    out.sort_by_key(Network::edges);
    out
}

/// Random distribution over `0..=support` with probabilities in twentieths.
pub fn random_dist(rng: &mut impl Rng, support: usize) -> OpportunityDistribution {
    loop {
        let mut cuts: Vec<i64> = (0..support).map(|_| rng.gen_range(0..=20)).collect();
        cuts.push(0);
        cuts.push(20);
        cuts.sort_unstable();
        let probs: Vec<Rational> = cuts.windows(2).map(|w| ratio(w[1] - w[0], 20)).collect();
        let dist = OpportunityDistribution::new(probs).unwrap();
        if dist.is_nontrivial() {
            return dist;
        }
    }
}

pub const GAMMAS: [(i64, i64); 6] = [(1, 100), (1, 25), (1, 10), (3, 20), (1, 4), (2, 5)];

/// Random instance on `n` nodes with up to three classes and a random
/// recommendation matching.
pub fn random_instance(rng: &mut impl Rng, n: usize) -> Instance {
    let n_classes = rng.gen_range(1..=3usize.min(n));
    let support = rng.gen_range(2..=3);
    let classes: Vec<(Group, OpportunityDistribution)> = (0..n_classes)
        .map(|c| (if c == 0 { Group::Green } else { Group::Blue }, random_dist(rng, support)))
        .collect();
    let class_of: Vec<usize> = (0..n).map(|v| if v < n_classes { v } else { rng.gen_range(0..n_classes) }).collect();
    let (gn, gd) = *GAMMAS.choose(rng).unwrap();
    let mut recs = Network::empty(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for pair in order.chunks(2) {
        if pair.len() == 2 && rng.gen_bool(0.4) {
            recs.add_edge(pair[0], pair[1]).unwrap();
        }
    }
    Instance::new(classes, class_of, ratio(gn, gd), recs).unwrap()
}

pub fn random_network(rng: &mut impl Rng, n: usize, density: f64) -> Network {
    let mut net = Network::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                net.add_edge(u, v).unwrap();
            }
        }
    }
    net
}
