//! Joint search for a profitable add: both endpoints of a missing link pick
//! severed sets, and each is scored on the network with the link added and
//! both sets removed.
//!
//! Neighbors of the pair are grouped into interchangeable kinds (same class,
//! degree, and relation to each endpoint), so a joint move is a count per
//! kind. The counts are searched branch-and-bound: each endpoint's gain is
//! bounded above by letting its partner sever everything still undecided and
//! choosing its own undecided severances optimally.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::model::{Network, PassTable};
use crate::scalar::Scalar;

use super::{Checker, FILTER_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Rel {
    None,
    Organic,
    Recommended,
}

#[derive(Debug, Clone)]
struct Kind {
    members: Vec<usize>,
    rel: [Rel; 2],
    /// `(both, only side 0, only side 1)` severance counts to try.
    options: Vec<[usize; 3]>,
}

/// Numbers a search node needs, in one arithmetic mode.
struct Values<S> {
    p0: [S; 2],
    base: [S; 2],
    /// `miss[a][s]`: chance the partner of side `a` passes nothing when it
    /// has severed `s` links before taking the new one.
    miss: [Vec<S>; 2],
    /// Non-pass probability of a kind's member at its current degree and
    /// after losing one link.
    keep: Vec<S>,
    keep_less: Vec<S>,
    gamma: S,
    link_cost: S,
}

pub(crate) struct PairSearch<'a> {
    ends: [usize; 2],
    kinds: Vec<Kind>,
    float: Values<f64>,
    checker: &'a Checker<'a>,
    net: &'a Network,
}

impl<'a> PairSearch<'a> {
    pub(crate) fn new(checker: &'a Checker<'a>, net: &'a Network, i: usize, j: usize) -> Self {
        let inst = checker.inst;
        let ends = [i, j];
        let rel = |a: usize, l: usize| {
            if !net.has_edge(a, l) {
                Rel::None
            } else if inst.is_recommended(a, l) {
                Rel::Recommended
            } else {
                Rel::Organic
            }
        };
        let mut grouped: BTreeMap<(usize, usize, Rel, Rel), Vec<usize>> = BTreeMap::new();
        let mut touched: Vec<usize> = net.neighbors(i).chain(net.neighbors(j)).collect();
        touched.sort_unstable();
        touched.dedup();
        for l in touched {
            grouped.entry((inst.class_of(l), net.degree(l), rel(i, l), rel(j, l))).or_default().push(l);
        }
        // Kinds touching both endpoints couple the two sides; decide them first.
        let mut kinds: Vec<Kind> = grouped
            .into_iter()
            .map(|((_, _, r0, r1), members)| {
                let m = members.len();
                let mut options = Vec::new();
                match (r0 != Rel::None, r1 != Rel::None) {
                    (true, true) => {
                        for both in 0..=m {
                            for only0 in 0..=m - both {
                                for only1 in 0..=m - both - only0 {
                                    options.push([both, only0, only1]);
                                }
                            }
                        }
                    }
                    (true, false) => options.extend((0..=m).map(|x| [0, x, 0])),
                    _ => options.extend((0..=m).map(|x| [0, 0, x])),
                }
                Kind { members, rel: [r0, r1], options }
            })
            .collect();
        kinds.sort_by_key(|k| !(k.rel[0] != Rel::None && k.rel[1] != Rel::None));
        let float = values(checker, &checker.float, net, ends, &kinds);
        Self { ends, kinds, float, checker, net }
    }

    /// Severed sets of a jointly profitable add, if one exists.
    pub(crate) fn find(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut choices = Vec::with_capacity(self.kinds.len());
        if self.search(&mut choices) {
            Some(self.severed_sets(&choices))
        } else {
            None
        }
    }

    fn search(&self, choices: &mut Vec<[usize; 3]>) -> bool {
        if !self.may_profit(choices) {
            return false;
        }
        let t = choices.len();
        if t == self.kinds.len() {
            return self.both_profit(choices);
        }
        for &opt in &self.kinds[t].options {
            choices.push(opt);
            if self.search(choices) {
                return true;
            }
            choices.pop();
        }
        false
    }

    /// Whether both upper bounds are positive, settling near-zero bounds exactly.
    fn may_profit(&self, choices: &[[usize; 3]]) -> bool {
        let mut exact = None;
        for side in 0..2 {
            let ub = upper_bound(&self.float, &self.kinds, choices, side);
            if ub < -FILTER_TOL {
                return false;
            }
            if ub <= FILTER_TOL {
                let vals = exact.get_or_insert_with(|| self.exact_values());
                if !upper_bound(vals, &self.kinds, choices, side).is_positive() {
                    return false;
                }
            }
        }
        true
    }

    fn both_profit(&self, choices: &[[usize; 3]]) -> bool {
        let mut exact = None;
        for side in 0..2 {
            let g = gain(&self.float, &self.kinds, choices, side);
            if g < -FILTER_TOL {
                return false;
            }
            if g <= FILTER_TOL {
                let vals = exact.get_or_insert_with(|| self.exact_values());
                if !gain(vals, &self.kinds, choices, side).is_positive() {
                    return false;
                }
            }
        }
        true
    }

    fn exact_values(&self) -> Values<crate::scalar::Rational> {
        values(self.checker, &self.checker.exact, self.net, self.ends, &self.kinds)
    }

    fn severed_sets(&self, choices: &[[usize; 3]]) -> (Vec<usize>, Vec<usize>) {
        let (mut s0, mut s1) = (Vec::new(), Vec::new());
        for (kind, &[both, only0, only1]) in self.kinds.iter().zip(choices) {
            let mut it = kind.members.iter().copied();
            for l in it.by_ref().take(both) {
                s0.push(l);
                s1.push(l);
            }
            s0.extend(it.by_ref().take(only0));
            s1.extend(it.by_ref().take(only1));
        }
        s0.sort_unstable();
        s1.sort_unstable();
        (s0, s1)
    }
}

fn values<S: Scalar>(checker: &Checker, tab: &PassTable<S>, net: &Network, ends: [usize; 2], kinds: &[Kind]) -> Values<S> {
    let miss_at = |l: usize, d: usize| S::one() - tab.pass(l, d).clone();
    let base = ends.map(|a| net.neighbors(a).fold(S::one(), |acc, l| acc * miss_at(l, net.degree(l))));
    let miss = [ends[1], ends[0]].map(|b| {
        let d = net.degree(b);
        (0..=d).map(|s| miss_at(b, d - s + 1)).collect()
    });
    let inst = checker.inst;
    Values {
        p0: ends.map(|a| tab.p0(a).clone()),
        base,
        miss,
        keep: kinds.iter().map(|k| miss_at(k.members[0], net.degree(k.members[0]))).collect(),
        keep_less: kinds.iter().map(|k| miss_at(k.members[0], net.degree(k.members[0]).saturating_sub(1))).collect(),
        gamma: tab.gamma.clone(),
        link_cost: if inst.is_recommended(ends[0], ends[1]) { S::zero() } else { tab.gamma.clone() },
    }
}

/// Counts and products for side `a` over the decided kinds.
struct Tally<S> {
    severed: [usize; 2],
    organic_severed: usize,
    kept: S,
}

fn tally<S: Scalar>(vals: &Values<S>, kinds: &[Kind], choices: &[[usize; 3]], a: usize) -> Tally<S> {
    let b = 1 - a;
    let mut severed = [0, 0];
    let mut organic_severed = 0;
    let mut kept = S::one();
    for (t, (kind, &[both, only0, only1])) in kinds.iter().zip(choices).enumerate() {
        let only = [only0, only1];
        for side in 0..2 {
            if kind.rel[side] != Rel::None {
                severed[side] += both + only[side];
            }
        }
        if kind.rel[a] == Rel::None {
            continue;
        }
        if kind.rel[a] == Rel::Organic {
            organic_severed += both + only[a];
        }
        let m = kind.members.len();
        let untouched = m - both - only0 - only1;
        kept = kept * vals.keep[t].powi(untouched) * vals.keep_less[t].powi(only[b]);
    }
    Tally { severed, organic_severed, kept }
}

fn gain<S: Scalar>(vals: &Values<S>, kinds: &[Kind], choices: &[[usize; 3]], a: usize) -> S {
    let t = tally(vals, kinds, choices, a);
    let b = 1 - a;
    vals.p0[a].clone() * (vals.base[a].clone() - vals.miss[a][t.severed[b]].clone() * t.kept)
        + vals.gamma.clone() * S::from_usize(t.organic_severed)
        - vals.link_cost.clone()
}

/// Best gain side `a` could reach over every completion of `choices`.
fn upper_bound<S: Scalar>(vals: &Values<S>, kinds: &[Kind], choices: &[[usize; 3]], a: usize) -> S {
    let b = 1 - a;
    let t = tally(vals, kinds, choices, a);
    let mut partner_severed = t.severed[b];
    let mut kept = t.kept;
    let mut organic: Vec<S> = Vec::new();
    for (idx, kind) in kinds.iter().enumerate().skip(choices.len()) {
        let m = kind.members.len();
        if kind.rel[b] != Rel::None {
            partner_severed += m;
        }
        if kind.rel[a] == Rel::None {
            continue;
        }
        let factor = if kind.rel[b] != Rel::None { &vals.keep_less[idx] } else { &vals.keep[idx] };
        if kind.rel[a] == Rel::Organic {
            organic.extend(std::iter::repeat_n(factor.clone(), m));
        } else {
            kept = kept * factor.powi(m);
        }
    }
    // Sever the least useful organic links first: those most likely to pass nothing.
    organic.sort_by(|x, y| y.partial_cmp(x).expect("probabilities are comparable"));
    let mut rest = vec![S::one(); organic.len() + 1];
    for m in (0..organic.len()).rev() {
        rest[m] = rest[m + 1].clone() * organic[m].clone();
    }
    let miss = vals.miss[a][partner_severed].clone();
    let mut best: Option<S> = None;
    for (m, r) in rest.into_iter().enumerate() {
        let g = vals.p0[a].clone() * (vals.base[a].clone() - miss.clone() * kept.clone() * r)
            + vals.gamma.clone() * S::from_usize(t.organic_severed + m)
            - vals.link_cost.clone();
        if best.as_ref().is_none_or(|cur| g > *cur) {
            best = Some(g);
        }
    }
    best.expect("at least the empty prefix")
}
