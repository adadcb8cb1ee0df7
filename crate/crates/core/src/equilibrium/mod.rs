//! Defection-free pairwise Nash (DFPN) networks: checking, best defections,
//! exhaustive enumeration, symmetric constructions, and reciprocity audits.
//!
//! A network is DFPN when no node strictly gains by severing one of its
//! links, and no unlinked pair can add their link so that both strictly gain,
//! each possibly severing any subset of their own links at the same time.
//!
//! How the two sides of an add are scored is a [`PairScoring`]. By default
//! each side sees the new link and only its own severances, so it judges its
//! partner at the partner's current degree plus one. Under
//! [`PairScoring::Joint`] both sides are scored on the same deviated network,
//! so one side's severances can make it a more attractive partner for the
//! other.
//!
//! All verdicts are exact. Gains are first evaluated in `f64`; any value
//! within [`FILTER_TOL`] of zero is recomputed in rationals.

mod audit;
mod construct;
mod enumerate;
mod joint;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{input, Result};
use crate::model::{utility, Instance, Network, PassTable};
use crate::scalar::{serialize_rational, Rational, Scalar};

pub use audit::{reciprocity_audit, AuditReport, NodeAudit};
pub use construct::{
    blue_link_value, construct_symmetric_equilibrium, smallest_symmetric_population, SymmetricEquilibrium,
};
pub use enumerate::{enumerate_equilibria, EnumerateOptions, Enumeration};

/// Float gains closer to zero than this are settled in exact arithmetic.
pub const FILTER_TOL: f64 = 1e-9;

/// Which network each endpoint of a proposed add is scored on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairScoring {
    /// The new link minus the scored side's own severances.
    #[default]
    Separate,
    /// The new link minus both sides' severances.
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectionKind {
    AddWithSevering,
    UnilateralSever,
}

/// A concrete profitable deviation.
///
/// For an add, `pair` is the missing link and both deltas are strictly
/// positive. For a sever, `pair.0` drops its link to `pair.1`; `delta_i` is
/// the deviator's strictly positive gain and `delta_j` the partner's change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectionWitness {
    pub kind: DefectionKind,
    pub scoring: PairScoring,
    pub pair: (usize, usize),
    pub severed_i: Vec<usize>,
    pub severed_j: Vec<usize>,
    #[serde(serialize_with = "serialize_rational")]
    pub delta_i: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub delta_j: Rational,
}

impl DefectionWitness {
    /// The network `pair.0` (side 0) or `pair.1` (side 1) is scored on.
    pub fn scored_network(&self, net: &Network, side: usize) -> Result<Network> {
        if self.kind == DefectionKind::UnilateralSever || self.scoring == PairScoring::Joint {
            return self.apply(net);
        }
        let (i, j) = self.pair;
        let (a, severed) = if side == 0 { (i, &self.severed_i) } else { (j, &self.severed_j) };
        let mut out = net.clone();
        for &l in severed {
            out.remove_edge(a, l);
        }
        out.add_edge(i, j)?;
        Ok(out)
    }

    /// The network after the whole deviation.
    pub fn apply(&self, net: &Network) -> Result<Network> {
        let (i, j) = self.pair;
        let mut out = net.clone();
        match self.kind {
            DefectionKind::UnilateralSever => {
                out.remove_edge(i, j);
            }
            DefectionKind::AddWithSevering => {
                for &l in &self.severed_i {
                    out.remove_edge(i, l);
                }
                for &l in &self.severed_j {
                    out.remove_edge(j, l);
                }
                out.add_edge(i, j)?;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equilibrium,
    Defection(DefectionWitness),
}

impl Verdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, Verdict::Equilibrium)
    }

    pub fn witness(&self) -> Option<&DefectionWitness> {
        match self {
            Verdict::Equilibrium => None,
            Verdict::Defection(w) => Some(w),
        }
    }
}

/// One endpoint's best response to a proposed link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideOptimum {
    pub severed: Vec<usize>,
    pub delta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddDefection {
    pub pair: (usize, usize),
    pub side_i: SideOptimum,
    pub side_j: SideOptimum,
}

impl AddDefection {
    /// Whether both endpoints strictly gain, violating the no-add condition.
    pub fn is_profitable(&self) -> bool {
        self.side_i.delta.is_positive() && self.side_j.delta.is_positive()
    }
}

/// Decides whether `net` is DFPN under [`PairScoring::Separate`], returning
/// the first defection found (severances in edge order, then adds in pair
/// order).
pub fn is_dfpn(inst: &Instance, net: &Network) -> Result<Verdict> {
    is_dfpn_with(inst, net, PairScoring::Separate)
}

pub fn is_dfpn_with(inst: &Instance, net: &Network, scoring: PairScoring) -> Result<Verdict> {
    inst.check_network(net)?;
    Ok(Checker::new(inst, scoring).check(net))
}

/// Each endpoint's best severed set when adding the missing link `(i, j)`,
/// found by severing the weakest organic neighbors first.
///
/// Under [`PairScoring::Separate`] the add is a defection exactly when both
/// deltas are positive. Under [`PairScoring::Joint`] that is sufficient but
/// not necessary, since some adds pay only when the partner severs too.
pub fn best_defection_for_add(inst: &Instance, net: &Network, i: usize, j: usize) -> Result<AddDefection> {
    check_non_edge(inst, net, i, j)?;
    let checker = Checker::new(inst, PairScoring::Separate);
    let side = |a: usize, b: usize| {
        let order = checker.organic_order(net, a);
        let deltas = checker.prefix_deltas(&checker.exact, net, a, b, &order);
        let m = best_prefix(&deltas);
        SideOptimum { severed: sorted(&order[..m]), delta: deltas[m].clone() }
    };
    Ok(AddDefection { pair: (i, j), side_i: side(i, j), side_j: side(j, i) })
}

/// Same as [`best_defection_for_add`], but tries every subset of each
/// endpoint's organic neighbors and scores it with [`utility`].
pub fn best_defection_for_add_exhaustive(
    inst: &Instance,
    net: &Network,
    i: usize,
    j: usize,
) -> Result<AddDefection> {
    check_non_edge(inst, net, i, j)?;
    let side = |a: usize, b: usize| -> Result<SideOptimum> {
        let organic: Vec<usize> = net.neighbors(a).filter(|&l| !inst.is_recommended(a, l)).collect();
        if organic.len() >= 24 {
            return Err(crate::Error::Resource(format!("node {a} has {} organic neighbors", organic.len())));
        }
        let base: Rational = utility(inst, net, a)?;
        let mut best: Option<SideOptimum> = None;
        for mask in 0u32..(1 << organic.len()) {
            let mut dev = net.clone();
            let severed: Vec<usize> =
                organic.iter().enumerate().filter(|(bit, _)| mask >> bit & 1 == 1).map(|(_, &l)| l).collect();
            for &l in &severed {
                dev.remove_edge(a, l);
            }
            dev.add_edge(a, b)?;
            let delta = utility::<Rational>(inst, &dev, a)? - base.clone();
            let better = match &best {
                None => true,
                Some(cur) => match delta.cmp(&cur.delta) {
                    Ordering::Greater => true,
                    Ordering::Equal => severed.len() < cur.severed.len(),
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some(SideOptimum { severed, delta });
            }
        }
        Ok(best.expect("the empty subset is always scored"))
    };
    Ok(AddDefection { pair: (i, j), side_i: side(i, j)?, side_j: side(j, i)? })
}

fn check_non_edge(inst: &Instance, net: &Network, i: usize, j: usize) -> Result<()> {
    inst.check_network(net)?;
    if i >= inst.n() || j >= inst.n() || i == j {
        return input(format!("({i}, {j}) is not a pair of distinct nodes"));
    }
    if net.has_edge(i, j) {
        return input(format!("({i}, {j}) is already linked"));
    }
    Ok(())
}

fn sorted(nodes: &[usize]) -> Vec<usize> {
    let mut v = nodes.to_vec();
    v.sort_unstable();
    v
}

/// Smallest prefix length achieving the maximum delta.
fn best_prefix(deltas: &[Rational]) -> usize {
    let mut best = 0;
    for (m, d) in deltas.iter().enumerate() {
        if *d > deltas[best] {
            best = m;
        }
    }
    best
}

/// Pass-probability tables in both arithmetic modes plus an exact ordering
/// of every `(class, degree)` pass probability.
pub(crate) struct Checker<'a> {
    pub(crate) inst: &'a Instance,
    scoring: PairScoring,
    pub(crate) float: PassTable<f64>,
    pub(crate) exact: PassTable<Rational>,
    rank: Vec<Vec<usize>>,
}

impl<'a> Checker<'a> {
    pub(crate) fn new(inst: &'a Instance, scoring: PairScoring) -> Self {
        let max_degree = inst.n();
        let exact: PassTable<Rational> = inst.pass_table(max_degree);
        let float = inst.pass_table(max_degree);
        let mut keyed: Vec<(&Rational, usize, usize)> = Vec::new();
        for (c, class) in exact.classes.iter().enumerate() {
            for (d, p) in class.pass.iter().enumerate() {
                keyed.push((p, c, d));
            }
        }
        keyed.sort();
        let mut rank = vec![vec![0; max_degree + 1]; exact.classes.len()];
        let mut r = 0;
        for w in 0..keyed.len() {
            if w > 0 && keyed[w].0 != keyed[w - 1].0 {
                r += 1;
            }
            rank[keyed[w].1][keyed[w].2] = r;
        }
        Self { inst, scoring, float, exact, rank }
    }

    pub(crate) fn check(&self, net: &Network) -> Verdict {
        for (i, j) in net.edges() {
            for (a, b) in [(i, j), (j, i)] {
                if self.sever_profitable(net, a, b) {
                    return Verdict::Defection(DefectionWitness {
                        kind: DefectionKind::UnilateralSever,
                        scoring: self.scoring,
                        pair: (a, b),
                        severed_i: vec![b],
                        severed_j: Vec::new(),
                        delta_i: self.sever_gain(&self.exact, net, a, b),
                        delta_j: self.sever_gain(&self.exact, net, b, a),
                    });
                }
            }
        }
        let n = net.n();
        for i in 0..n {
            for j in i + 1..n {
                if net.has_edge(i, j) {
                    continue;
                }
                if let Some((severed_i, severed_j)) = self.profitable_add(net, i, j) {
                    let mut witness = DefectionWitness {
                        kind: DefectionKind::AddWithSevering,
                        scoring: self.scoring,
                        pair: (i, j),
                        severed_i,
                        severed_j,
                        delta_i: Rational::zero(),
                        delta_j: Rational::zero(),
                    };
                    let delta = |side: usize, v: usize| -> Rational {
                        let after = witness.scored_network(net, side).expect("the pair is unlinked");
                        utility::<Rational>(self.inst, &after, v).expect("sizes match")
                            - utility::<Rational>(self.inst, net, v).expect("sizes match")
                    };
                    let (delta_i, delta_j) = (delta(0, i), delta(1, j));
                    witness.delta_i = delta_i;
                    witness.delta_j = delta_j;
                    return Verdict::Defection(witness);
                }
            }
        }
        Verdict::Equilibrium
    }

    fn organic(&self, a: usize, b: usize) -> bool {
        !self.inst.is_recommended(a, b)
    }

    /// Gain to `a` from dropping its link to `b`.
    pub(crate) fn sever_gain<S: Scalar>(&self, tab: &PassTable<S>, net: &Network, a: usize, b: usize) -> S {
        let mut keep = S::one();
        for l in net.neighbors(a).filter(|&l| l != b) {
            keep = keep * (S::one() - tab.pass(l, net.degree(l)).clone());
        }
        let cost = if self.organic(a, b) { tab.gamma.clone() } else { S::zero() };
        cost - tab.p0(a).clone() * tab.pass(b, net.degree(b)).clone() * keep
    }

    fn sever_profitable(&self, net: &Network, a: usize, b: usize) -> bool {
        let g = self.sever_gain(&self.float, net, a, b);
        if g.abs() > FILTER_TOL {
            return g > 0.0;
        }
        self.sever_gain(&self.exact, net, a, b).is_positive()
    }

    /// Organic neighbors of `a`, weakest pass probability first.
    pub(crate) fn organic_order(&self, net: &Network, a: usize) -> Vec<usize> {
        let mut order: Vec<usize> = net.neighbors(a).filter(|&l| self.organic(a, l)).collect();
        order.sort_by_key(|&l| (self.rank[self.inst.class_of(l)][net.degree(l)], l));
        order
    }

    /// Gain to `a` from linking to `b` after severing the first `m` nodes of
    /// `order`, for every `m`.
    pub(crate) fn prefix_deltas<S: Scalar>(
        &self,
        tab: &PassTable<S>,
        net: &Network,
        a: usize,
        b: usize,
        order: &[usize],
    ) -> Vec<S> {
        let miss = |l: usize| S::one() - tab.pass(l, net.degree(l)).clone();
        let mut recommended = S::one();
        for l in net.neighbors(a).filter(|&l| !self.organic(a, l)) {
            recommended = recommended * miss(l);
        }
        // keep[m] = product over order[m..] of non-pass probabilities.
        let mut keep = vec![S::one(); order.len() + 1];
        for m in (0..order.len()).rev() {
            keep[m] = keep[m + 1].clone() * miss(order[m]);
        }
        let all = recommended.clone() * keep[0].clone();
        let new_miss = S::one() - tab.pass(b, net.degree(b) + 1).clone();
        let link_cost = if self.organic(a, b) { tab.gamma.clone() } else { S::zero() };
        let p0 = tab.p0(a).clone();
        keep.iter()
            .enumerate()
            .map(|(m, k)| {
                p0.clone() * (all.clone() - recommended.clone() * k.clone() * new_miss.clone())
                    + tab.gamma.clone() * S::from_usize(m)
                    - link_cost.clone()
            })
            .collect()
    }

    fn add_side_profitable(&self, net: &Network, a: usize, b: usize) -> bool {
        let order = self.organic_order(net, a);
        let deltas = self.prefix_deltas(&self.float, net, a, b, &order);
        let best = deltas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if best > FILTER_TOL {
            return true;
        }
        if best < -FILTER_TOL {
            return false;
        }
        self.prefix_deltas(&self.exact, net, a, b, &order).iter().any(|d| d.is_positive())
    }

    /// Severed set for one side when its partner severs nothing: nothing if
    /// the bare link already pays, otherwise the best prefix.
    fn witness_side(&self, net: &Network, a: usize, b: usize) -> Vec<usize> {
        let order = self.organic_order(net, a);
        let deltas = self.prefix_deltas(&self.exact, net, a, b, &order);
        let m = if deltas[0].is_positive() { 0 } else { best_prefix(&deltas) };
        sorted(&order[..m])
    }

    /// Severed sets of some profitable add of `(i, j)`.
    ///
    /// Under joint scoring, separate best responses that both profit still
    /// profit together, since a partner's severances only make it a better
    /// neighbor. Otherwise the joint search decides.
    fn profitable_add(&self, net: &Network, i: usize, j: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        if self.add_side_profitable(net, i, j) && self.add_side_profitable(net, j, i) {
            return Some((self.witness_side(net, i, j), self.witness_side(net, j, i)));
        }
        match self.scoring {
            PairScoring::Separate => None,
            PairScoring::Joint => joint::PairSearch::new(self, net, i, j).find(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Group, OpportunityDistribution};
    use crate::scalar::{parse_rational, ratio};

    fn dist(ps: &[&str]) -> OpportunityDistribution {
        OpportunityDistribution::new(ps.iter().map(|p| parse_rational(p).unwrap()).collect()).unwrap()
    }

    /// Three nodes `g`, `m`, `b` with `(g0, m0, b0) = (b2, m2, g2) = (ε, 2ε, 3ε)`
    /// and `γ = 1.5ε²`.
    pub(crate) fn three_type(eps: Rational) -> Instance {
        let e = |c: i64| eps.clone() * ratio(c, 1);
        let mid = ratio(1, 1) - e(4);
        let classes = vec![
            (Group::Green, OpportunityDistribution::new(vec![e(1), mid.clone(), e(3)]).unwrap()),
            (Group::Green, OpportunityDistribution::new(vec![e(2), mid.clone(), e(2)]).unwrap()),
            (Group::Blue, OpportunityDistribution::new(vec![e(3), mid, e(1)]).unwrap()),
        ];
        Instance::new(classes, vec![0, 1, 2], eps.clone() * eps * ratio(3, 2), Network::empty(3)).unwrap()
    }

    #[test]
    fn missing_recommended_link_is_added() {
        let g = dist(&["0.5", "0", "0.5"]);
        let recs = Network::from_edges(2, [(0, 1)]).unwrap();
        let inst = Instance::new(vec![(Group::Green, g)], vec![0, 0], ratio(1, 25), recs).unwrap();
        let verdict = is_dfpn(&inst, &Network::empty(2)).unwrap();
        let w = verdict.witness().unwrap();
        assert_eq!(w.kind, DefectionKind::AddWithSevering);
        assert_eq!(w.pair, (0, 1));
        assert!(w.severed_i.is_empty() && w.severed_j.is_empty());
        // p0·π(1) with nothing to lose: 0.5·0.5.
        assert_eq!(w.delta_i, ratio(1, 4));
    }

    #[test]
    fn empty_pair_of_greens_links_up() {
        // γ = 0.04 < g0(1 − g0 − g1) = 0.25.
        let g = dist(&["0.5", "0", "0.5"]);
        let inst = Instance::new(vec![(Group::Green, g)], vec![0, 0], ratio(1, 25), Network::empty(2)).unwrap();
        let w = is_dfpn(&inst, &Network::empty(2)).unwrap().witness().cloned().unwrap();
        assert_eq!((w.kind, w.pair), (DefectionKind::AddWithSevering, (0, 1)));
        assert_eq!(w.delta_i, ratio(21, 100));
        assert!(is_dfpn(&inst, &Network::from_edges(2, [(0, 1)]).unwrap()).unwrap().is_equilibrium());
    }

    #[test]
    fn three_type_pair_is_not_stable() {
        for eps in [ratio(1, 20), ratio(1, 50)] {
            let inst = three_type(eps);
            let net = Network::from_edges(3, [(0, 1)]).unwrap();
            let w = is_dfpn(&inst, &net).unwrap().witness().cloned().unwrap();
            assert_eq!(w.kind, DefectionKind::AddWithSevering);
            assert_eq!(w.pair, (1, 2));
            let best = best_defection_for_add(&inst, &net, 1, 2).unwrap();
            assert!(best.side_i.severed.is_empty());
            assert!(best.is_profitable());
        }
    }

    #[test]
    fn partner_severance_can_make_an_add_pay() {
        // With m linked to b, g gains from linking m only if m drops b.
        let inst = three_type(ratio(1, 20));
        let net = Network::from_edges(3, [(1, 2)]).unwrap();
        let best = best_defection_for_add(&inst, &net, 0, 1).unwrap();
        assert!(!best.side_i.delta.is_positive());
        assert!(is_dfpn(&inst, &net).unwrap().is_equilibrium());
        let w = is_dfpn_with(&inst, &net, PairScoring::Joint).unwrap().witness().cloned().unwrap();
        assert_eq!((w.pair, w.severed_i.clone(), w.severed_j.clone()), ((0, 1), vec![], vec![2]));
        // g: 0.05·π_m(1) − γ;  m swaps b (π = 0.05) for g (π = 0.15) at equal cost.
        assert_eq!(w.delta_i, ratio(1, 800));
        assert_eq!(w.delta_j, ratio(1, 100));
    }

    #[test]
    fn over_connected_node_severs() {
        // γ = 0.3 caps organic degree at ⌊0.5/0.3⌋ = 1.
        let g = dist(&["0.5", "0", "0.5"]);
        let inst = Instance::new(vec![(Group::Green, g)], vec![0, 0, 0], ratio(3, 10), Network::empty(3)).unwrap();
        let star = Network::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let w = is_dfpn(&inst, &star).unwrap().witness().cloned().unwrap();
        assert_eq!(w.kind, DefectionKind::UnilateralSever);
        assert!(w.delta_i.is_positive());
    }

    #[test]
    fn isolated_endpoint_matches_closed_form() {
        let g = dist(&["0.4", "0.1", "0.3", "0.2"]);
        let inst = Instance::new(vec![(Group::Green, g.clone())], vec![0; 4], ratio(1, 50), Network::empty(4)).unwrap();
        let net = Network::from_edges(4, [(1, 2), (1, 3)]).unwrap();
        let best = best_defection_for_add(&inst, &net, 0, 1).unwrap();
        let expected = g.p0().clone() * g.pass_probability(3) - ratio(1, 50);
        assert_eq!(best.side_i, SideOptimum { severed: vec![], delta: expected });
    }

    #[test]
    fn witness_deltas_match_scored_networks() {
        let inst = three_type(ratio(1, 20));
        for (edges, scoring) in [(vec![(0, 1)], PairScoring::Separate), (vec![(1, 2)], PairScoring::Joint)] {
            let net = Network::from_edges(3, edges).unwrap();
            let w = is_dfpn_with(&inst, &net, scoring).unwrap().witness().cloned().unwrap();
            let (i, j) = w.pair;
            let gain = |side: usize, v: usize| {
                let after = w.scored_network(&net, side).unwrap();
                utility::<Rational>(&inst, &after, v).unwrap() - utility::<Rational>(&inst, &net, v).unwrap()
            };
            assert_eq!(gain(0, i), w.delta_i);
            assert_eq!(gain(1, j), w.delta_j);
        }
    }

    #[test]
    fn rejects_existing_links() {
        let inst = three_type(ratio(1, 20));
        let net = Network::from_edges(3, [(0, 1)]).unwrap();
        assert!(best_defection_for_add(&inst, &net, 0, 1).is_err());
        assert!(best_defection_for_add(&inst, &net, 0, 0).is_err());
        assert!(is_dfpn(&inst, &Network::empty(4)).is_err());
    }
}
