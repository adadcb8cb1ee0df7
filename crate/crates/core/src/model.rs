//! Primitive game data: opportunity distributions, populations, policy
//! parameters, networks, and the expected-utility function with the
//! population-level metrics built on it.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::scalar::{format_rational, int, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Green,
    Blue,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Green => "green",
            Group::Blue => "blue",
        })
    }
}

/// Probability of receiving `ℓ` exogenous opportunities, for `ℓ = 0..=C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpportunityDistribution {
    probs: Vec<Rational>,
}

impl OpportunityDistribution {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return input("opportunity distribution needs at least one entry");
        }
        for (l, p) in probs.iter().enumerate() {
            if p.is_negative() || *p > Rational::one() {
                return input(format!("probability of {l} opportunities is outside [0, 1]"));
            }
        }
        let total: Rational = probs.iter().cloned().sum();
        if !total.is_one() {
            return input(format!(
                "opportunity probabilities sum to {}, not 1",
                format_rational(&total)
            ));
        }
        Ok(Self { probs })
    }

    /// Mass only on zero and two opportunities: `(p0, 0, 1 - p0)`.
    pub fn two_point(p0: Rational) -> Result<Self> {
        let rest = Rational::one() - p0.clone();
        Self::new(vec![p0, Rational::zero(), rest])
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Largest opportunity count with an entry (`C`).
    pub fn max_support(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn p(&self, l: usize) -> Rational {
        self.probs.get(l).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn p0(&self) -> &Rational {
        &self.probs[0]
    }

    /// `Σ_{ℓ ≥ m} p_ℓ`.
    pub fn tail(&self, m: usize) -> Rational {
        self.probs.iter().skip(m).cloned().sum()
    }

    /// Expected number of opportunities passed on by a holder of degree `d`:
    /// `Σ_{ℓ≥1} min(ℓ−1, d)·p_ℓ`.
    pub fn mu(&self, d: usize) -> Rational {
        self.probs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(l, p)| int((l - 1).min(d)) * p)
            .sum()
    }

    /// Expected surplus at unbounded degree, `Σ_{ℓ≥1} (ℓ−1)·p_ℓ`.
    pub fn mu_infinity(&self) -> Rational {
        self.mu(self.max_support())
    }

    /// Chance that a holder of degree `d` passes one particular neighbor an
    /// opportunity, `μ(d)/d`. At `d = 0` this is the `d → 0⁺` limit, the
    /// chance of holding any surplus.
    pub fn pass_probability(&self, d: usize) -> Rational {
        if d == 0 {
            self.tail(2)
        } else {
            self.mu(d) / int(d)
        }
    }

    /// Whether extra opportunities ever arise (`μ(∞) > 0`).
    pub fn is_nontrivial(&self) -> bool {
        self.mu_infinity().is_positive()
    }

    /// First-order stochastic dominance, strict for at least one tail.
    pub fn strictly_dominates(&self, other: &Self) -> bool {
        let len = self.probs.len().max(other.probs.len());
        let mut strict = false;
        for m in 0..len {
            let (a, b) = (self.tail(m), other.tail(m));
            if a < b {
                return false;
            }
            strict |= a > b;
        }
        strict
    }
}

impl fmt::Display for OpportunityDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(format_rational).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Two groups; nodes `0..n_green` are green, the rest blue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    pub n_green: usize,
    pub n_blue: usize,
    pub green: OpportunityDistribution,
    pub blue: OpportunityDistribution,
}

impl Population {
    pub fn new(
        n_green: usize,
        n_blue: usize,
        green: OpportunityDistribution,
        blue: OpportunityDistribution,
    ) -> Result<Self> {
        if n_green == 0 || n_blue == 0 {
            return input("both groups must be non-empty");
        }
        if !green.is_nontrivial() || !blue.is_nontrivial() {
            return input("each group must pass on surplus opportunities with positive probability");
        }
        if !green.strictly_dominates(&blue) {
            return input("green distribution must strictly stochastically dominate blue");
        }
        Ok(Self { n_green, n_blue, green, blue })
    }

    pub fn n(&self) -> usize {
        self.n_green + self.n_blue
    }

    pub fn group_of(&self, node: usize) -> Group {
        if node < self.n_green {
            Group::Green
        } else {
            Group::Blue
        }
    }

    pub fn dist(&self, group: Group) -> &OpportunityDistribution {
        match group {
            Group::Green => &self.green,
            Group::Blue => &self.blue,
        }
    }

    pub fn size(&self, group: Group) -> usize {
        match group {
            Group::Green => self.n_green,
            Group::Blue => self.n_blue,
        }
    }

    pub fn nodes(&self, group: Group) -> std::ops::Range<usize> {
        match group {
            Group::Green => 0..self.n_green,
            Group::Blue => self.n_green..self.n(),
        }
    }

    /// `UR(∅) = (1 − g₀)/(1 − b₀)`.
    pub fn exogenous_utility_ratio(&self) -> Result<Rational> {
        let denom = Rational::one() - self.blue.p0().clone();
        if !denom.is_positive() {
            return Err(Error::DegenerateDenominator("blue group never receives an opportunity".into()));
        }
        Ok((Rational::one() - self.green.p0().clone()) / denom)
    }

    /// `Σ_i (1 − p_{i0})`.
    pub fn welfare_exogenous(&self) -> Rational {
        int(self.n_green) * (Rational::one() - self.green.p0().clone())
            + int(self.n_blue) * (Rational::one() - self.blue.p0().clone())
    }
}

/// Edge cost `γ`, recommendations per node `k`, and blue cross-group share `ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoint {
    pub gamma: Rational,
    pub k: usize,
    pub rho: Rational,
}

impl ParamPoint {
    pub fn new(gamma: Rational, k: usize, rho: Rational) -> Result<Self> {
        if !gamma.is_positive() {
            return input("edge cost must be positive");
        }
        if rho.is_negative() || rho > Rational::one() {
            return input("cross-group share must lie in [0, 1]");
        }
        if k == 0 && !rho.is_zero() {
            return input("cross-group share must be 0 when k = 0");
        }
        if !(rho.clone() * int(k)).is_integer() {
            return input("cross-group share must be a multiple of 1/k");
        }
        Ok(Self { gamma, k, rho })
    }

    /// Cross-group recommendations held by each blue node, `ρk`.
    pub fn blue_cross(&self) -> usize {
        crate::scalar::floor_to_usize(&(self.rho.clone() * int(self.k))).unwrap_or(0)
    }

    /// `σ = ρ|B|/|G|`.
    pub fn sigma(&self, pop: &Population) -> Rational {
        self.rho.clone() * int(pop.n_blue) / int(pop.n_green)
    }

    /// Cross-group recommendations held by each green node, `σk`, when integral.
    pub fn green_cross(&self, pop: &Population) -> Option<usize> {
        let c = self.sigma(pop) * int(self.k);
        if c.is_integer() {
            crate::scalar::floor_to_usize(&c)
        } else {
            None
        }
    }

    /// `⌊1/γ⌋ + k`.
    pub fn degree_cap(&self) -> usize {
        organic_cap(&Rational::one(), &self.gamma) + self.k
    }
}

/// Largest organic degree compatible with no profitable single severance for
/// a node with `p0`: `⌊p0/γ⌋`.
pub(crate) fn organic_cap(p0: &Rational, gamma: &Rational) -> usize {
    crate::scalar::floor_to_usize(&(p0.clone() / gamma.clone())).unwrap_or(usize::MAX)
}

/// Undirected simple graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Network {
    adj: Vec<BTreeSet<usize>>,
}

impl Network {
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut net = Self::empty(n);
        for (u, v) in edges {
            net.add_edge(u, v)?;
        }
        Ok(net)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Inserts `(u, v)`; returns whether it was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        if u >= n || v >= n {
            return input(format!("edge ({u}, {v}) has an endpoint outside 0..{n}"));
        }
        if u == v {
            return input(format!("self-loop at node {u}"));
        }
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        let had = self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        had
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(&v))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn is_subgraph_of(&self, other: &Network) -> bool {
        self.n() == other.n() && self.edges().iter().all(|&(u, v)| other.has_edge(u, v))
    }

    pub fn union(&self, other: &Network) -> Result<Network> {
        if self.n() != other.n() {
            return input("networks have different node counts");
        }
        let mut out = self.clone();
        for (u, v) in other.edges() {
            out.add_edge(u, v)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges().iter().map(|(u, v)| format!("({u},{v})")).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// Node-level view of a game: each node's group and distribution, the edge
/// cost, and the recommended edge set `Q`.
///
/// Nodes sharing a class are interchangeable. A [`Population`] yields two
/// classes; hand-built instances may use more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    classes: Vec<(Group, OpportunityDistribution)>,
    class_of: Vec<usize>,
    gamma: Rational,
    recs: Network,
}

impl Instance {
    pub fn new(
        classes: Vec<(Group, OpportunityDistribution)>,
        class_of: Vec<usize>,
        gamma: Rational,
        recs: Network,
    ) -> Result<Self> {
        if !gamma.is_positive() {
            return input("edge cost must be positive");
        }
        if let Some(&c) = class_of.iter().find(|&&c| c >= classes.len()) {
            return input(format!("class index {c} out of range"));
        }
        if recs.n() != class_of.len() {
            return input("recommendation set and node list have different sizes");
        }
        Ok(Self { classes, class_of, gamma, recs })
    }

    pub fn from_population(pop: &Population, gamma: Rational, recs: Network) -> Result<Self> {
        let class_of = (0..pop.n()).map(|i| usize::from(pop.group_of(i) == Group::Blue)).collect();
        Self::new(
            vec![(Group::Green, pop.green.clone()), (Group::Blue, pop.blue.clone())],
            class_of,
            gamma,
            recs,
        )
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn recs(&self) -> &Network {
        &self.recs
    }

    pub fn classes(&self) -> &[(Group, OpportunityDistribution)] {
        &self.classes
    }

    pub fn class_of(&self, node: usize) -> usize {
        self.class_of[node]
    }

    pub fn group(&self, node: usize) -> Group {
        self.classes[self.class_of[node]].0
    }

    pub fn dist(&self, node: usize) -> &OpportunityDistribution {
        &self.classes[self.class_of[node]].1
    }

    pub fn is_recommended(&self, u: usize, v: usize) -> bool {
        self.recs.has_edge(u, v)
    }

    /// Largest number of recommendations held by any node.
    pub fn max_recs(&self) -> usize {
        self.recs.max_degree()
    }

    /// `⌊1/γ⌋ + max_i |Q_i|`.
    pub fn degree_cap(&self) -> usize {
        organic_cap(&Rational::one(), &self.gamma) + self.max_recs()
    }

    pub fn with_recs(&self, recs: Network) -> Result<Self> {
        Self::new(self.classes.clone(), self.class_of.clone(), self.gamma.clone(), recs)
    }

    pub fn with_gamma(&self, gamma: Rational) -> Result<Self> {
        Self::new(self.classes.clone(), self.class_of.clone(), gamma, self.recs.clone())
    }

    /// Per-class `p0` and pass probabilities up to degree `max_degree`.
    pub fn pass_table<S: Scalar>(&self, max_degree: usize) -> PassTable<S> {
        let classes = self
            .classes
            .iter()
            .map(|(_, dist)| ClassTable {
                p0: S::from_rational(dist.p0()),
                pass: (0..=max_degree).map(|d| S::from_rational(&dist.pass_probability(d))).collect(),
            })
            .collect();
        PassTable {
            gamma: S::from_rational(&self.gamma),
            classes,
            class_of: self.class_of.clone(),
        }
    }

    pub(crate) fn check_network(&self, net: &Network) -> Result<()> {
        if net.n() != self.n() {
            return input(format!("network has {} nodes, instance has {}", net.n(), self.n()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ClassTable<S> {
    pub p0: S,
    pub pass: Vec<S>,
}

/// Precomputed per-class quantities in one arithmetic mode.
#[derive(Debug, Clone)]
pub struct PassTable<S> {
    pub(crate) gamma: S,
    pub(crate) classes: Vec<ClassTable<S>>,
    pub(crate) class_of: Vec<usize>,
}

impl<S: Scalar> PassTable<S> {
    pub fn p0(&self, node: usize) -> &S {
        &self.classes[self.class_of[node]].p0
    }

    pub fn pass(&self, node: usize, degree: usize) -> &S {
        &self.classes[self.class_of[node]].pass[degree]
    }

    pub fn max_degree(&self) -> usize {
        self.classes.first().map_or(0, |c| c.pass.len() - 1)
    }
}

/// Expected utility of `node`: the chance of holding at least one
/// opportunity minus `γ` per organic (non-recommended) neighbor.
pub fn utility<S: Scalar>(inst: &Instance, net: &Network, node: usize) -> Result<S> {
    inst.check_network(net)?;
    if node >= inst.n() {
        return input(format!("node {node} outside 0..{}", inst.n()));
    }
    Ok(utility_unchecked(inst, net, node))
}

fn utility_unchecked<S: Scalar>(inst: &Instance, net: &Network, node: usize) -> S {
    let mut miss = S::from_rational(inst.dist(node).p0());
    let mut organic = 0usize;
    for j in net.neighbors(node) {
        let pass = S::from_rational(&inst.dist(j).pass_probability(net.degree(j)));
        miss = miss * (S::one() - pass);
        if !inst.is_recommended(node, j) {
            organic += 1;
        }
    }
    S::one() - miss - S::from_rational(inst.gamma()) * S::from_usize(organic)
}

pub fn utilities<S: Scalar>(inst: &Instance, net: &Network) -> Result<Vec<S>> {
    inst.check_network(net)?;
    Ok((0..inst.n()).map(|i| utility_unchecked(inst, net, i)).collect())
}

fn group_mean<S: Scalar>(inst: &Instance, utils: &[S], group: Group) -> Option<S> {
    let members: Vec<&S> = utils.iter().enumerate().filter(|(i, _)| inst.group(*i) == group).map(|(_, u)| u).collect();
    if members.is_empty() {
        return None;
    }
    let total = members.iter().fold(S::zero(), |acc, u| acc + (*u).clone());
    Some(total / S::from_usize(members.len()))
}

/// Mean green utility over mean blue utility.
pub fn utility_ratio<S: Scalar>(inst: &Instance, net: &Network) -> Result<S> {
    let utils = utilities::<S>(inst, net)?;
    let green = group_mean(inst, &utils, Group::Green).ok_or_else(|| Error::Input("no green nodes".into()))?;
    let blue = group_mean(inst, &utils, Group::Blue).ok_or_else(|| Error::Input("no blue nodes".into()))?;
    if !blue.is_positive() {
        return Err(Error::DegenerateDenominator(format!(
            "mean blue utility {} is not positive",
            blue.to_f64()
        )));
    }
    Ok(green / blue)
}

pub fn welfare_utilitarian<S: Scalar>(inst: &Instance, net: &Network) -> Result<S> {
    Ok(utilities::<S>(inst, net)?.into_iter().fold(S::zero(), |a, u| a + u))
}

pub fn welfare_rawlsian<S: Scalar>(inst: &Instance, net: &Network) -> Result<S> {
    utilities::<S>(inst, net)?
        .into_iter()
        .reduce(|a, b| if b < a { b } else { a })
        .ok_or_else(|| Error::Input("empty population".into()))
}

/// `Σ_i (1 − p_{i0})`, the utilitarian welfare of the empty network.
pub fn welfare_exogenous(inst: &Instance) -> Rational {
    (0..inst.n()).map(|i| Rational::one() - inst.dist(i).p0().clone()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, ratio};

    fn dist(ps: &[&str]) -> OpportunityDistribution {
        OpportunityDistribution::new(ps.iter().map(|p| parse_rational(p).unwrap()).collect()).unwrap()
    }

    fn pair_instance(q_edge: bool) -> Instance {
        let g = dist(&["0.5", "0", "0.5"]);
        let recs = if q_edge { Network::from_edges(2, [(0, 1)]).unwrap() } else { Network::empty(2) };
        Instance::new(vec![(Group::Green, g)], vec![0, 0], ratio(1, 25), recs).unwrap()
    }

    fn four_node() -> (Population, Instance) {
        let pop = Population::new(2, 2, dist(&["0.5", "0", "0.5"]), dist(&["0.9", "0", "0.1"])).unwrap();
        let inst = Instance::from_population(&pop, ratio(1, 25), Network::empty(4)).unwrap();
        (pop, inst)
    }

    #[test]
    fn mu_examples() {
        let d = dist(&["0.5", "0", "0.5"]);
        assert_eq!(d.mu(0), ratio(0, 1));
        assert_eq!(d.mu(1), ratio(1, 2));
        let d = dist(&["0.2", "0.3", "0.1", "0.4"]);
        assert_eq!(d.mu(1), ratio(1, 2));
        assert_eq!(d.mu(2), ratio(9, 10));
        assert_eq!(d.mu_infinity(), ratio(9, 10));
        assert_eq!(d.mu(50), ratio(9, 10));
    }

    #[test]
    fn distribution_validation() {
        assert!(OpportunityDistribution::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(OpportunityDistribution::new(vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(OpportunityDistribution::new(vec![]).is_err());
        assert!(!dist(&["0.5", "0.5"]).is_nontrivial());
    }

    #[test]
    fn dominance_uses_all_tails() {
        let g = dist(&["0.25", "0", "0.75"]);
        let b = dist(&["0.85", "0", "0.15"]);
        assert!(g.strictly_dominates(&b));
        assert!(!b.strictly_dominates(&g));
        assert!(!g.strictly_dominates(&g));
        // Crossing tails: neither dominates.
        let x = dist(&["0.1", "0.8", "0.1"]);
        let y = dist(&["0.2", "0.4", "0.4"]);
        assert!(!x.strictly_dominates(&y) && !y.strictly_dominates(&x));
        assert!(Population::new(1, 1, y.clone(), x.clone()).is_err());
    }

    #[test]
    fn isolated_node_keeps_exogenous_utility() {
        let g = dist(&["0.7", "0", "0.3"]);
        let inst = Instance::new(vec![(Group::Green, g)], vec![0], ratio(1, 25), Network::empty(1)).unwrap();
        assert_eq!(utility::<Rational>(&inst, &Network::empty(1), 0).unwrap(), ratio(3, 10));
    }

    #[test]
    fn organic_and_recommended_pair() {
        let net = Network::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(utility::<Rational>(&pair_instance(false), &net, 0).unwrap(), ratio(71, 100));
        assert_eq!(utility::<Rational>(&pair_instance(true), &net, 0).unwrap(), ratio(3, 4));
        assert!(utility::<Rational>(&pair_instance(true), &net, 2).is_err());
    }

    #[test]
    fn ratio_and_welfare_examples() {
        let (pop, inst) = four_node();
        let empty = Network::empty(4);
        assert_eq!(utility_ratio::<Rational>(&inst, &empty).unwrap(), ratio(5, 1));
        assert_eq!(welfare_utilitarian::<Rational>(&inst, &empty).unwrap(), ratio(6, 5));
        assert_eq!(welfare_rawlsian::<Rational>(&inst, &empty).unwrap(), ratio(1, 10));
        assert_eq!(welfare_exogenous(&inst), ratio(6, 5));
        assert_eq!(pop.welfare_exogenous(), ratio(6, 5));

        let net = Network::from_edges(4, [(0, 1)]).unwrap();
        assert_eq!(utility_ratio::<Rational>(&inst, &net).unwrap(), ratio(71, 10));
        assert_eq!(welfare_utilitarian::<Rational>(&inst, &net).unwrap(), ratio(162, 100));
        let f: f64 = utility_ratio(&inst, &net).unwrap();
        assert!((f - 7.1).abs() < 1e-12);
    }

    #[test]
    fn exogenous_ratio_examples() {
        let mk = |g0: &str, b0: &str| {
            Population::new(1, 1, OpportunityDistribution::two_point(parse_rational(g0).unwrap()).unwrap(),
                OpportunityDistribution::two_point(parse_rational(b0).unwrap()).unwrap())
        };
        assert_eq!(mk("0.25", "0.85").unwrap().exogenous_utility_ratio().unwrap(), ratio(5, 1));
        assert_eq!(mk("0.5", "0.75").unwrap().exogenous_utility_ratio().unwrap(), ratio(2, 1));
        assert_eq!(mk("0.25", "0.925").unwrap().exogenous_utility_ratio().unwrap(), ratio(10, 1));
        // Equal groups violate strict dominance but the ratio itself is 1.
        assert!(mk("0.5", "0.5").is_err());
    }

    #[test]
    fn blue_mean_must_be_positive() {
        let g = dist(&["0", "0", "1"]);
        let b = dist(&["1", "0", "0"]);
        let inst = Instance::new(vec![(Group::Green, g), (Group::Blue, b)], vec![0, 1], ratio(1, 25), Network::empty(2)).unwrap();
        assert!(matches!(
            utility_ratio::<Rational>(&inst, &Network::empty(2)),
            Err(Error::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn network_rejects_bad_edges() {
        let mut net = Network::empty(3);
        assert!(net.add_edge(0, 0).is_err());
        assert!(net.add_edge(0, 3).is_err());
        assert!(net.add_edge(0, 1).unwrap());
        assert!(!net.add_edge(1, 0).unwrap());
        assert_eq!(net.edges(), vec![(0, 1)]);
    }

    #[test]
    fn param_point_validation() {
        assert!(ParamPoint::new(ratio(0, 1), 0, ratio(0, 1)).is_err());
        assert!(ParamPoint::new(ratio(1, 25), 0, ratio(1, 2)).is_err());
        assert!(ParamPoint::new(ratio(1, 25), 2, ratio(1, 3)).is_err());
        let p = ParamPoint::new(ratio(1, 25), 2, ratio(1, 2)).unwrap();
        assert_eq!(p.blue_cross(), 1);
        assert_eq!(p.degree_cap(), 27);
    }
}
