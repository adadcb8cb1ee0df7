//! Recommendation sets: `k` free links per node, with a fixed number of them
//! crossing groups.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Group, Network, ParamPoint, Population};
use crate::scalar::int;

/// Symmetric set of subsidized links, stored as a network over the population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecommendationSet {
    net: Network,
}

impl RecommendationSet {
    pub fn empty(n: usize) -> Self {
        Self { net: Network::empty(n) }
    }

    pub fn from_network(net: Network) -> Self {
        Self { net }
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn into_network(self) -> Network {
        self.net
    }
}

/// Per-node recommendation counts implied by a population and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecCounts {
    pub k: usize,
    /// Cross-group recommendations per green node (`σk`).
    pub green_cross: usize,
    /// Cross-group recommendations per blue node (`ρk`).
    pub blue_cross: usize,
}

impl RecCounts {
    pub fn cross(&self, group: Group) -> usize {
        match group {
            Group::Green => self.green_cross,
            Group::Blue => self.blue_cross,
        }
    }

    pub fn same(&self, group: Group) -> usize {
        self.k - self.cross(group)
    }
}

/// Checks every feasibility condition and returns the per-node counts.
pub fn rec_counts(pop: &Population, params: &ParamPoint) -> Result<RecCounts> {
    let k = params.k;
    let blue_cross = params.blue_cross();
    let infeasible = |msg: String| Err(Error::Feasibility(msg));
    let green_cross = match params.green_cross(pop) {
        Some(c) => c,
        None => {
            return infeasible(format!(
                "per-green cross count ρk|B|/|G| = {}·{}/{} is not an integer",
                blue_cross, pop.n_blue, pop.n_green
            ))
        }
    };
    if params.sigma(pop) > int(1) {
        return infeasible(format!("σ = ρ|B|/|G| exceeds 1 ({} > {})", blue_cross * pop.n_blue, k * pop.n_green));
    }
    if blue_cross > pop.n_green {
        return infeasible(format!("each blue needs {blue_cross} distinct green partners but |G| = {}", pop.n_green));
    }
    for group in [Group::Green, Group::Blue] {
        let size = pop.size(group);
        let same = k - if group == Group::Green { green_cross } else { blue_cross };
        if same > 0 && same >= size {
            return infeasible(format!("same-group degree {same} needs more than {size} {group} nodes"));
        }
        if (size * same) % 2 == 1 {
            return infeasible(format!("same-group degree {same} on {size} {group} nodes has odd degree sum"));
        }
    }
    Ok(RecCounts { k, green_cross, blue_cross })
}

/// Builds the canonical recommendation set.
///
/// Blue node `t` (0-based within its group) is recommended to greens
/// `(t·ρk + s) mod |G|` for `s < ρk`; within each group the remaining slots
/// form a circulant graph.
pub fn construct_recommendations(pop: &Population, params: &ParamPoint) -> Result<RecommendationSet> {
    let counts = rec_counts(pop, params)?;
    let mut net = Network::empty(pop.n());
    let greens = pop.nodes(Group::Green);
    let blues = pop.nodes(Group::Blue);
    for (t, b) in blues.clone().enumerate() {
        for s in 0..counts.blue_cross {
            let g = greens.start + (t * counts.blue_cross + s) % pop.n_green;
            net.add_edge(g, b)?;
        }
    }
    for group in [Group::Green, Group::Blue] {
        let nodes: Vec<usize> = pop.nodes(group).collect();
        let offsets = circulant_offsets(nodes.len(), 0, counts.same(group))?;
        add_circulant(&mut net, &nodes, &offsets)?;
    }
    Ok(RecommendationSet { net })
}

/// Offsets of a `degree`-regular circulant on `m` nodes that avoids the
/// offsets already used by a `used`-regular circulant built the same way.
pub(crate) fn circulant_offsets(m: usize, used: usize, degree: usize) -> Result<Vec<usize>> {
    if degree == 0 {
        return Ok(Vec::new());
    }
    if used + degree >= m {
        return Err(Error::Feasibility(format!("degree {} is impossible on {m} nodes", used + degree)));
    }
    if (m * degree) % 2 == 1 {
        return Err(Error::Feasibility(format!("degree {degree} on {m} nodes has odd degree sum")));
    }
    if used % 2 == 1 && degree % 2 == 1 {
        return Err(Error::Feasibility(format!(
            "two odd circulant layers ({used} and {degree}) on {m} nodes would share the antipodal offset"
        )));
    }
    let first = used / 2 + 1;
    let mut offsets: Vec<usize> = (first..first + degree / 2).collect();
    if degree % 2 == 1 {
        offsets.push(m / 2);
    }
    Ok(offsets)
}

/// Position pairs of a `degree`-regular layer on `m` nodes disjoint from a
/// `used`-regular circulant built by [`circulant_offsets`]. When both are
/// odd, the odd part is the matching `{2j, 2j + o}` for an odd offset `o`
/// below `m/2` that no other layer uses.
pub(crate) fn layer_edges(m: usize, used: usize, degree: usize) -> Result<Vec<(usize, usize)>> {
    if used.is_multiple_of(2) || degree.is_multiple_of(2) {
        let offsets = circulant_offsets(m, used, degree)?;
        let edges = (0..m).flat_map(|p| offsets.iter().map(move |&o| (p, (p + o) % m)));
        // The antipodal offset reaches each of its edges from both ends.
        return Ok(edges.filter(|&(p, q)| 2 * (q + m - p) % (2 * m) != m || p < q).collect());
    }
    if used + degree >= m {
        return Err(Error::Feasibility(format!("degree {} is impossible on {m} nodes", used + degree)));
    }
    let first = used / 2 + 1;
    let even: Vec<usize> = (first..first + degree / 2).collect();
    let odd = (first + degree / 2) | 1;
    if 2 * odd >= m {
        return Err(Error::Feasibility(format!(
            "no free odd offset below {} for a second matching on {m} nodes",
            m / 2
        )));
    }
    let mut edges: Vec<(usize, usize)> = (0..m).flat_map(|p| even.iter().map(move |&o| (p, (p + o) % m))).collect();
    edges.extend((0..m).step_by(2).map(|p| (p, (p + odd) % m)));
    Ok(edges)
}

pub(crate) fn add_circulant(net: &mut Network, nodes: &[usize], offsets: &[usize]) -> Result<()> {
    let m = nodes.len();
    for (pos, &u) in nodes.iter().enumerate() {
        for &off in offsets {
            net.add_edge(u, nodes[(pos + off) % m])?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecViolation {
    NodeCount { expected: usize, actual: usize },
    Degree { node: usize, expected: usize, actual: usize },
    CrossCount { node: usize, expected: usize, actual: usize },
    Infeasible { reason: String },
}

impl fmt::Display for RecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecViolation::NodeCount { expected, actual } => write!(f, "expected {expected} nodes, found {actual}"),
            RecViolation::Degree { node, expected, actual } => {
                write!(f, "node {node} has {actual} recommendations, expected {expected}")
            }
            RecViolation::CrossCount { node, expected, actual } => {
                write!(f, "node {node} has {actual} cross-group recommendations, expected {expected}")
            }
            RecViolation::Infeasible { reason } => write!(f, "{reason}"),
        }
    }
}

/// Lists every way `recs` departs from the per-node count requirements.
pub fn validate_recommendations(recs: &RecommendationSet, pop: &Population, params: &ParamPoint) -> Vec<RecViolation> {
    let net = &recs.net;
    if net.n() != pop.n() {
        return vec![RecViolation::NodeCount { expected: pop.n(), actual: net.n() }];
    }
    let counts = match rec_counts(pop, params) {
        Ok(c) => c,
        Err(e) => return vec![RecViolation::Infeasible { reason: e.to_string() }],
    };
    let mut out = Vec::new();
    for node in 0..net.n() {
        let group = pop.group_of(node);
        let degree = net.degree(node);
        if degree != counts.k {
            out.push(RecViolation::Degree { node, expected: counts.k, actual: degree });
        }
        let cross = net.neighbors(node).filter(|&j| pop.group_of(j) != group).count();
        if cross != counts.cross(group) {
            out.push(RecViolation::CrossCount { node, expected: counts.cross(group), actual: cross });
        }
    }
    out
}
