//! Group-symmetric equilibria: blues keep exactly their `k` recommended
//! links, and every green has the same degree `d_G`, reached by laying an
//! organic circulant over the greens.

use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{organic_cap, Group, Instance, Network, OpportunityDistribution, ParamPoint, Population};
use crate::recsets::{construct_recommendations, layer_edges, rec_counts, RecommendationSet};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone)]
pub struct SymmetricEquilibrium {
    pub network: Network,
    pub recs: RecommendationSet,
    pub instance: Instance,
    pub green_degree: usize,
    /// Every green degree passing both interval conditions, ascending.
    pub feasible_green_degrees: Vec<usize>,
}

/// Largest gain a node of distribution `dist` at degree `d` (with `cross`
/// recommended links to the other group, whose members miss with
/// probability `other_miss`) gets from one more same-group link to a peer of
/// degree `d`.
pub(crate) fn add_threshold(
    dist: &OpportunityDistribution,
    d: usize,
    cross: usize,
    other_miss: &Rational,
) -> Rational {
    let own_miss = Rational::one() - dist.pass_probability(d);
    dist.p0().clone() * dist.pass_probability(d + 1) * own_miss.powi(d - cross) * other_miss.powi(cross)
}

/// What a node at degree `d ≥ 1` loses by dropping one same-group link.
pub(crate) fn sever_threshold(
    dist: &OpportunityDistribution,
    d: usize,
    cross: usize,
    other_miss: &Rational,
) -> Rational {
    let own_miss = Rational::one() - dist.pass_probability(d);
    dist.p0().clone() * dist.pass_probability(d) * own_miss.powi(d - cross - 1) * other_miss.powi(cross)
}

/// `b0(1 − b0 − b1)`: the most any node gains from a blue neighbor of degree one.
pub fn blue_link_value(blue: &OpportunityDistribution) -> Rational {
    blue.p0().clone() * blue.tail(2)
}

/// Builds the group-symmetric equilibrium for `pop`, or `None` when
/// `γ ≤ b0(1 − b0 − b1)` and blues might want organic links.
pub fn construct_symmetric_equilibrium(pop: &Population, params: &ParamPoint) -> Result<Option<SymmetricEquilibrium>> {
    if params.gamma <= blue_link_value(&pop.blue) {
        return Ok(None);
    }
    let recs = construct_recommendations(pop, params)?;
    let counts = rec_counts(pop, params)?;
    let k = params.k;
    let cross = counts.green_cross;
    let blue_miss = Rational::one() - pop.blue.pass_probability(k);
    let gamma = &params.gamma;
    let feasible: Vec<usize> = (k..=k + organic_cap(pop.green.p0(), gamma))
        .filter(|&d| {
            let no_add = *gamma >= add_threshold(&pop.green, d, cross, &blue_miss);
            no_add && (d == k || *gamma <= sever_threshold(&pop.green, d, cross, &blue_miss))
        })
        .collect();
    let Some(&green_degree) = feasible.first() else {
        return Err(Error::Consistency(format!("no green degree in [{k}, {}] meets both interval conditions", k + organic_cap(pop.green.p0(), gamma))));
    };
    let greens: Vec<usize> = pop.nodes(Group::Green).collect();
    let mut network = recs.network().clone();
    for (a, b) in layer_edges(greens.len(), counts.same(Group::Green), green_degree - k)? {
        if !network.add_edge(greens[a], greens[b])? {
            return Err(Error::Consistency(format!("organic layer repeats edge ({}, {})", greens[a], greens[b])));
        }
    }
    let instance = Instance::from_population(pop, gamma.clone(), recs.network().clone())?;
    Ok(Some(SymmetricEquilibrium { network, recs, instance, green_degree, feasible_green_degrees: feasible }))
}

/// Smallest `(|G|, |B|)` with `|B| ≤ |G|`, ordered by total size, for which
/// the symmetric construction succeeds. With `with_peers`, every node must
/// also keep an unlinked same-group peer of equal degree.
pub fn smallest_symmetric_population(
    green: &OpportunityDistribution,
    blue: &OpportunityDistribution,
    params: &ParamPoint,
    max_total: usize,
    with_peers: bool,
) -> Result<Option<(Population, SymmetricEquilibrium)>> {
    for total in 2..=max_total {
        for n_blue in 1..=total / 2 {
            let pop = Population::new(total - n_blue, n_blue, green.clone(), blue.clone())?;
            let built = match construct_symmetric_equilibrium(&pop, params) {
                Ok(Some(built)) => built,
                Ok(None) => return Ok(None),
                Err(Error::Feasibility(_)) => continue,
                Err(e) => return Err(e),
            };
            if with_peers {
                let counts = rec_counts(&pop, params)?;
                let green_same = built.green_degree - counts.green_cross;
                let blue_same = params.k - counts.blue_cross;
                if green_same + 2 > pop.n_green || blue_same + 2 > pop.n_blue {
                    continue;
                }
            }
            return Ok(Some((pop, built)));
        }
    }
    Ok(None)
}
