//! Bounds on degrees, utilities, the utility ratio, and welfare over all
//! equilibria in the group-symmetric regime: every green holds degree `d_G`,
//! every blue `d_B`, all organic links stay within a group, and each node's
//! same-group neighbors share its degree.
//!
//! A degree pair `(d_G, d_B)` is feasible when each group, facing the other
//! at its paired degree, neither wants to drop a same-group organic link nor
//! to add one more. Blues are held at `k` when organic blue links cannot pay.
//! Envelopes are the extremes over feasible pairs, so every endpoint is the
//! value of some pair.

use num_traits::One;
use serde::Serialize;

use crate::equilibrium::blue_link_value;
use crate::error::{Error, Result};
use crate::model::{organic_cap, Group, OpportunityDistribution, ParamPoint, Population};
use crate::scalar::{rational_to_f64, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Assumptions {
    /// `γ ≥ b0(1 − b0 − b1)`, so blues hold only their recommended links.
    pub blue_locked: bool,
    /// No feasible pair lets a green and a blue both gain from an organic
    /// link between them, even after dropping same-group organic links.
    pub no_cross_organic: bool,
    /// Each group not locked at `k` is large enough that a node at its
    /// highest sustainable degree `k + ⌊p0/γ⌋` still has an unlinked
    /// same-group peer, and every feasible degree can be realized as a
    /// regular same-group graph. Only meaningful for an actual finite
    /// population.
    pub regular_with_peers: bool,
}

impl Assumptions {
    /// Whether the envelope applies in the large-population regime.
    pub fn hold(&self) -> bool {
        self.no_cross_organic
    }

    /// Whether the envelope applies to this exact population.
    pub fn hold_at_finite_n(&self) -> bool {
        self.no_cross_organic && self.regular_with_peers
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreePair<S> {
    pub green_degree: usize,
    pub blue_degree: usize,
    pub green_utility: S,
    pub blue_utility: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSet<S> {
    pub pairs: Vec<DegreePair<S>>,
    pub assumptions: Assumptions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeEnvelope {
    pub group: Group,
    pub feasible_degrees: Vec<usize>,
    pub assumptions: Assumptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeMode {
    FiniteDegreeSet,
    AsymptoticClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityEnvelope<S> {
    pub group: Group,
    pub lower: S,
    pub upper: S,
    pub mode: EnvelopeMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval<S> {
    pub lower: S,
    pub upper: S,
}

impl<S: Scalar> Interval<S> {
    pub fn contains(&self, x: &S) -> bool {
        self.lower <= *x && *x <= self.upper
    }

    fn of(values: impl IntoIterator<Item = S>) -> Option<Self> {
        let mut it = values.into_iter();
        let first = it.next()?;
        let (mut lower, mut upper) = (first.clone(), first);
        for v in it {
            if v < lower {
                lower = v;
            } else if v > upper {
                upper = v;
            }
        }
        Some(Self { lower, upper })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WelfareEnvelope<S> {
    /// Mean utility over the whole population.
    pub utilitarian: Interval<S>,
    /// Utility of the worse-off group.
    pub rawlsian: Interval<S>,
}

/// One group's side of the degree conditions.
struct Side<S> {
    p0: S,
    pass: Vec<S>,
    cross: usize,
    lo: usize,
}

impl<S: Scalar> Side<S> {
    fn new(dist: &OpportunityDistribution, cross: usize, k: usize, hi: usize) -> Self {
        Self {
            p0: S::from_rational(dist.p0()),
            pass: (0..=hi + 1).map(|d| S::from_rational(&dist.pass_probability(d))).collect(),
            cross,
            lo: k,
        }
    }

    fn miss(&self, d: usize) -> S {
        S::one() - self.pass[d].clone()
    }

    /// Chance of passing nothing on from neighbors at degree `d`, with
    /// `partner_miss` for each cross-group recommended neighbor.
    fn no_pass(&self, d: usize, partner_miss: &S) -> S {
        self.miss(d).powi(d - self.cross) * partner_miss.powi(self.cross)
    }

    fn feasible(&self, d: usize, partner_miss: &S, gamma: &S) -> bool {
        let rec = partner_miss.powi(self.cross);
        let add = self.p0.clone() * self.pass[d + 1].clone() * self.miss(d).powi(d - self.cross) * rec.clone();
        if *gamma < add {
            return false;
        }
        if d == self.lo {
            return true;
        }
        let sever = self.p0.clone() * self.pass[d].clone() * self.miss(d).powi(d - self.cross - 1) * rec;
        *gamma <= sever
    }

    fn utility(&self, d: usize, partner_miss: &S, gamma: &S) -> S {
        S::one() - self.p0.clone() * self.no_pass(d, partner_miss) - gamma.clone() * S::from_usize(d - self.lo)
    }

    /// Best gain from an organic link to a node passing with `new_pass`,
    /// dropping any number of same-group organic links.
    fn cross_gain(&self, d: usize, partner_miss: &S, new_pass: &S, gamma: &S) -> S {
        let now = self.no_pass(d, partner_miss);
        let rec = partner_miss.powi(self.cross);
        let mut best: Option<S> = None;
        for m in 0..=d - self.lo {
            let keep = self.miss(d).powi(d - self.cross - m) * rec.clone();
            let g = self.p0.clone() * (now.clone() - keep * (S::one() - new_pass.clone()))
                + gamma.clone() * S::from_usize(m)
                - gamma.clone();
            if best.as_ref().is_none_or(|b| g > *b) {
                best = Some(g);
            }
        }
        best.expect("m = 0 is always scored")
    }
}

fn cross_counts(pop: &Population, params: &ParamPoint) -> Result<(usize, usize)> {
    let green = params.green_cross(pop).ok_or_else(|| {
        Error::Feasibility("per-green cross-group recommendation count ρk|B|/|G| is not an integer".into())
    })?;
    if params.sigma(pop) > Rational::one() {
        return Err(Error::Feasibility("σ = ρ|B|/|G| exceeds 1".into()));
    }
    Ok((green, params.blue_cross()))
}

/// Every feasible `(d_G, d_B)` with its group utilities.
pub fn feasible_pairs<S: Scalar>(pop: &Population, params: &ParamPoint) -> Result<PairSet<S>> {
    let (green_cross, blue_cross) = cross_counts(pop, params)?;
    let k = params.k;
    let blue_locked = params.gamma >= blue_link_value(&pop.blue);
    let green_hi = k + organic_cap(pop.green.p0(), &params.gamma);
    let blue_hi = if blue_locked { k } else { k + organic_cap(pop.blue.p0(), &params.gamma) };
    let green = Side::<S>::new(&pop.green, green_cross, k, green_hi);
    let blue = Side::<S>::new(&pop.blue, blue_cross, k, blue_hi);
    let gamma = S::from_rational(&params.gamma);

    let mut pairs = Vec::new();
    let mut no_cross_organic = true;
    let mut regular_with_peers =
        pop.n_green >= green_hi - green_cross + 2 && (blue_locked || pop.n_blue >= blue_hi - blue_cross + 2);
    for dg in k..=green_hi {
        for db in k..=blue_hi {
            let (green_miss, blue_miss) = (green.miss(dg), blue.miss(db));
            if !green.feasible(dg, &blue_miss, &gamma) {
                continue;
            }
            if !blue_locked && !blue.feasible(db, &green_miss, &gamma) {
                continue;
            }
            let to_blue = green.cross_gain(dg, &blue_miss, &blue.pass[db + 1], &gamma);
            let to_green = blue.cross_gain(db, &green_miss, &green.pass[dg + 1], &gamma);
            if to_blue.is_positive() && to_green.is_positive() {
                no_cross_organic = false;
            }
            if pop.n_green * (dg - green_cross) % 2 == 1 || pop.n_blue * (db - blue_cross) % 2 == 1 {
                regular_with_peers = false;
            }
            pairs.push(DegreePair {
                green_degree: dg,
                blue_degree: db,
                green_utility: green.utility(dg, &blue_miss, &gamma),
                blue_utility: blue.utility(db, &green_miss, &gamma),
            });
        }
    }
    Ok(PairSet { pairs, assumptions: Assumptions { blue_locked, no_cross_organic, regular_with_peers } })
}

/// Degrees `group` takes in some feasible pair.
pub fn feasible_degree_set(group: Group, pop: &Population, params: &ParamPoint) -> Result<DegreeEnvelope> {
    let set = feasible_pairs::<Rational>(pop, params)?;
    let mut feasible_degrees: Vec<usize> = set
        .pairs
        .iter()
        .map(|p| match group {
            Group::Green => p.green_degree,
            Group::Blue => p.blue_degree,
        })
        .collect();
    feasible_degrees.sort_unstable();
    feasible_degrees.dedup();
    Ok(DegreeEnvelope { group, feasible_degrees, assumptions: set.assumptions })
}

fn applicable_pairs<S: Scalar>(pop: &Population, params: &ParamPoint) -> Result<Vec<DegreePair<S>>> {
    let set = feasible_pairs::<S>(pop, params)?;
    if !set.assumptions.hold() {
        return Err(Error::Inapplicable(
            "a green and a blue could both gain from an organic link between them".into(),
        ));
    }
    if set.pairs.is_empty() {
        return Err(Error::Inapplicable("no degree pair meets the equilibrium conditions".into()));
    }
    Ok(set.pairs)
}

pub fn utility_envelope_finite<S: Scalar>(
    group: Group,
    pop: &Population,
    params: &ParamPoint,
) -> Result<UtilityEnvelope<S>> {
    let pairs = applicable_pairs::<S>(pop, params)?;
    let Interval { lower, upper } = Interval::of(pairs.into_iter().map(|p| match group {
        Group::Green => p.green_utility,
        Group::Blue => p.blue_utility,
    }))
    .expect("pairs are non-empty");
    Ok(UtilityEnvelope { group, lower, upper, mode: EnvelopeMode::FiniteDegreeSet })
}

/// Large-population closed forms with `μ_G = μ_G(∞)`:
/// blues get `1 − b0(1 − γ/(g0·e^{−μ_G} ± γ/μ_G))^{ρk}`, greens
/// `1 − g0(1 + μ_G)e^{−μ_G}` plus up to `γ(k + 1)`.
pub fn utility_envelope_asymptotic(
    group: Group,
    pop: &Population,
    params: &ParamPoint,
) -> Result<UtilityEnvelope<f64>> {
    let mu = rational_to_f64(&pop.green.mu_infinity());
    if mu <= 0.0 {
        return Err(Error::DegenerateDenominator("μ_G is zero".into()));
    }
    let g0 = rational_to_f64(pop.green.p0());
    let b0 = rational_to_f64(pop.blue.p0());
    let gamma = rational_to_f64(&params.gamma);
    let (lower, upper) = match group {
        Group::Green => {
            let base = 1.0 - g0 * (1.0 + mu) * (-mu).exp();
            (base, base + gamma * (params.k + 1) as f64)
        }
        Group::Blue => {
            let exponent = params.blue_cross() as i32;
            let attention = g0 * (-mu).exp();
            let bound = |denom: f64| -> Result<f64> {
                if denom <= 0.0 {
                    return Err(Error::DegenerateDenominator(format!(
                        "g0·e^(−μ_G) ± γ/μ_G = {denom} is not positive"
                    )));
                }
                Ok(1.0 - b0 * (1.0 - gamma / denom).powi(exponent))
            };
            (bound(attention + gamma / mu)?, bound(attention - gamma / mu)?)
        }
    };
    Ok(UtilityEnvelope { group, lower, upper, mode: EnvelopeMode::AsymptoticClosedForm })
}

/// Range of mean green over mean blue utility across feasible pairs.
pub fn ur_envelope<S: Scalar>(pop: &Population, params: &ParamPoint) -> Result<Interval<S>> {
    let pairs = applicable_pairs::<S>(pop, params)?;
    let mut ratios = Vec::with_capacity(pairs.len());
    for p in pairs {
        if !p.blue_utility.is_positive() {
            return Err(Error::DegenerateDenominator(format!(
                "blue utility {} at degrees ({}, {})",
                p.blue_utility.to_f64(),
                p.green_degree,
                p.blue_degree
            )));
        }
        ratios.push(p.green_utility / p.blue_utility);
    }
    Ok(Interval::of(ratios).expect("pairs are non-empty"))
}

pub fn welfare_envelope<S: Scalar>(pop: &Population, params: &ParamPoint) -> Result<WelfareEnvelope<S>> {
    let pairs = applicable_pairs::<S>(pop, params)?;
    let (ng, nb) = (S::from_usize(pop.n_green), S::from_usize(pop.n_blue));
    let n = ng.clone() + nb.clone();
    let utilitarian = Interval::of(
        pairs.iter().map(|p| (ng.clone() * p.green_utility.clone() + nb.clone() * p.blue_utility.clone()) / n.clone()),
    )
    .expect("pairs are non-empty");
    let rawlsian = Interval::of(pairs.iter().map(|p| {
        if p.green_utility < p.blue_utility {
            p.green_utility.clone()
        } else {
            p.blue_utility.clone()
        }
    }))
    .expect("pairs are non-empty");
    Ok(WelfareEnvelope { utilitarian, rawlsian })
}

/// `C(γ, k) = 2(1/γ + k)²(1/γ + k + 1)²`.
pub fn reciprocity_constant(params: &ParamPoint) -> Rational {
    let a = Rational::one() / params.gamma.clone() + crate::scalar::int(params.k);
    let b = a.clone() + Rational::one();
    crate::scalar::int(2) * a.clone() * a * b.clone() * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn two_point(p0: Rational) -> OpportunityDistribution {
        OpportunityDistribution::two_point(p0).unwrap()
    }

    fn pop(g0: Rational, b0: Rational) -> Population {
        Population::new(1, 1, two_point(g0), two_point(b0)).unwrap()
    }

    fn params(gamma: Rational, k: usize, rho: Rational) -> ParamPoint {
        ParamPoint::new(gamma, k, rho).unwrap()
    }

    #[test]
    fn reciprocity_constant_examples() {
        assert_eq!(reciprocity_constant(&params(int(1), 0, int(0))), int(8));
        assert_eq!(reciprocity_constant(&params(ratio(1, 2), 1, int(0))), int(288));
        assert_eq!(reciprocity_constant(&params(ratio(1, 25), 1, int(0))), int(985_608));
    }

    #[test]
    fn unprofitable_blue_links_lock_blues_at_k() {
        let p = pop(ratio(1, 2), ratio(24, 25));
        for k in [0, 2] {
            let env = feasible_degree_set(Group::Blue, &p, &params(ratio(1, 25), k, int(0))).unwrap();
            assert_eq!(env.feasible_degrees, vec![k]);
            assert!(env.assumptions.blue_locked);
        }
    }

    #[test]
    fn facially_neutral_green_degrees() {
        // Degrees d in 1..=25 with 0.5·(0.5/(d+1))(1 − 0.5/d)^d ≤ 0.04 ≤
        // 0.5·(0.5/d)(1 − 0.5/d)^(d−1), scanned by hand in exact fractions.
        let env = feasible_degree_set(Group::Green, &pop(ratio(1, 2), ratio(24, 25)), &params(ratio(1, 25), 0, int(0)))
            .unwrap();
        assert_eq!(env.feasible_degrees, vec![3, 4]);
        assert!(env.assumptions.hold());
    }

    #[test]
    fn costly_links_leave_everyone_isolated() {
        let p = pop(ratio(1, 2), ratio(9, 10));
        let pt = params(ratio(3, 10), 0, int(0));
        assert_eq!(feasible_degree_set(Group::Green, &p, &pt).unwrap().feasible_degrees, vec![0]);
        let green: UtilityEnvelope<Rational> = utility_envelope_finite(Group::Green, &p, &pt).unwrap();
        assert_eq!((green.lower.clone(), green.upper), (ratio(1, 2), ratio(1, 2)));
        let ur: Interval<Rational> = ur_envelope(&p, &pt).unwrap();
        assert_eq!(ur.lower, p.exogenous_utility_ratio().unwrap());
        assert_eq!(ur.upper, ur.lower);
    }

    #[test]
    fn all_cross_blue_utility_follows_green_degree() {
        let p = pop(ratio(1, 2), ratio(24, 25));
        let pt = params(ratio(1, 25), 1, int(1));
        let set = feasible_pairs::<Rational>(&p, &pt).unwrap();
        assert!(!set.pairs.is_empty());
        for pair in &set.pairs {
            let expected = int(1) - ratio(24, 25) * (int(1) - p.green.pass_probability(pair.green_degree));
            assert_eq!(pair.blue_degree, 1);
            assert_eq!(pair.blue_utility, expected);
        }
    }

    #[test]
    fn f64_and_exact_envelopes_agree() {
        let p = pop(ratio(3, 8), ratio(15, 16));
        for (gamma, k, rho) in [(ratio(1, 25), 0, int(0)), (ratio(1, 50), 2, ratio(1, 2)), (ratio(1, 50), 5, int(1))] {
            let pt = params(gamma, k, rho);
            let exact: Interval<Rational> = ur_envelope(&p, &pt).unwrap();
            let float: Interval<f64> = ur_envelope(&p, &pt).unwrap();
            assert!((rational_to_f64(&exact.lower) - float.lower).abs() < 1e-12);
            assert!((rational_to_f64(&exact.upper) - float.upper).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_forms() {
        let p = pop(ratio(1, 2), ratio(19, 20));
        let blue = utility_envelope_asymptotic(Group::Blue, &p, &params(ratio(1, 50), 1, int(0))).unwrap();
        assert!((blue.lower - 0.05).abs() < 1e-15 && (blue.upper - 0.05).abs() < 1e-15);

        let pt = params(ratio(1, 50), 1, int(1));
        let blue = utility_envelope_asymptotic(Group::Blue, &p, &pt).unwrap();
        let expected = 1.0 - 0.95 * (1.0 - 0.02 / (0.5 * (-0.5f64).exp() + 0.04));
        assert!((blue.lower - expected).abs() < 1e-15);
        assert!(blue.lower <= blue.upper);
        let green = utility_envelope_asymptotic(Group::Green, &p, &pt).unwrap();
        assert!((green.upper - green.lower - 0.04).abs() < 1e-15);
        assert_eq!(green.mode, EnvelopeMode::AsymptoticClosedForm);
    }

    #[test]
    fn greens_gain_relative_to_blues_without_recommendations() {
        // γ between b0(1 − b0) = 0.0384 and g0(1 − g0) = 0.25.
        let p = pop(ratio(1, 2), ratio(24, 25));
        let ur: Interval<Rational> = ur_envelope(&p, &params(ratio(1, 25), 0, int(0))).unwrap();
        assert!(ur.lower > p.exogenous_utility_ratio().unwrap());
    }

    #[test]
    fn cross_recommendations_pull_ratio_below_exogenous() {
        // b0 above g0/(1 − (1 − g0)(1 − γ·μ_G(⌊1/γ⌋))^k) = 0.5/(1 − 0.5·0.98) ≈ 0.980.
        let p = pop(ratio(1, 2), ratio(99, 100));
        let ur: Interval<Rational> = ur_envelope(&p, &params(ratio(1, 25), 1, int(1))).unwrap();
        assert!(ur.upper < p.exogenous_utility_ratio().unwrap());
    }

    #[test]
    fn two_point_groups_never_want_cross_organic_links() {
        for (g0, b0) in [((1, 4), (3, 5)), ((1, 2), (7, 10)), ((3, 4), (19, 20))] {
            let p = pop(ratio(g0.0, g0.1), ratio(b0.0, b0.1));
            for gamma in [ratio(1, 100), ratio(1, 25)] {
                for (k, rho) in [(0, int(0)), (2, int(1))] {
                    let set = feasible_pairs::<f64>(&p, &params(gamma.clone(), k, rho)).unwrap();
                    assert!(set.assumptions.hold());
                }
            }
        }
    }

    fn green_width(p: &Population, gamma: Rational, k: usize, rho: Rational) -> Rational {
        let env: UtilityEnvelope<Rational> = utility_envelope_finite(Group::Green, p, &params(gamma, k, rho)).unwrap();
        env.upper - env.lower
    }

    #[test]
    fn green_width_shrinks_with_cost_without_recommendations() {
        let p = pop(ratio(1, 2), ratio(24, 25));
        let widths: Vec<Rational> = [(2, 25), (1, 25), (1, 50)].iter().map(|&(a, b)| green_width(&p, ratio(a, b), 0, int(0))).collect();
        assert!(widths[0] > widths[1] && widths[1] > widths[2]);
    }

    #[test]
    fn green_width_is_not_monotone_in_cost_in_general() {
        // With one cross recommendation the same population only spreads out at γ = 0.02.
        let p = pop(ratio(1, 2), ratio(24, 25));
        assert_eq!(green_width(&p, ratio(1, 25), 1, int(1)), int(0));
        assert!(green_width(&p, ratio(1, 50), 1, int(1)) > int(0));
    }

    #[test]
    fn non_integral_green_cross_count_is_rejected() {
        let p = Population::new(3, 2, two_point(ratio(1, 2)), two_point(ratio(9, 10))).unwrap();
        assert!(matches!(feasible_pairs::<f64>(&p, &params(ratio(1, 25), 1, int(1))), Err(Error::Feasibility(_))));
    }
}
