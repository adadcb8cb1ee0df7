//! Verification suites: sample parameter points inside each claim's
//! hypotheses, enumerate every equilibrium of a small population, and check
//! the claimed inequalities on all of them in exact arithmetic.
//!
//! Existential constants (thresholds on `b0`, `g0`, `γ`, `n`) cannot be
//! checked directly; each suite fixes a concrete grid instead. Every suite
//! also checks that recommended links form and degrees stay under the cap.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::reciprocity_constant;
use crate::equilibrium::{
    enumerate_equilibria, is_dfpn, reciprocity_audit, smallest_symmetric_population, DefectionKind,
    EnumerateOptions, PairScoring,
};
use crate::error::{input, Error, Result};
use crate::model::{
    utilities, utility_ratio, welfare_rawlsian, welfare_utilitarian, Group, Instance, Network,
    OpportunityDistribution, ParamPoint, Population,
};
use crate::recsets::construct_recommendations;
use crate::scalar::{format_rational, int, ratio, Rational};

use super::instance_file::InstanceFile;

/// Failures kept per report; the total is always counted.
const MAX_REPORTED_FAILURES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Prop1,
    Prop2,
    Corollary1,
    Prop3,
    Prop4,
    Lemma1,
    Facts,
    NotesExamples,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Prop1,
        Suite::Prop2,
        Suite::Corollary1,
        Suite::Prop3,
        Suite::Prop4,
        Suite::Lemma1,
        Suite::Facts,
        Suite::NotesExamples,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Corollary1 => "corollary1",
            Suite::Prop3 => "prop3",
            Suite::Prop4 => "prop4",
            Suite::Lemma1 => "lemma1",
            Suite::Facts => "facts",
            Suite::NotesExamples => "notes-examples",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.id() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.id()).collect();
            Error::Input(format!("unknown suite `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

/// Largest population enumerated and number of parameter points sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_n: usize,
    pub max_points: usize,
}

impl Budget {
    pub const QUICK: Budget = Budget { max_n: 6, max_points: 16 };
    pub const STANDARD: Budget = Budget { max_n: 8, max_points: 120 };
    pub const FULL: Budget = Budget { max_n: 8, max_points: 1000 };
}

impl Default for Budget {
    fn default() -> Self {
        Budget::STANDARD
    }
}

/// `quick`, `standard`, `full`, or `max_n=7,points=30` (either key optional).
impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => return Ok(Budget::QUICK),
            "standard" => return Ok(Budget::STANDARD),
            "full" => return Ok(Budget::FULL),
            _ => {}
        }
        let mut b = Budget::STANDARD;
        for part in s.split(',') {
            let Some((key, value)) = part.split_once('=') else {
                return input(format!("bad budget `{s}`"));
            };
            let value: usize =
                value.trim().parse().map_err(|_| Error::Input(format!("bad budget value `{value}`")))?;
            match key.trim() {
                "max_n" => b.max_n = value,
                "points" => b.max_points = value,
                other => return input(format!("unknown budget key `{other}`")),
            }
        }
        if b.max_n < 3 || b.max_points == 0 {
            return input("budget needs max_n ≥ 3 and at least one point");
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No sampled point had an equilibrium to test.
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
        })
    }
}

/// Everything needed to replay a network with `eq check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceDump {
    /// Instance-file text, when the game has exactly one green and one blue class.
    pub file: Option<String>,
    pub classes: Vec<(Group, Vec<String>)>,
    pub class_of: Vec<usize>,
    pub gamma: String,
    pub recs: Vec<(usize, usize)>,
    pub network: Vec<(usize, usize)>,
}

impl InstanceDump {
    fn new(inst: &Instance, params: Option<(&Population, &ParamPoint)>, net: &Network) -> Self {
        let file = params.map(|(pop, params)| {
            InstanceFile {
                population: pop.clone(),
                params: params.clone(),
                recs: Some(inst.recs().clone()),
                network: Some(net.clone()),
            }
            .to_text()
        });
        Self {
            file,
            classes: inst
                .classes()
                .iter()
                .map(|(g, d)| (*g, d.probs().iter().map(format_rational).collect()))
                .collect(),
            class_of: (0..inst.n()).map(|i| inst.class_of(i)).collect(),
            gamma: format_rational(inst.gamma()),
            recs: inst.recs().edges(),
            network: net.edges(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub claim: String,
    pub detail: String,
    pub instances: Vec<InstanceDump>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub verdict: Verdict,
    pub budget: Budget,
    /// Points whose hypotheses hold and whose games could be built.
    pub points_sampled: usize,
    /// Points where every compared game had at least one equilibrium.
    pub points_non_vacuous: usize,
    pub equilibria_checked: usize,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Default)]
struct Outcome {
    built: bool,
    non_vacuous: bool,
    equilibria: usize,
    failures: Vec<Failure>,
    notes: Vec<String>,
}

impl Outcome {
    fn fail(&mut self, claim: &str, detail: String, instances: Vec<InstanceDump>) {
        self.failures.push(Failure { claim: claim.into(), detail, instances });
    }
}

/// A population and policy, with its game and equilibria.
struct Game {
    pop: Population,
    params: ParamPoint,
    inst: Instance,
    equilibria: Vec<Network>,
}

impl Game {
    fn build(pop: &Population, params: &ParamPoint, budget: &Budget) -> Result<Option<Self>> {
        let recs = match construct_recommendations(pop, params) {
            Ok(r) => r.into_network(),
            Err(Error::Feasibility(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let inst = Instance::from_population(pop, params.gamma.clone(), recs)?;
        let opts = EnumerateOptions { max_n: budget.max_n, ..Default::default() };
        let equilibria = enumerate_equilibria(&inst, &opts)?.equilibria;
        Ok(Some(Self { pop: pop.clone(), params: params.clone(), inst, equilibria }))
    }

    fn dump(&self, net: &Network) -> InstanceDump {
        InstanceDump::new(&self.inst, Some((&self.pop, &self.params)), net)
    }

    /// Facts every equilibrium must satisfy: `Q ⊆ E` and degrees at most `⌊1/γ⌋ + k`.
    fn check_facts(&self, out: &mut Outcome) {
        let cap = self.params.degree_cap();
        for net in &self.equilibria {
            if !self.inst.recs().is_subgraph_of(net) {
                out.fail("recommended links form", "Q is not contained in E".into(), vec![self.dump(net)]);
            }
            if net.max_degree() > cap {
                out.fail(
                    "degree cap",
                    format!("max degree {} exceeds ⌊1/γ⌋ + k = {cap}", net.max_degree()),
                    vec![self.dump(net)],
                );
            }
        }
    }

    fn extremes(&self, f: impl Fn(&Network) -> Result<Rational>) -> Result<Option<(Rational, usize, Rational, usize)>> {
        let mut best: Option<(Rational, usize, Rational, usize)> = None;
        for (idx, net) in self.equilibria.iter().enumerate() {
            let v = f(net)?;
            best = Some(match best {
                None => (v.clone(), idx, v, idx),
                Some((lo, li, hi, hi_i)) => {
                    let (lo, li) = if v < lo { (v.clone(), idx) } else { (lo, li) };
                    let (hi, hi_i) = if v > hi { (v, idx) } else { (hi, hi_i) };
                    (lo, li, hi, hi_i)
                }
            });
        }
        Ok(best)
    }
}

fn two_point(p0: &Rational) -> OpportunityDistribution {
    OpportunityDistribution::two_point(p0.clone()).expect("grid probabilities lie in [0, 1]")
}

fn dist(probs: &[(i64, i64)]) -> OpportunityDistribution {
    OpportunityDistribution::new(probs.iter().map(|&(a, b)| ratio(a, b)).collect()).expect("grid distributions are valid")
}

/// `(|G|, |B|)` with `|G| ≥ 2`, `1 ≤ |B| ≤ |G|`, and `n ≤ max_n`, by size.
fn populations(max_n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        for b in 1..=n / 2 {
            out.push((n - b, b));
        }
    }
    out
}

/// Evenly spaced picks so a small budget still spans the grid.
fn spread<T: Clone>(items: Vec<T>, max: usize) -> Vec<T> {
    if items.len() <= max {
        return items;
    }
    (0..max).map(|i| items[i * items.len() / max].clone()).collect()
}

/// `b0(1 − b0 − b1)`, the value of a link to a blue for an isolated node.
fn link_value(d: &OpportunityDistribution) -> Rational {
    d.p0().clone() * d.tail(2)
}

/// The explicit blue threshold `g0 / (1 − (1 − g0)(1 − γ μ_G(⌊1/γ⌋))^k)`.
pub fn blue_threshold(green: &OpportunityDistribution, gamma: &Rational, k: usize) -> Rational {
    let d = crate::model::ParamPoint::new(gamma.clone(), 0, Rational::zero())
        .map(|p| p.degree_cap())
        .unwrap_or(0);
    let base = Rational::one() - gamma.clone() * green.mu(d);
    let mut pow = Rational::one();
    for _ in 0..k {
        pow *= base.clone();
    }
    green.p0().clone() / (Rational::one() - (Rational::one() - green.p0().clone()) * pow)
}

#[derive(Clone)]
struct Point {
    pop: Population,
    params: ParamPoint,
}

fn prop1_points(budget: &Budget) -> Vec<Point> {
    let greens = [dist(&[(1, 2), (0, 1), (1, 2)]), dist(&[(1, 4), (0, 1), (3, 4)]), dist(&[(1, 2), (1, 4), (1, 4)])];
    let blues = [dist(&[(9, 10), (0, 1), (1, 10)]), dist(&[(24, 25), (0, 1), (1, 25)]), dist(&[(4, 5), (1, 10), (1, 10)])];
    let mut grid = Vec::new();
    for (ng, nb) in populations(budget.max_n) {
        for g in &greens {
            for b in &blues {
                let (lo, hi) = (link_value(b), link_value(g));
                if lo >= hi {
                    continue;
                }
                for t in [(1, 4), (1, 2), (3, 4)] {
                    let gamma = lo.clone() + (hi.clone() - lo.clone()) * ratio(t.0, t.1);
                    let pop = Population::new(ng, nb, g.clone(), b.clone()).expect("valid population");
                    let params = ParamPoint::new(gamma, 0, Rational::zero()).expect("valid params");
                    grid.push(Point { pop, params });
                }
            }
        }
    }
    // Two greens and two blues with `γ` inside the interval always run.
    let mut out = vec![Point {
        pop: Population::new(2, 2, greens[0].clone(), blues[0].clone()).expect("valid population"),
        params: ParamPoint::new(ratio(1, 10), 0, Rational::zero()).expect("valid params"),
    }];
    out.extend(spread(grid, budget.max_points.saturating_sub(1)));
    out
}

/// Cross-group policies with blues at or above the explicit threshold.
fn cross_group_points(budget: &Budget, g0s: &[Rational]) -> Vec<Point> {
    let mut grid = Vec::new();
    for (ng, nb) in populations(budget.max_n) {
        for k in [1, 2] {
            for g0 in g0s {
                for gamma in [ratio(1, 25), ratio(1, 10), ratio(1, 5)] {
                    let g = two_point(g0);
                    let floor = blue_threshold(&g, &gamma, k);
                    if floor >= Rational::one() {
                        continue;
                    }
                    for t in [(0, 1), (1, 2)] {
                        let b0 = floor.clone() + (Rational::one() - floor.clone()) * ratio(t.0, t.1);
                        let pop = Population::new(ng, nb, g.clone(), two_point(&b0)).expect("valid population");
                        let params = ParamPoint::new(gamma.clone(), k, Rational::one()).expect("valid params");
                        if params.green_cross(&pop).is_none() || params.sigma(&pop) > Rational::one() {
                            continue;
                        }
                        grid.push(Point { pop, params });
                    }
                }
            }
        }
    }
    spread(grid, budget.max_points)
}

fn g0_lines() -> Vec<Rational> {
    vec![ratio(1, 4), ratio(1, 2), ratio(3, 4)]
}

fn low_g0_lines() -> Vec<Rational> {
    vec![ratio(1, 4), ratio(3, 8), ratio(1, 2)]
}

fn facially_neutral(p: &Point) -> ParamPoint {
    ParamPoint::new(p.params.gamma.clone(), 0, Rational::zero()).expect("valid params")
}

fn check_prop1(p: &Point, budget: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    let Some(game) = Game::build(&p.pop, &p.params, budget)? else { return Ok(out) };
    out.built = true;
    game.check_facts(&mut out);
    out.non_vacuous = !game.equilibria.is_empty();
    out.equilibria = game.equilibria.len();
    let exo = p.pop.exogenous_utility_ratio()?;
    for net in &game.equilibria {
        let ur = utility_ratio::<Rational>(&game.inst, net)?;
        if ur <= exo {
            out.fail(
                "UR(E) > UR(∅)",
                format!("UR(E) = {} but UR(∅) = {}", format_rational(&ur), format_rational(&exo)),
                vec![game.dump(net)],
            );
        }
        let utils = utilities::<Rational>(&game.inst, net)?;
        for (i, u) in utils.iter().enumerate() {
            let exo_i = Rational::one() - game.inst.dist(i).p0().clone();
            if *u > exo_i && game.inst.group(i) != Group::Green {
                out.fail(
                    "only greens gain",
                    format!("blue node {i} has utility {} > {}", format_rational(u), format_rational(&exo_i)),
                    vec![game.dump(net)],
                );
            }
        }
    }
    Ok(out)
}

fn check_prop2(p: &Point, budget: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    let Some(game) = Game::build(&p.pop, &p.params, budget)? else { return Ok(out) };
    out.built = true;
    game.check_facts(&mut out);
    out.non_vacuous = !game.equilibria.is_empty();
    out.equilibria = game.equilibria.len();
    let exo = p.pop.exogenous_utility_ratio()?;
    for net in &game.equilibria {
        let ur = utility_ratio::<Rational>(&game.inst, net)?;
        if ur >= exo {
            out.fail(
                "UR(E) < UR(∅)",
                format!("UR(E) = {} but UR(∅) = {}", format_rational(&ur), format_rational(&exo)),
                vec![game.dump(net)],
            );
        }
    }
    Ok(out)
}

/// Compares every equilibrium of `better` against every one of `worse`
/// under `metric`, through the extremes.
fn compare(
    out: &mut Outcome,
    claim: &str,
    better: &Game,
    worse: &Game,
    metric: impl Fn(&Game, &Network) -> Result<Rational>,
) -> Result<()> {
    let lo = better.extremes(|n| metric(better, n))?;
    let hi = worse.extremes(|n| metric(worse, n))?;
    if let (Some((lo, li, _, _)), Some((_, _, hi, hi_i))) = (lo, hi) {
        if lo <= hi {
            out.fail(
                claim,
                format!("{} ≤ {}", format_rational(&lo), format_rational(&hi)),
                vec![better.dump(&better.equilibria[li]), worse.dump(&worse.equilibria[hi_i])],
            );
        }
    }
    Ok(())
}

fn paired(p: &Point, other: &ParamPoint, budget: &Budget, out: &mut Outcome) -> Result<Option<(Game, Game)>> {
    let Some(a) = Game::build(&p.pop, &p.params, budget)? else { return Ok(None) };
    let Some(b) = Game::build(&p.pop, other, budget)? else { return Ok(None) };
    out.built = true;
    a.check_facts(out);
    b.check_facts(out);
    out.equilibria = a.equilibria.len() + b.equilibria.len();
    out.non_vacuous = !a.equilibria.is_empty() && !b.equilibria.is_empty();
    Ok(Some((a, b)))
}

fn check_corollary1(p: &Point, budget: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    if let Some((with_k, neutral)) = paired(p, &facially_neutral(p), budget, &mut out)? {
        compare(&mut out, "UR(E_0) > UR(E_k)", &neutral, &with_k, |g, n| utility_ratio::<Rational>(&g.inst, n))?;
    }
    Ok(out)
}

fn check_welfare(p: &Point, lower: &ParamPoint, budget: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    if let Some((high, low)) = paired(p, lower, budget, &mut out)? {
        let tag = |what: &str| {
            format!(
                "{what}: k={} ρ={} beats k={} ρ={}",
                p.params.k,
                format_rational(&p.params.rho),
                lower.k,
                format_rational(&lower.rho)
            )
        };
        compare(&mut out, &tag("utilitarian"), &high, &low, |g, n| welfare_utilitarian::<Rational>(&g.inst, n))?;
        compare(&mut out, &tag("rawlsian"), &high, &low, |g, n| welfare_rawlsian::<Rational>(&g.inst, n))?;
    }
    Ok(out)
}

/// Only a zero share is below every admissible gap; higher shares are
/// compared too and reported as notes.
fn check_prop4(p: &Point, budget: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    let k = p.params.k;
    let top = p.params.blue_cross();
    let mut unbeaten = Vec::new();
    for lower in 0..top {
        let rho = ratio(lower as i64, k as i64);
        let params = ParamPoint::new(p.params.gamma.clone(), k, rho.clone())?;
        let part = check_welfare(p, &params, budget)?;
        if !part.built {
            continue;
        }
        if lower == 0 {
            out.built = true;
            out.non_vacuous = part.non_vacuous;
            out.failures.extend(part.failures);
        } else if !part.failures.is_empty() {
            unbeaten.push(format_rational(&rho));
        }
        out.equilibria += part.equilibria;
    }
    if !unbeaten.is_empty() {
        out.notes.push(format!(
            "n = ({}, {}), k = {k}, ρ = {}, γ = {}: not ahead of ρ' ∈ {{{}}}",
            p.pop.n_green,
            p.pop.n_blue,
            format_rational(&p.params.rho),
            format_rational(&p.params.gamma),
            unbeaten.join(", ")
        ));
    }
    Ok(out)
}

/// `(k, ρ)` policies above zero cross-group share, for the share comparison.
fn share_points(budget: &Budget) -> Vec<Point> {
    let mut grid = Vec::new();
    for (ng, nb) in populations(budget.max_n) {
        for (k, rho) in [(1, ratio(1, 1)), (2, ratio(1, 1)), (2, ratio(1, 2))] {
            for g0 in low_g0_lines() {
                for gamma in [ratio(1, 25), ratio(1, 10), ratio(1, 5)] {
                    let g = two_point(&g0);
                    let floor = blue_threshold(&g, &gamma, k);
                    if floor >= Rational::one() {
                        continue;
                    }
                    let b0 = (floor + Rational::one()) / int(2);
                    let pop = Population::new(ng, nb, g, two_point(&b0)).expect("valid population");
                    let params = ParamPoint::new(gamma, k, rho.clone()).expect("valid params");
                    if params.green_cross(&pop).is_none() {
                        continue;
                    }
                    grid.push(Point { pop, params });
                }
            }
        }
    }
    spread(grid, budget.max_points)
}

fn check_lemma1(p: &Point, budget: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    let Some(game) = Game::build(&p.pop, &p.params, budget)? else { return Ok(out) };
    out.built = true;
    game.check_facts(&mut out);
    out.non_vacuous = !game.equilibria.is_empty();
    out.equilibria = game.equilibria.len();
    let c = reciprocity_constant(&p.params);
    for net in &game.equilibria {
        for eps in epsilons() {
            let report = reciprocity_audit(&game.inst, net, &eps)?;
            let allowed = c.clone() / eps.clone();
            if int(report.violators.len()) > allowed {
                out.fail(
                    "violators ≤ C(γ,k)/ε",
                    format!(
                        "ε = {}: {} violators, bound {}",
                        format_rational(&eps),
                        report.violators.len(),
                        format_rational(&allowed)
                    ),
                    vec![game.dump(net)],
                );
            }
        }
    }
    Ok(out)
}

fn epsilons() -> [Rational; 3] {
    [ratio(1, 100), ratio(1, 10), ratio(1, 1)]
}

/// Constructed symmetric equilibria at the smallest population with an
/// unlinked equal-degree peer for every node must audit clean.
fn check_constructed(gamma: &Rational, k: usize, rho: &Rational, g0: &Rational, b0: &Rational) -> Result<Outcome> {
    let mut out = Outcome::default();
    let params = ParamPoint::new(gamma.clone(), k, rho.clone())?;
    let Some((pop, built)) = smallest_symmetric_population(&two_point(g0), &two_point(b0), &params, 40, true)? else {
        return Ok(out);
    };
    out.built = true;
    out.non_vacuous = true;
    out.equilibria = 1;
    for eps in epsilons() {
        let report = reciprocity_audit(&built.instance, &built.network, &eps)?;
        if !report.violators.is_empty() {
            out.fail(
                "constructed equilibria audit clean",
                format!("ε = {}: violators {:?}", format_rational(&eps), report.violators),
                vec![InstanceDump::new(&built.instance, Some((&pop, &params)), &built.network)],
            );
        }
    }
    Ok(out)
}

/// The three-node game with one green-leaning, one middle, and one
/// blue-leaning node, `γ = 3ε²/2`.
pub fn three_node_game(eps: &Rational) -> Instance {
    let e = |c: i64| eps.clone() * ratio(c, 1);
    let mid = Rational::one() - e(4);
    let classes = vec![
        (Group::Green, OpportunityDistribution::new(vec![e(1), mid.clone(), e(3)]).expect("ε < 1/12")),
        (Group::Green, OpportunityDistribution::new(vec![e(2), mid.clone(), e(2)]).expect("ε < 1/12")),
        (Group::Blue, OpportunityDistribution::new(vec![e(3), mid, e(1)]).expect("ε < 1/12")),
    ];
    Instance::new(classes, vec![0, 1, 2], eps.clone() * eps.clone() * ratio(3, 2), Network::empty(3))
        .expect("valid three-node game")
}

fn check_notes(eps: &Rational) -> Result<Outcome> {
    let mut out = Outcome { built: true, ..Default::default() };
    let inst = three_node_game(eps);
    let dump = |net: &Network| InstanceDump::new(&inst, None, net);
    let pair = Network::from_edges(3, [(0, 1)])?;
    match is_dfpn(&inst, &pair)?.witness() {
        Some(w) if w.kind == DefectionKind::AddWithSevering && w.pair == (1, 2) => {}
        other => out.fail(
            "{(g,m)} is broken by m adding (m,b)",
            format!("ε = {}: got {other:?}", format_rational(eps)),
            vec![dump(&pair)],
        ),
    }
    let mut counts = Vec::new();
    for scoring in [PairScoring::Separate, PairScoring::Joint] {
        let opts = EnumerateOptions { max_n: 3, scoring, ..Default::default() };
        let found = enumerate_equilibria(&inst, &opts)?.equilibria;
        counts.push(found.len());
        out.equilibria += found.len();
        if scoring == PairScoring::Separate && !found.is_empty() {
            out.fail(
                "no equilibria",
                format!("ε = {}: {} equilibria", format_rational(eps), found.len()),
                found.iter().map(dump).collect(),
            );
        }
    }
    out.notes.push(format!(
        "ε = {}: {} equilibria with each side scored on its own severances, {} with both sides scored on the whole deviation",
        format_rational(eps),
        counts[0],
        counts[1]
    ));
    out.non_vacuous = true;
    Ok(out)
}

fn lemma1_constructed() -> Vec<(Rational, usize, Rational, Rational, Rational)> {
    let mut out = Vec::new();
    for gamma in [ratio(1, 25), ratio(1, 10)] {
        for (k, rho) in [(0, ratio(0, 1)), (1, ratio(1, 1)), (2, ratio(1, 2))] {
            for g0 in g0_lines() {
                out.push((gamma.clone(), k, rho.clone(), g0, ratio(24, 25)));
            }
        }
    }
    out
}

pub fn run_suite(suite: Suite, budget: &Budget) -> Result<SuiteReport> {
    let outcomes: Vec<Outcome> = match suite {
        Suite::Prop1 => eval(prop1_points(budget), |p| check_prop1(p, budget))?,
        Suite::Prop2 => eval(cross_group_points(budget, &g0_lines()), |p| check_prop2(p, budget))?,
        Suite::Corollary1 => eval(cross_group_points(budget, &g0_lines()), |p| check_corollary1(p, budget))?,
        Suite::Prop3 => eval(cross_group_points(budget, &low_g0_lines()), |p| {
            check_welfare(p, &facially_neutral(p), budget)
        })?,
        Suite::Prop4 => eval(share_points(budget), |p| check_prop4(p, budget))?,
        Suite::Lemma1 => {
            let half = Budget { max_points: budget.max_points.div_ceil(2), ..*budget };
            let mut pts = prop1_points(&half);
            pts.extend(cross_group_points(&half, &g0_lines()));
            let mut out = eval(pts, |p| check_lemma1(p, budget))?;
            let built: Vec<Outcome> = lemma1_constructed()
                .par_iter()
                .map(|(gamma, k, rho, g0, b0)| check_constructed(gamma, *k, rho, g0, b0))
                .collect::<Result<_>>()?;
            out.extend(built);
            out
        }
        Suite::Facts => {
            let third = Budget { max_points: budget.max_points.div_ceil(3), ..*budget };
            let mut pts = prop1_points(&third);
            pts.extend(cross_group_points(&third, &g0_lines()));
            pts.extend(share_points(&third));
            eval(pts, |p| {
                let mut out = Outcome::default();
                if let Some(game) = Game::build(&p.pop, &p.params, budget)? {
                    out.built = true;
                    game.check_facts(&mut out);
                    out.non_vacuous = !game.equilibria.is_empty();
                    out.equilibria = game.equilibria.len();
                }
                Ok(out)
            })?
        }
        Suite::NotesExamples => [ratio(1, 50), ratio(1, 20)].iter().map(check_notes).collect::<Result<_>>()?,
    };
    Ok(summarize(suite, budget, outcomes))
}

fn eval(points: Vec<Point>, f: impl Fn(&Point) -> Result<Outcome> + Sync + Send) -> Result<Vec<Outcome>> {
    points.par_iter().map(f).collect()
}

fn summarize(suite: Suite, budget: &Budget, outcomes: Vec<Outcome>) -> SuiteReport {
    let built: Vec<&Outcome> = outcomes.iter().filter(|o| o.built).collect();
    let failures: Vec<Failure> = built.iter().flat_map(|o| o.failures.iter().cloned()).collect();
    let non_vacuous = built.iter().filter(|o| o.non_vacuous).count();
    let verdict = if !failures.is_empty() {
        Verdict::Fail
    } else if non_vacuous == 0 {
        Verdict::Vacuous
    } else {
        Verdict::Pass
    };
    SuiteReport {
        suite,
        verdict,
        budget: *budget,
        points_sampled: built.len(),
        points_non_vacuous: non_vacuous,
        equilibria_checked: built.iter().map(|o| o.equilibria).sum(),
        failure_count: failures.len(),
        failures: failures.into_iter().take(MAX_REPORTED_FAILURES).collect(),
        notes: built.iter().flat_map(|o| o.notes.iter().cloned()).collect(),
    }
}
