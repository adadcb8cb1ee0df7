//! Parameter sweeps behind the four figures.
//!
//! Figures 1 and 2 walk a grid of exogenous utility ratios `UR(∅)` and set
//! `b0 = 1 − (1 − g0)/UR(∅)` for each green line; they report the range of
//! `UR(E)`. Figures 3 and 4 hold `UR(∅)` fixed, vary `k` or `ρ`, and report
//! mean utility minus mean exogenous utility. Distributions are two-point on
//! `{0, 2}` throughout.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{ur_envelope, utility_envelope_asymptotic, welfare_envelope};
use crate::equilibrium::{enumerate_equilibria, EnumerateOptions};
use crate::error::{input, Error, Result};
use crate::model::{utility_ratio, welfare_utilitarian, Group, Instance, OpportunityDistribution, ParamPoint, Population};
use crate::recsets::construct_recommendations;
use crate::scalar::{int, parse_rational, rational_to_f64, ratio, Rational};

use super::format_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn id(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    /// Whether the metric is a utility ratio (as opposed to welfare).
    pub fn is_ratio(self) -> bool {
        matches!(self, Figure::Fig1 | Figure::Fig2)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::Input(format!("unknown figure `{s}` (expected fig1..fig4)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// Extremes over feasible degree pairs.
    FiniteEnvelope,
    /// The large-population closed forms.
    Asymptotic,
    /// Extremes over every equilibrium of a small population.
    BruteForce,
}

/// A number written either as a TOML float/integer or as a string such as
/// `"1/25"`. Floats are read through their shortest decimal form, so `0.04`
/// means exactly `1/25`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Number::Int(i) => Ok(ratio(*i, 1)),
            Number::Float(x) if x.is_finite() => parse_rational(&x.to_string()),
            Number::Float(x) => input(format!("non-finite number {x}")),
            Number::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: Number,
    pub stop: Number,
    pub step: Number,
}

/// Config-file overrides; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOverrides {
    pub mode: Option<SweepMode>,
    pub g0: Option<Vec<Number>>,
    pub gamma: Option<Number>,
    pub k: Option<Vec<usize>>,
    pub rho: Option<Vec<Number>>,
    /// Grid of `UR(∅)` values (figures 1 and 2).
    pub ur_exo: Option<Range>,
    /// Fixed `UR(∅)` (figures 3 and 4).
    pub ur_exo_fixed: Option<Number>,
    pub n_green: Option<usize>,
    pub n_blue: Option<usize>,
    pub max_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub figure: Figure,
    pub mode: SweepMode,
    pub g0: Vec<Rational>,
    pub gamma: Rational,
    /// `(k, ρ)` combinations, in output order.
    pub policies: Vec<(usize, Rational)>,
    /// `UR(∅)` values, in output order.
    pub ur_exo: Vec<Rational>,
    pub n_green: usize,
    pub n_blue: usize,
    pub max_n: usize,
}

fn g0_lines() -> Vec<Rational> {
    [(1, 4), (3, 8), (1, 2), (5, 8), (3, 4)].iter().map(|&(a, b)| ratio(a, b)).collect()
}

fn grid(start: &Rational, stop: &Rational, step: &Rational) -> Result<Vec<Rational>> {
    if !step.is_positive() {
        return input("grid step must be positive");
    }
    let mut out = Vec::new();
    let mut x = start.clone();
    while x <= *stop {
        out.push(x.clone());
        x += step;
        if out.len() > 1_000_000 {
            return input("grid has more than a million points");
        }
    }
    if out.is_empty() {
        return input("grid is empty");
    }
    Ok(out)
}

use num_traits::Signed;

impl SweepSpec {
    pub fn defaults(figure: Figure) -> Self {
        let ur_grid = grid(&int(1), &int(20), &ratio(1, 20)).expect("default grid is valid");
        let (gamma, policies, ur_exo) = match figure {
            Figure::Fig1 => (ratio(1, 25), vec![(0, int(0))], ur_grid),
            Figure::Fig2 => (ratio(1, 25), vec![(1, int(1))], ur_grid),
            Figure::Fig3 => (
                ratio(1, 50),
                (0..=10).map(|k| (k, if k == 0 { int(0) } else { int(1) })).collect(),
                vec![int(2)],
            ),
            Figure::Fig4 => (ratio(1, 50), (0..=5).map(|r| (5, ratio(r, 5))).collect(), vec![int(2)]),
        };
        Self {
            figure,
            mode: SweepMode::FiniteEnvelope,
            g0: g0_lines(),
            gamma,
            policies,
            ur_exo,
            n_green: 1,
            n_blue: 1,
            max_n: 8,
        }
    }

    pub fn with_overrides(figure: Figure, o: &SweepOverrides) -> Result<Self> {
        let mut spec = Self::defaults(figure);
        if let Some(mode) = o.mode {
            spec.mode = mode;
        }
        if let Some(g0) = &o.g0 {
            spec.g0 = g0.iter().map(Number::to_rational).collect::<Result<_>>()?;
        }
        if let Some(gamma) = &o.gamma {
            spec.gamma = gamma.to_rational()?;
        }
        match (&o.k, &o.rho) {
            (None, None) => {}
            (k, rho) => {
                let ks = k.clone().unwrap_or_else(|| spec.policies.iter().map(|p| p.0).collect());
                let rhos: Vec<Rational> = match rho {
                    Some(r) => r.iter().map(Number::to_rational).collect::<Result<_>>()?,
                    None => vec![spec.policies[0].1.clone()],
                };
                spec.policies = ks
                    .iter()
                    .flat_map(|&k| {
                        let rhos = &rhos;
                        rhos.iter().map(move |r| (k, if k == 0 { Rational::zero() } else { r.clone() }))
                    })
                    .collect();
                spec.policies.dedup();
            }
        }
        if let Some(r) = &o.ur_exo {
            spec.ur_exo = grid(&r.start.to_rational()?, &r.stop.to_rational()?, &r.step.to_rational()?)?;
        }
        if let Some(x) = &o.ur_exo_fixed {
            spec.ur_exo = vec![x.to_rational()?];
        }
        spec.n_green = o.n_green.unwrap_or(spec.n_green);
        spec.n_blue = o.n_blue.unwrap_or(spec.n_blue);
        spec.max_n = o.max_n.unwrap_or(spec.max_n);
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.g0.is_empty() || self.policies.is_empty() || self.ur_exo.is_empty() {
            return input("sweep grids must be non-empty");
        }
        if !self.gamma.is_positive() {
            return input("edge cost must be positive");
        }
        if self.n_green == 0 || self.n_blue == 0 {
            return input("group sizes must be positive");
        }
        Ok(())
    }

    /// Grid points in output order: green lines outermost.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for g0 in &self.g0 {
            for ur in &self.ur_exo {
                for (k, rho) in &self.policies {
                    out.push(GridPoint { g0: g0.clone(), ur_exo: ur.clone(), k: *k, rho: rho.clone() });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub g0: Rational,
    pub ur_exo: Rational,
    pub k: usize,
    pub rho: Rational,
}

impl GridPoint {
    /// `b0` solving `(1 − g0)/(1 − b0) = UR(∅)`.
    pub fn b0(&self) -> Rational {
        Rational::one() - (Rational::one() - self.g0.clone()) / self.ur_exo.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    Inapplicable,
    /// Brute force found no equilibrium.
    Vacuous,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::Inapplicable => "inapplicable",
            RowStatus::Vacuous => "vacuous",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub figure: Figure,
    pub g0: Rational,
    pub b0: Rational,
    pub gamma: Rational,
    pub k: usize,
    pub rho: Rational,
    pub ur_exo: Rational,
    pub metric: Option<(f64, f64)>,
    pub status: RowStatus,
    /// Why the row is not `ok`.
    pub reason: Option<String>,
}

pub const CSV_HEADER: [&str; 10] =
    ["figure", "g0", "b0", "gamma", "k", "rho", "ur_exo", "metric_lower", "metric_upper", "status"];

impl SweepRow {
    pub fn csv_record(&self) -> [String; 10] {
        let num = |r: &Rational| format_sig(rational_to_f64(r));
        let (lo, hi) = match self.metric {
            Some((lo, hi)) => (format_sig(lo), format_sig(hi)),
            None => (String::new(), String::new()),
        };
        [
            self.figure.id().to_string(),
            num(&self.g0),
            num(&self.b0),
            num(&self.gamma),
            self.k.to_string(),
            num(&self.rho),
            num(&self.ur_exo),
            lo,
            hi,
            self.status.to_string(),
        ]
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    spec.points().par_iter().map(|pt| evaluate(spec, pt)).collect()
}

pub fn write_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Input(format!("writing CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.write_record(row.csv_record()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Input(format!("writing CSV: {e}")))
}

fn evaluate(spec: &SweepSpec, pt: &GridPoint) -> SweepRow {
    let b0 = pt.b0();
    let mut row = SweepRow {
        figure: spec.figure,
        g0: pt.g0.clone(),
        b0: b0.clone(),
        gamma: spec.gamma.clone(),
        k: pt.k,
        rho: pt.rho.clone(),
        ur_exo: pt.ur_exo.clone(),
        metric: None,
        status: RowStatus::Inapplicable,
        reason: None,
    };
    match metric(spec, pt, &b0) {
        Ok(Some(m)) => {
            row.metric = Some(m);
            row.status = RowStatus::Ok;
        }
        Ok(None) => row.status = RowStatus::Vacuous,
        Err(e) => row.reason = Some(e.to_string()),
    }
    row
}

fn metric(spec: &SweepSpec, pt: &GridPoint, b0: &Rational) -> Result<Option<(f64, f64)>> {
    let pop = Population::new(
        spec.n_green,
        spec.n_blue,
        OpportunityDistribution::two_point(pt.g0.clone())?,
        OpportunityDistribution::two_point(b0.clone())?,
    )?;
    let params = ParamPoint::new(spec.gamma.clone(), pt.k, pt.rho.clone())?;
    let exo_mean = rational_to_f64(&pop.welfare_exogenous()) / pop.n() as f64;
    match spec.mode {
        SweepMode::FiniteEnvelope => {
            if spec.figure.is_ratio() {
                let ur = ur_envelope::<f64>(&pop, &params)?;
                Ok(Some((ur.lower, ur.upper)))
            } else {
                let w = welfare_envelope::<f64>(&pop, &params)?;
                Ok(Some((w.utilitarian.lower - exo_mean, w.utilitarian.upper - exo_mean)))
            }
        }
        SweepMode::Asymptotic => {
            let green = utility_envelope_asymptotic(Group::Green, &pop, &params)?;
            let blue = utility_envelope_asymptotic(Group::Blue, &pop, &params)?;
            if spec.figure.is_ratio() {
                if blue.lower <= 0.0 {
                    return Err(Error::DegenerateDenominator("blue utility bound is not positive".into()));
                }
                Ok(Some((green.lower / blue.upper, green.upper / blue.lower)))
            } else {
                let (ng, nb) = (pop.n_green as f64, pop.n_blue as f64);
                let mean = |g: f64, b: f64| (ng * g + nb * b) / (ng + nb) - exo_mean;
                Ok(Some((mean(green.lower, blue.lower), mean(green.upper, blue.upper))))
            }
        }
        SweepMode::BruteForce => {
            let recs = construct_recommendations(&pop, &params)?;
            let inst = Instance::from_population(&pop, params.gamma.clone(), recs.into_network())?;
            let opts = EnumerateOptions { max_n: spec.max_n, ..Default::default() };
            let found = enumerate_equilibria(&inst, &opts)?;
            let mut values = Vec::with_capacity(found.equilibria.len());
            for net in &found.equilibria {
                values.push(if spec.figure.is_ratio() {
                    utility_ratio::<f64>(&inst, net)?
                } else {
                    welfare_utilitarian::<f64>(&inst, net)? / pop.n() as f64 - exo_mean
                });
            }
            let lo = values.iter().cloned().reduce(f64::min);
            let hi = values.iter().cloned().reduce(f64::max);
            Ok(lo.zip(hi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(figure: Figure) -> SweepSpec {
        let mut spec = SweepSpec::defaults(figure);
        if figure.is_ratio() {
            spec.ur_exo = grid(&int(1), &int(3), &ratio(1, 2)).unwrap();
        }
        spec
    }

    #[test]
    fn defaults_follow_the_figures() {
        let f1 = SweepSpec::defaults(Figure::Fig1);
        assert_eq!(f1.ur_exo.len(), 381);
        assert_eq!(f1.policies, vec![(0, int(0))]);
        let f3 = SweepSpec::defaults(Figure::Fig3);
        assert_eq!(f3.policies.len(), 11);
        assert_eq!(f3.points()[0].b0(), ratio(5, 8));
        let f4 = SweepSpec::defaults(Figure::Fig4);
        assert_eq!(f4.policies.last().unwrap(), &(5, int(1)));
    }

    #[test]
    fn break_even_column_is_inapplicable() {
        let rows = run_sweep(&small(Figure::Fig1));
        assert_eq!(rows.len(), 5 * 5);
        for row in &rows {
            let first = row.ur_exo == int(1);
            assert_eq!(row.status == RowStatus::Inapplicable, first, "{row:?}");
            assert_eq!(row.b0 == row.g0, first);
        }
    }

    #[test]
    fn csv_is_stable() {
        let spec = small(Figure::Fig3);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&run_sweep(&spec), &mut a).unwrap();
        write_csv(&run_sweep(&spec), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("figure,g0,b0,gamma,k,rho,ur_exo,metric_lower,metric_upper,status\n"));
        assert!(text.lines().nth(1).unwrap().starts_with("fig3,0.25,0.625,0.02,0,0,2,"));
    }

    #[test]
    fn overrides_replace_defaults() {
        let o: SweepOverrides = SweepOverrides {
            g0: Some(vec![Number::Float(0.5)]),
            gamma: Some(Number::Text("1/25".into())),
            k: Some(vec![0, 2]),
            rho: Some(vec![Number::Int(1)]),
            ..Default::default()
        };
        let spec = SweepSpec::with_overrides(Figure::Fig3, &o).unwrap();
        assert_eq!(spec.g0, vec![ratio(1, 2)]);
        assert_eq!(spec.gamma, ratio(1, 25));
        assert_eq!(spec.policies, vec![(0, int(0)), (2, int(1))]);
        let bad = SweepOverrides { g0: Some(vec![]), ..Default::default() };
        assert!(SweepSpec::with_overrides(Figure::Fig1, &bad).is_err());
    }

    #[test]
    fn brute_force_mode_reports_vacuous_or_ok() {
        let mut spec = small(Figure::Fig1);
        spec.mode = SweepMode::BruteForce;
        spec.n_green = 2;
        spec.n_blue = 2;
        spec.g0 = vec![ratio(1, 2)];
        let rows = run_sweep(&spec);
        assert!(rows.iter().skip(1).all(|r| r.status != RowStatus::Inapplicable), "{rows:?}");
    }
}
