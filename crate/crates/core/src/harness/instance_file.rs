//! Plain-text instance files.
//!
//! ```text
//! # two greens, two blues
//! n_green = 2
//! n_blue = 2
//! green = 0.5 0 0.5
//! blue = 0.9 0 0.1
//! gamma = 0.04
//! k = 0
//! rho = 0
//!
//! [Q]
//! [E]
//! 0 1
//! ```
//!
//! Distributions list `P(ℓ opportunities)` for `ℓ = 0, 1, …`. Numbers may be
//! decimals or fractions. `[Q]` and `[E]` hold one `u v` pair per line; a
//! missing `[Q]` means the canonical recommendation set for `(k, ρ)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Instance, Network, OpportunityDistribution, ParamPoint, Population};
use crate::recsets::construct_recommendations;
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub population: Population,
    pub params: ParamPoint,
    pub recs: Option<Network>,
    pub network: Option<Network>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Recs,
    Network,
}

fn err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T> {
    Err(Error::Input(format!("line {line}: {msg}")))
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut section = Section::Header;
        let mut keys: Vec<(String, String, usize)> = Vec::new();
        let mut recs: Option<Vec<(usize, usize)>> = None;
        let mut network: Option<Vec<(usize, usize)>> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                section = match line.to_ascii_uppercase().as_str() {
                    "[Q]" => {
                        if recs.replace(Vec::new()).is_some() {
                            return err(line_no, "duplicate [Q] section");
                        }
                        Section::Recs
                    }
                    "[E]" => {
                        if network.replace(Vec::new()).is_some() {
                            return err(line_no, "duplicate [E] section");
                        }
                        Section::Network
                    }
                    _ => return err(line_no, format!("unknown section {line}")),
                };
                continue;
            }
            match section {
                Section::Header => {
                    let Some((key, value)) = line.split_once('=') else {
                        return err(line_no, format!("expected `key = value`, got `{line}`"));
                    };
                    let key = key.trim().to_ascii_lowercase();
                    if keys.iter().any(|(k, _, _)| *k == key) {
                        return err(line_no, format!("duplicate key `{key}`"));
                    }
                    keys.push((key, value.trim().to_string(), line_no));
                }
                Section::Recs | Section::Network => {
                    let nums: Vec<&str> = line.split_whitespace().collect();
                    let parsed: Option<Vec<usize>> = nums.iter().map(|t| t.parse().ok()).collect();
                    let pair = match parsed.as_deref() {
                        Some(&[u, v]) => (u, v),
                        _ => return err(line_no, format!("expected an edge `u v`, got `{line}`")),
                    };
                    let list = if section == Section::Recs { &mut recs } else { &mut network };
                    list.as_mut().expect("section opened").push(pair);
                }
            }
        }

        let get = |name: &str| -> Result<(&str, usize)> {
            keys.iter()
                .find(|(k, _, _)| k == name)
                .map(|(_, v, l)| (v.as_str(), *l))
                .ok_or_else(|| Error::Input(format!("missing key `{name}`")))
        };
        let count = |name: &str| -> Result<usize> {
            let (v, l) = get(name)?;
            v.parse().or_else(|_| err(l, format!("`{name}` must be a non-negative integer")))
        };
        let number = |name: &str| -> Result<Rational> {
            let (v, l) = get(name)?;
            parse_rational(v).or_else(|e| err(l, e))
        };
        let dist = |name: &str| -> Result<OpportunityDistribution> {
            let (v, l) = get(name)?;
            let probs: Result<Vec<Rational>> = v.split_whitespace().map(parse_rational).collect();
            OpportunityDistribution::new(probs.or_else(|e| err(l, e))?).or_else(|e| err(l, e))
        };
        for (k, _, l) in &keys {
            if !["n_green", "n_blue", "green", "blue", "gamma", "k", "rho"].contains(&k.as_str()) {
                return err(*l, format!("unknown key `{k}`"));
            }
        }
        let population = Population::new(count("n_green")?, count("n_blue")?, dist("green")?, dist("blue")?)?;
        let rho = if keys.iter().any(|(k, _, _)| k == "rho") { number("rho")? } else { Rational::from_integer(0.into()) };
        let params = ParamPoint::new(number("gamma")?, count("k")?, rho)?;
        let n = population.n();
        let build = |edges: Option<Vec<(usize, usize)>>| edges.map(|e| Network::from_edges(n, e)).transpose();
        Ok(Self { population, params, recs: build(recs)?, network: build(network)? })
    }

    /// The explicit `[Q]`, or the canonical set when none was given.
    pub fn recommendations(&self) -> Result<Network> {
        match &self.recs {
            Some(q) => Ok(q.clone()),
            None => Ok(construct_recommendations(&self.population, &self.params)?.into_network()),
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        Instance::from_population(&self.population, self.params.gamma.clone(), self.recommendations()?)
    }

    /// The `[E]` network, required by commands that examine one.
    pub fn network(&self) -> Result<&Network> {
        self.network.as_ref().ok_or_else(|| Error::Input("instance file has no [E] section".into()))
    }

    pub fn to_text(&self) -> String {
        let dist = |d: &OpportunityDistribution| {
            d.probs().iter().map(format_rational).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        let pop = &self.population;
        let _ = writeln!(out, "n_green = {}", pop.n_green);
        let _ = writeln!(out, "n_blue = {}", pop.n_blue);
        let _ = writeln!(out, "green = {}", dist(&pop.green));
        let _ = writeln!(out, "blue = {}", dist(&pop.blue));
        let _ = writeln!(out, "gamma = {}", format_rational(&self.params.gamma));
        let _ = writeln!(out, "k = {}", self.params.k);
        let _ = writeln!(out, "rho = {}", format_rational(&self.params.rho));
        for (name, net) in [("Q", &self.recs), ("E", &self.network)] {
            if let Some(net) = net {
                let _ = writeln!(out, "\n[{name}]");
                for (u, v) in net.edges() {
                    let _ = writeln!(out, "{u} {v}");
                }
            }
        }
        out
    }
}
