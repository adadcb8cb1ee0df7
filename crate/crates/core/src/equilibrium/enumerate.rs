//! Exhaustive search for every DFPN network of a small instance.
//!
//! The search fixes the recommended links when they are certain to form,
//! drops organic pairs that could never survive a severance check, caps each
//! node's organic degree at `⌊p0/γ⌋`, and walks the remaining pairs
//! depth-first. Partial assignments are abandoned once some included link is
//! sure to be severed or some excluded pair is sure to be added, whatever the
//! undecided pairs become. Surviving complete networks go through the full
//! checker.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{organic_cap, Instance, Network};
use crate::scalar::Rational;

use super::{Checker, PairScoring, FILTER_TOL};

/// Largest population the bitmask search supports.
const HARD_MAX_N: usize = 11;
/// Largest symmetry group enumerated for canonical search.
const MAX_SYMMETRIES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_n: usize,
    /// Check one network per symmetry orbit and expand the orbit afterwards.
    pub canonicalize: bool,
    /// Abandon partial assignments that cannot complete to an equilibrium.
    pub prune: bool,
    pub scoring: PairScoring,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { max_n: 8, canonicalize: false, prune: true, scoring: PairScoring::Separate }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// Every equilibrium, sorted by edge list.
    pub equilibria: Vec<Network>,
    /// Whether recommended links were fixed rather than searched.
    pub recommendations_forced: bool,
    /// Complete networks handed to the checker.
    pub networks_checked: u64,
}

/// All DFPN networks of `inst`.
///
/// Recommended links are fixed in place when every node has `p0 > 0` and a
/// positive chance of surplus, since a missing one is then always a
/// profitable add; otherwise they are searched like any other pair.
pub fn enumerate_equilibria(inst: &Instance, opts: &EnumerateOptions) -> Result<Enumeration> {
    let n = inst.n();
    if n > opts.max_n || n > HARD_MAX_N {
        return Err(Error::Resource(format!(
            "population of {n} exceeds the enumeration limit of {}",
            opts.max_n.min(HARD_MAX_N)
        )));
    }
    let checker = Checker::new(inst, opts.scoring);
    let mut search = Search::new(&checker, opts)?;
    search.dfs(0);
    let mut equilibria = search.results;
    equilibria.sort_by_key(Network::edges);
    equilibria.dedup();
    Ok(Enumeration {
        equilibria,
        recommendations_forced: search.forced,
        networks_checked: search.checked,
    })
}

struct Search<'c> {
    checker: &'c Checker<'c>,
    n: usize,
    prune: bool,
    forced: bool,
    /// Pairs to decide, in lexicographic order, and whether each is organic.
    free: Vec<(usize, usize)>,
    free_organic: Vec<bool>,
    included: Vec<bool>,
    adj: Vec<u32>,
    organic_deg: Vec<usize>,
    undecided: Vec<usize>,
    organic_cap: Vec<usize>,
    /// Upper bound on each node's final degree from recommendations and caps.
    degree_ceiling: Vec<usize>,
    symmetries: Vec<Vec<usize>>,
    pair_index: Vec<Vec<usize>>,
    results: Vec<Network>,
    checked: u64,
}

impl<'c> Search<'c> {
    fn new(checker: &'c Checker<'c>, opts: &EnumerateOptions) -> Result<Self> {
        let inst = checker.inst;
        let n = inst.n();
        let recs = inst.recs();
        let forced = (0..n).all(|v| {
            let d = inst.dist(v);
            !d.p0().is_zero() && d.is_nontrivial()
        });
        let organic_cap: Vec<usize> = (0..n).map(|v| organic_cap(inst.dist(v).p0(), inst.gamma())).collect();
        let forced_deg = |v: usize| if forced { recs.degree(v) } else { 0 };
        let mut adj = vec![0u32; n];
        let mut free = Vec::new();
        let mut free_organic = Vec::new();
        let mut undecided = vec![0; n];
        for u in 0..n {
            for v in u + 1..n {
                let organic = !recs.has_edge(u, v);
                if !organic && forced {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                    continue;
                }
                if organic && !(sustainable(inst, u, v, forced_deg(v)) && sustainable(inst, v, u, forced_deg(u))) {
                    continue;
                }
                free.push((u, v));
                free_organic.push(organic);
                undecided[u] += 1;
                undecided[v] += 1;
            }
        }
        let degree_ceiling = (0..n).map(|v| (recs.degree(v) + organic_cap[v]).min(n - 1)).collect();
        let symmetries = if opts.canonicalize { symmetries(inst)? } else { Vec::new() };
        let mut pair_index = vec![vec![0; n]; n];
        for (next, (u, v)) in (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).enumerate() {
            pair_index[u][v] = next;
            pair_index[v][u] = next;
        }
        let included = vec![false; free.len()];
        Ok(Self {
            checker,
            n,
            prune: opts.prune,
            forced,
            free,
            free_organic,
            included,
            adj,
            organic_deg: vec![0; n],
            undecided,
            organic_cap,
            degree_ceiling,
            symmetries,
            pair_index,
            results: Vec::new(),
            checked: 0,
        })
    }

    fn deg(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    fn dfs(&mut self, idx: usize) {
        if idx == self.free.len() {
            self.leaf();
            return;
        }
        let (u, v) = self.free[idx];
        let organic = self.free_organic[idx];
        self.undecided[u] -= 1;
        self.undecided[v] -= 1;

        let room = !organic || (self.organic_deg[u] < self.organic_cap[u] && self.organic_deg[v] < self.organic_cap[v]);
        if room {
            self.set(idx, true);
            if self.viable(idx) {
                self.dfs(idx + 1);
            }
            self.set(idx, false);
        }
        if self.viable(idx) {
            self.dfs(idx + 1);
        }

        self.undecided[u] += 1;
        self.undecided[v] += 1;
    }

    fn set(&mut self, idx: usize, on: bool) {
        let (u, v) = self.free[idx];
        self.included[idx] = on;
        if on {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
        } else {
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
        }
        if self.free_organic[idx] {
            let step = |d: &mut usize| if on { *d += 1 } else { *d -= 1 };
            step(&mut self.organic_deg[u]);
            step(&mut self.organic_deg[v]);
        }
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.adj[v];
        (0..self.n).filter(move |&l| mask >> l & 1 == 1)
    }

    /// False when pairs `0..=decided` already rule out every completion.
    fn viable(&self, decided: usize) -> bool {
        if !self.prune {
            return true;
        }
        let tab = &self.checker.float;
        let inst = self.checker.inst;
        let gamma = tab.gamma;
        let n = self.n;
        let deg: Vec<usize> = (0..n).map(|v| self.deg(v)).collect();
        let max_deg: Vec<usize> = (0..n).map(|v| (deg[v] + self.undecided[v]).min(self.degree_ceiling[v]).max(deg[v])).collect();

        // Included organic links: even the most favourable completion leaves
        // one endpoint better off severing.
        for a in 0..n {
            for b in self.neighbors(a) {
                if inst.is_recommended(a, b) {
                    continue;
                }
                let mut keep = 1.0;
                for l in self.neighbors(a).filter(|&l| l != b) {
                    keep *= 1.0 - tab.pass(l, max_deg[l]);
                }
                if tab.p0(a) * tab.pass(b, deg[b]) * keep < gamma - FILTER_TOL {
                    return false;
                }
            }
        }

        // Excluded pairs: even the least favourable completion leaves both
        // endpoints better off adding the link without severing anything.
        let floor: Vec<f64> = (0..n)
            .map(|a| {
                let mut miss = 1.0;
                for l in self.neighbors(a) {
                    miss *= 1.0 - tab.pass(l, deg[l]);
                }
                for (idx, &(u, v)) in self.free.iter().enumerate().skip(decided + 1) {
                    if u == a || v == a {
                        let m = if u == a { v } else { u };
                        miss *= 1.0 - tab.pass(m, deg[m] + 1);
                        debug_assert!(!self.included[idx]);
                    }
                }
                miss
            })
            .collect();
        for idx in 0..=decided {
            if self.included[idx] {
                continue;
            }
            let (u, v) = self.free[idx];
            let cost = if self.free_organic[idx] { gamma } else { 0.0 };
            let gain = |a: usize, b: usize| tab.p0(a) * tab.pass(b, max_deg[b] + 1) * floor[a] - cost;
            if gain(u, v) > FILTER_TOL && gain(v, u) > FILTER_TOL {
                return false;
            }
        }
        true
    }

    fn network(&self) -> Network {
        let mut net = Network::empty(self.n);
        for u in 0..self.n {
            for v in self.neighbors(u).filter(|&v| v > u) {
                net.add_edge(u, v).expect("indices are in range");
            }
        }
        net
    }

    fn mask_under(&self, perm: &[usize]) -> u64 {
        let mut mask = 0u64;
        for u in 0..self.n {
            for v in self.neighbors(u).filter(|&v| v > u) {
                mask |= 1 << self.pair_index[perm[u]][perm[v]];
            }
        }
        mask
    }

    fn leaf(&mut self) {
        if self.symmetries.is_empty() {
            self.checked += 1;
            let net = self.network();
            if self.checker.check(&net).is_equilibrium() {
                self.results.push(net);
            }
            return;
        }
        let identity: Vec<usize> = (0..self.n).collect();
        let own = self.mask_under(&identity);
        if self.symmetries.iter().any(|p| self.mask_under(p) < own) {
            return;
        }
        self.checked += 1;
        let net = self.network();
        if !self.checker.check(&net).is_equilibrium() {
            return;
        }
        for perm in &self.symmetries {
            let mut image = Network::empty(self.n);
            for (u, v) in net.edges() {
                image.add_edge(perm[u], perm[v]).expect("permutations stay in range");
            }
            self.results.push(image);
        }
    }
}

/// Whether an organic link `(a, b)` can ever pass `a`'s severance check:
/// at best `b` has only its fixed links plus this one and `a` loses nothing
/// else by keeping it.
fn sustainable(inst: &Instance, a: usize, b: usize, b_fixed: usize) -> bool {
    let best: Rational = inst.dist(a).p0().clone() * inst.dist(b).pass_probability(b_fixed + 1);
    best >= *inst.gamma()
}

/// Permutations that preserve every node's class and map recommendations
/// onto recommendations, identity included.
fn symmetries(inst: &Instance) -> Result<Vec<Vec<usize>>> {
    let n = inst.n();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for c in 0..inst.classes().len() {
        let members: Vec<usize> = (0..n).filter(|&v| inst.class_of(v) == c).collect();
        if !members.is_empty() {
            blocks.push(members);
        }
    }
    let total: usize = blocks.iter().map(|b| (1..=b.len()).product::<usize>()).product();
    if total > MAX_SYMMETRIES {
        return Err(Error::Resource(format!("{total} class-preserving permutations to canonicalize over")));
    }
    let mut perms = vec![(0..n).collect::<Vec<usize>>()];
    for block in &blocks {
        let arrangements = permutations(block);
        let mut next = Vec::with_capacity(perms.len() * arrangements.len());
        for base in &perms {
            for arr in &arrangements {
                let mut p = base.clone();
                for (&from, &to) in block.iter().zip(arr) {
                    p[from] = to;
                }
                next.push(p);
            }
        }
        perms = next;
    }
    let recs = inst.recs();
    let edges = recs.edges();
    perms.retain(|p| edges.iter().all(|&(u, v)| recs.has_edge(p[u], p[v])));
    Ok(perms)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (pos, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(pos);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}
