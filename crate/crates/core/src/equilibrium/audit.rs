//! Reciprocity audit: which nodes receive from each organic neighbor about
//! what they give, and keep an unlinked same-group peer of equal degree.

use num_traits::Signed;
use serde::Serialize;

use crate::error::{input, Result};
use crate::model::{Instance, Network};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeAudit {
    pub node: usize,
    /// `π_i(d_i) ≥ π_j(d_j + 1) − ε` for every organic neighbor `j`.
    pub reciprocity: bool,
    /// `π_i(d_i) ≤ π_j(d_j − 1) + ε` for every same-group organic neighbor `j`.
    pub same_group_balance: bool,
    pub compliant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// The largest set in which every member passes both local checks, has
    /// all its organic neighbors inside, and has an unlinked peer of the same
    /// group and degree inside.
    pub compliant: Vec<usize>,
    pub violators: Vec<usize>,
    pub nodes: Vec<NodeAudit>,
}

pub fn reciprocity_audit(inst: &Instance, net: &Network, epsilon: &Rational) -> Result<AuditReport> {
    inst.check_network(net)?;
    if !epsilon.is_positive() {
        return input("audit slack must be positive");
    }
    let n = inst.n();
    let pass = |v: usize, d: usize| inst.dist(v).pass_probability(d);
    let organic = |i: usize| net.neighbors(i).filter(move |&j| !inst.is_recommended(i, j));

    let mut nodes: Vec<NodeAudit> = (0..n)
        .map(|i| {
            let own = pass(i, net.degree(i));
            let reciprocity = organic(i).all(|j| own >= pass(j, net.degree(j) + 1) - epsilon);
            let same_group_balance = organic(i)
                .filter(|&j| inst.group(j) == inst.group(i))
                .all(|j| own <= pass(j, net.degree(j) - 1) + epsilon);
            NodeAudit { node: i, reciprocity, same_group_balance, compliant: reciprocity && same_group_balance }
        })
        .collect();

    let mut inside: Vec<bool> = nodes.iter().map(|a| a.compliant).collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            if !inside[i] {
                continue;
            }
            let neighbors_inside = organic(i).all(|j| inside[j]);
            let peer = (0..n).any(|j| {
                j != i
                    && inside[j]
                    && !net.has_edge(i, j)
                    && inst.group(j) == inst.group(i)
                    && net.degree(j) == net.degree(i)
            });
            if !(neighbors_inside && peer) {
                inside[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for a in &mut nodes {
        a.compliant = inside[a.node];
    }
    Ok(AuditReport {
        compliant: (0..n).filter(|&i| inside[i]).collect(),
        violators: (0..n).filter(|&i| !inside[i]).collect(),
        nodes,
    })
}
