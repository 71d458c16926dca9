//! Edge blacklists built from tier assignments and the target rule.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeMark, Pdag};
use crate::{Error, Result};

/// Tier placement of a variable. Edges from a higher tier into a lower tier
/// are prohibited, as are all edges out of the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TierLabel {
    Tier(u32),
    Target,
}

/// What the blacklist allows between two variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Free,
    ForcedXToY,
    ForcedYToX,
    Forbidden,
}

/// Blacklisted directed pairs plus the tier map they came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    blacklist: BTreeSet<(String, String)>,
    tier_of: BTreeMap<String, TierLabel>,
}

impl ConstraintSet {
    /// No constraints at all.
    pub fn none() -> Self {
        Self::default()
    }

    /// A constraint set holding only explicit pairs.
    pub fn from_blacklist<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        Self {
            blacklist: pairs
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            tier_of: BTreeMap::new(),
        }
    }

    pub fn blacklist(&self) -> &BTreeSet<(String, String)> {
        &self.blacklist
    }

    pub fn tier_of(&self, name: &str) -> Option<TierLabel> {
        self.tier_of.get(name).copied()
    }

    pub fn is_blacklisted(&self, from: &str, to: &str) -> bool {
        // BTreeSet<(String, String)> cannot be probed with borrowed strs
        self.blacklist
            .range((from.to_string(), to.to_string())..)
            .next()
            .is_some_and(|(a, b)| a == from && b == to)
    }

    pub fn admissibility(&self, x: &str, y: &str) -> Admissibility {
        classify(self.is_blacklisted(x, y), self.is_blacklisted(y, x))
    }

    /// Index-based view of the blacklist for a fixed node list.
    pub fn resolve(&self, nodes: &[String]) -> PairRules {
        let n = nodes.len();
        let index: BTreeMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut blocked = vec![false; n * n];
        for (a, b) in &self.blacklist {
            if let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) {
                blocked[i * n + j] = true;
            }
        }
        PairRules { n, blocked }
    }
}

fn classify(x_to_y_blocked: bool, y_to_x_blocked: bool) -> Admissibility {
    match (x_to_y_blocked, y_to_x_blocked) {
        (true, true) => Admissibility::Forbidden,
        (true, false) => Admissibility::ForcedYToX,
        (false, true) => Admissibility::ForcedXToY,
        (false, false) => Admissibility::Free,
    }
}

/// Blacklist resolved against node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRules {
    n: usize,
    blocked: Vec<bool>,
}

impl PairRules {
    /// Rules that allow everything.
    pub fn permissive(n: usize) -> Self {
        Self {
            n,
            blocked: vec![false; n * n],
        }
    }

    /// Whether the directed edge `from → to` is blacklisted.
    pub fn blocked(&self, from: usize, to: usize) -> bool {
        self.blocked[from * self.n + to]
    }

    pub fn forbidden(&self, x: usize, y: usize) -> bool {
        self.blocked(x, y) && self.blocked(y, x)
    }

    pub fn admissibility(&self, x: usize, y: usize) -> Admissibility {
        classify(self.blocked(x, y), self.blocked(y, x))
    }
}

/// Builds the blacklist: every edge out of `target`, every edge from a higher
/// tier into a lower one, and the `extra` pairs.
///
/// `variables` are the names in play; each must carry a tier unless it is the
/// target. Tier entries for other names are ignored.
pub fn build_constraints(
    variables: &[String],
    tier_map: &BTreeMap<String, u32>,
    target: &str,
    extra: &[(String, String)],
) -> Result<ConstraintSet> {
    if !variables.iter().any(|v| v == target) {
        return Err(Error::UnknownVariable(target.to_string()));
    }
    let mut tier_of = BTreeMap::new();
    for v in variables {
        let label = if v == target {
            TierLabel::Target
        } else {
            TierLabel::Tier(
                *tier_map
                    .get(v)
                    .ok_or_else(|| Error::UnassignedTier(v.clone()))?,
            )
        };
        tier_of.insert(v.clone(), label);
    }
    let mut blacklist = BTreeSet::new();
    for u in variables {
        for v in variables {
            if u == v {
                continue;
            }
            let prohibited = match (tier_of[u], tier_of[v]) {
                (TierLabel::Target, _) => true,
                (TierLabel::Tier(a), TierLabel::Tier(b)) => a > b,
                (TierLabel::Tier(_), TierLabel::Target) => false,
            };
            if prohibited {
                blacklist.insert((u.clone(), v.clone()));
            }
        }
    }
    blacklist.extend(extra.iter().cloned());
    Ok(ConstraintSet { blacklist, tier_of })
}

/// Edges of `g` that break `c`, as `(from, to)` name pairs: arrows along a
/// blacklisted direction, undirected edges whose pair has a blacklisted
/// direction, and any edge on a pair blacklisted both ways.
pub fn violations(g: &Pdag, c: &ConstraintSet) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for i in 0..g.n() {
        for j in 0..g.n() {
            let (a, b) = (g.name(i), g.name(j));
            let bad = match g.mark(i, j) {
                EdgeMark::Out => c.is_blacklisted(a, b),
                EdgeMark::Undirected if i < j => c.is_blacklisted(a, b) || c.is_blacklisted(b, a),
                _ => false,
            };
            if bad {
                out.push((a.to_string(), b.to_string()));
            }
        }
    }
    out
}
