//! Order-independent PC ("PC-stable").
//!
//! Skeleton search proceeds level by level. At the start of each level every
//! node's adjacency set is frozen, so deletions made during the level never
//! change which conditioning sets the level considers. Edges, conditioning
//! candidates and subsets are all visited in variable-name order, which makes
//! the result independent of column order.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ci::{CiTest, G2Test};
use crate::constraints::{ConstraintSet, PairRules};
use crate::dataset::Dataset;
use crate::graph::{apply_meek_rules_with, orient_v_structures_with, Pdag, SepsetMap};
use crate::infotheory::check_alpha;
use crate::subsets::Combinations;
use crate::{Error, Result};

/// Settings shared by both learners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcConfig {
    /// Significance level of every CI test.
    pub alpha: f64,
    /// Largest conditioning set considered; `None` for no limit.
    pub max_condition_size: Option<usize>,
}

impl Default for PcConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            max_condition_size: None,
        }
    }
}

impl PcConfig {
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)
    }
}

pub(crate) fn check_variable_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "structure learning needs at least 2 variables, got {n}"
        )));
    }
    Ok(())
}

/// PC-stable skeleton on a dataset with the G² test.
pub fn learn_skeleton_pcstable(
    d: &Dataset,
    cfg: &PcConfig,
    c: &ConstraintSet,
) -> Result<(Pdag, SepsetMap)> {
    cfg.validate()?;
    let test = G2Test::new(d, cfg.alpha)?;
    skeleton_with(&d.names(), &test, cfg.max_condition_size, c)
}

/// PC-stable skeleton with an arbitrary CI test over `nodes`.
pub fn skeleton_with<T: CiTest>(
    nodes: &[String],
    test: &T,
    max_condition_size: Option<usize>,
    c: &ConstraintSet,
) -> Result<(Pdag, SepsetMap)> {
    check_variable_count(nodes.len())?;
    let rules = c.resolve(nodes);
    skeleton_resolved(nodes, test, max_condition_size, &rules)
}

fn skeleton_resolved<T: CiTest>(
    nodes: &[String],
    test: &T,
    max_condition_size: Option<usize>,
    rules: &PairRules,
) -> Result<(Pdag, SepsetMap)> {
    let mut g = Pdag::complete(nodes.to_vec())?;
    let mut sepsets = SepsetMap::new();
    let order = g.name_order();
    let n = g.n();
    for i in 0..n {
        for j in i + 1..n {
            if rules.forbidden(i, j) {
                g.remove_edge(i, j);
                sepsets.insert(i, j, Vec::new());
            }
        }
    }

    let mut level = 0usize;
    loop {
        if max_condition_size.is_some_and(|m| level > m) {
            break;
        }
        // frozen adjacency, each list in name order
        let snapshot: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                order
                    .iter()
                    .copied()
                    .filter(|&w| g.is_adjacent(v, w))
                    .collect()
            })
            .collect();
        let mut any_candidate = false;
        for (a, &x) in order.iter().enumerate() {
            for &y in &order[a + 1..] {
                if !g.is_adjacent(x, y) {
                    continue;
                }
                let mut tried: BTreeSet<Vec<usize>> = BTreeSet::new();
                let mut separator = None;
                'sides: for (u, v) in [(x, y), (y, x)] {
                    let candidates: Vec<usize> =
                        snapshot[u].iter().copied().filter(|&w| w != v).collect();
                    if candidates.len() < level {
                        continue;
                    }
                    any_candidate = true;
                    for s in Combinations::new(&candidates, level) {
                        let mut key = s.clone();
                        key.sort_unstable();
                        if !tried.insert(key) {
                            continue;
                        }
                        if test.test(x, y, &s).independent {
                            separator = Some(s);
                            break 'sides;
                        }
                    }
                }
                if let Some(s) = separator {
                    g.remove_edge(x, y);
                    sepsets.insert(x, y, s);
                }
            }
        }
        if !any_candidate {
            break;
        }
        level += 1;
    }
    Ok((g, sepsets))
}

/// Full PC-stable run: skeleton, v-structures, then Meek closure.
pub fn pc_stable(d: &Dataset, cfg: &PcConfig, c: &ConstraintSet) -> Result<Pdag> {
    cfg.validate()?;
    let test = G2Test::new(d, cfg.alpha)?;
    pc_stable_with(&d.names(), &test, cfg.max_condition_size, c)
}

/// PC-stable with an arbitrary CI test.
pub fn pc_stable_with<T: CiTest>(
    nodes: &[String],
    test: &T,
    max_condition_size: Option<usize>,
    c: &ConstraintSet,
) -> Result<Pdag> {
    check_variable_count(nodes.len())?;
    let rules = c.resolve(nodes);
    let (skeleton, sepsets) = skeleton_resolved(nodes, test, max_condition_size, &rules)?;
    let oriented = orient_v_structures_with(&skeleton, &sepsets, &rules);
    Ok(apply_meek_rules_with(&oriented.graph, &rules))
}
