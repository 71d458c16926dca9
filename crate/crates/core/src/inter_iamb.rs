//! Inter-IAMB: Markov-blanket discovery with shrink steps interleaved into the
//! grow loop, followed by neighbour identification and orientation.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ci::{CiTest, G2Test};
use crate::constraints::ConstraintSet;
use crate::dataset::Dataset;
use crate::graph::{apply_meek_rules_with, orient_v_structures_with, Pdag, SepsetMap};
use crate::pc_stable::{check_variable_count, PcConfig};
use crate::subsets::size_then_lex;
use crate::Result;

/// Estimated Markov blanket of every variable, each as a sorted index list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MbMap(Vec<Vec<usize>>);

impl MbMap {
    /// Wraps per-variable blankets; entries are sorted and self-references
    /// removed.
    pub fn new(blankets: Vec<Vec<usize>>) -> Self {
        let blankets = blankets
            .into_iter()
            .enumerate()
            .map(|(v, mut b)| {
                b.retain(|&w| w != v);
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        MbMap(blankets)
    }

    pub fn blanket(&self, v: usize) -> &[usize] {
        &self.0[v]
    }

    pub fn contains(&self, v: usize, w: usize) -> bool {
        self.0[v].binary_search(&w).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|v| self.0[v].iter().all(|&w| self.contains(w, v)))
    }
}

/// Inter-IAMB blanket of `target` on a dataset.
pub fn markov_blanket_interiamb(d: &Dataset, target: usize, cfg: &PcConfig) -> Result<Vec<usize>> {
    cfg.validate()?;
    let test = G2Test::new(d, cfg.alpha)?;
    Ok(markov_blanket_with(&d.names(), &test, target))
}

/// Inter-IAMB blanket of `target` with an arbitrary CI test.
///
/// Grow: among non-members that test dependent on the target given the
/// current blanket, add the one with the largest association (ties go to the
/// smaller name). Shrink, right after each addition: drop members, scanned in
/// insertion order, that test independent given the rest of the blanket. The
/// loop ends when nothing is added or a blanket state repeats.
///
/// The result is sorted by index.
pub fn markov_blanket_with<T: CiTest>(nodes: &[String], test: &T, target: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..nodes.len()).filter(|&v| v != target).collect();
    order.sort_by(|&a, &b| nodes[a].cmp(&nodes[b]));

    let mut blanket: Vec<usize> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for &x in &order {
            if blanket.contains(&x) {
                continue;
            }
            let r = test.test(x, target, &blanket);
            if r.independent {
                continue;
            }
            // strict comparison keeps the earlier name on ties
            if best.is_none_or(|(_, s)| r.association > s) {
                best = Some((x, r.association));
            }
        }
        let Some((added, _)) = best else {
            break;
        };
        blanket.push(added);

        let mut k = 0;
        while k < blanket.len() {
            let y = blanket[k];
            let rest: Vec<usize> = blanket.iter().copied().filter(|&w| w != y).collect();
            if test.test(y, target, &rest).independent {
                blanket.remove(k);
            } else {
                k += 1;
            }
        }

        let mut state = blanket.clone();
        state.sort_unstable();
        if !seen.insert(state) {
            break;
        }
    }
    blanket.sort_unstable();
    blanket
}

/// AND rule: `x` stays in `MB(y)` only if `y ∈ MB(x)`.
pub fn symmetry_correct(m: &MbMap) -> MbMap {
    MbMap(
        (0..m.len())
            .map(|v| {
                m.blanket(v)
                    .iter()
                    .copied()
                    .filter(|&w| m.contains(w, v))
                    .collect()
            })
            .collect(),
    )
}

/// Neighbour identification from symmetric blankets on a dataset.
pub fn neighbors_from_mb(
    d: &Dataset,
    m: &MbMap,
    cfg: &PcConfig,
    c: &ConstraintSet,
) -> Result<(Pdag, SepsetMap)> {
    cfg.validate()?;
    let test = G2Test::new(d, cfg.alpha)?;
    neighbors_with(&d.names(), &test, m, c)
}

/// Neighbour identification with an arbitrary CI test.
///
/// A blanket pair `(x, y)` becomes an edge unless some subset of the smaller
/// of `MB(x) \ {y}` and `MB(y) \ {x}` separates them (subsets by size, then
/// name order; the first separator is recorded). Forbidden pairs are skipped
/// with an empty sepset. Pairs outside each other's blanket are separated by
/// the blanket of the first by name.
pub fn neighbors_with<T: CiTest>(
    nodes: &[String],
    test: &T,
    m: &MbMap,
    c: &ConstraintSet,
) -> Result<(Pdag, SepsetMap)> {
    let rules = c.resolve(nodes);
    let mut g = Pdag::new(nodes.to_vec())?;
    let mut sepsets = SepsetMap::new();
    let order = g.name_order();
    let by_name = |set: &[usize], skip: usize| -> Vec<usize> {
        order
            .iter()
            .copied()
            .filter(|v| *v != skip && set.contains(v))
            .collect()
    };
    for (a, &x) in order.iter().enumerate() {
        for &y in &order[a + 1..] {
            if rules.forbidden(x, y) {
                sepsets.insert(x, y, Vec::new());
                continue;
            }
            if !(m.contains(x, y) && m.contains(y, x)) {
                sepsets.insert(x, y, by_name(m.blanket(x), y));
                continue;
            }
            let bx = by_name(m.blanket(x), y);
            let by = by_name(m.blanket(y), x);
            let search = if by.len() < bx.len() { by } else { bx };
            let separator = size_then_lex(&search).find(|s| test.test(x, y, s).independent);
            match separator {
                Some(s) => sepsets.insert(x, y, s),
                None => g.add_undirected(x, y)?,
            }
        }
    }
    Ok((g, sepsets))
}

/// Full Inter-IAMB run on a dataset.
pub fn inter_iamb(d: &Dataset, cfg: &PcConfig, c: &ConstraintSet) -> Result<Pdag> {
    cfg.validate()?;
    let test = G2Test::new(d, cfg.alpha)?;
    inter_iamb_with(&d.names(), &test, c)
}

/// Inter-IAMB with an arbitrary CI test: blankets, AND-rule symmetry,
/// neighbours, v-structures, Meek closure.
pub fn inter_iamb_with<T: CiTest>(nodes: &[String], test: &T, c: &ConstraintSet) -> Result<Pdag> {
    check_variable_count(nodes.len())?;
    let blankets = (0..nodes.len())
        .map(|t| markov_blanket_with(nodes, test, t))
        .collect();
    let m = symmetry_correct(&MbMap::new(blankets));
    let (skeleton, sepsets) = neighbors_with(nodes, test, &m, c)?;
    let rules = c.resolve(nodes);
    let oriented = orient_v_structures_with(&skeleton, &sepsets, &rules);
    Ok(apply_meek_rules_with(&oriented.graph, &rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::DSeparationOracle;
    use crate::graph::{cpdag_of, Dag};
    use alloc::vec;

    #[test]
    fn oracle_blankets() {
        let chain = Dag::from_names(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        let o = DSeparationOracle::new(&chain);
        assert_eq!(markov_blanket_with(chain.nodes(), &o, 0), vec![1]);
        assert_eq!(markov_blanket_with(chain.nodes(), &o, 1), vec![0, 2]);

        let collider = Dag::from_names(&["A", "B", "C"], &[("A", "C"), ("B", "C")]).unwrap();
        let o = DSeparationOracle::new(&collider);
        assert_eq!(markov_blanket_with(collider.nodes(), &o, 0), vec![1, 2]);

        let empty = Dag::from_names(&["A", "B", "C"], &[]).unwrap();
        let o = DSeparationOracle::new(&empty);
        assert!(markov_blanket_with(empty.nodes(), &o, 0).is_empty());
    }

    #[test]
    fn and_rule() {
        let m = MbMap::new(vec![vec![1], vec![0, 2], vec![]]);
        assert!(!m.is_symmetric());
        let s = symmetry_correct(&m);
        assert_eq!(s.blanket(1), [0]);
        assert!(s.is_symmetric());
        assert_eq!(symmetry_correct(&s), s);
    }

    #[test]
    fn collider_neighbours_search_includes_empty_set() {
        let collider = Dag::from_names(&["A", "B", "C"], &[("A", "C"), ("B", "C")]).unwrap();
        let o = DSeparationOracle::new(&collider);
        let m = MbMap::new(vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
        let (g, sep) = neighbors_with(collider.nodes(), &o, &m, &ConstraintSet::none()).unwrap();
        assert_eq!(sep.get(0, 1), Some(&[][..]));
        assert_eq!(g.undirected_edges(), [(0, 2), (1, 2)]);
    }

    #[test]
    fn chain_neighbours() {
        let chain = Dag::from_names(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        let o = DSeparationOracle::new(&chain);
        let m = MbMap::new(vec![vec![1], vec![0, 2], vec![1]]);
        let (g, sep) = neighbors_with(chain.nodes(), &o, &m, &ConstraintSet::none()).unwrap();
        assert!(!g.is_adjacent(0, 2));
        assert_eq!(sep.get(0, 2), Some(&[1][..]));
    }

    #[test]
    fn empty_blankets_give_empty_skeleton() {
        let dag = Dag::from_names(&["A", "B", "C"], &[("A", "B")]).unwrap();
        let o = DSeparationOracle::new(&dag);
        let m = MbMap::new(vec![vec![], vec![], vec![]]);
        let (g, sep) = neighbors_with(dag.nodes(), &o, &m, &ConstraintSet::none()).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(sep.len(), 3);
    }

    #[test]
    fn oracle_collider_end_to_end() {
        let dag = Dag::from_names(&["A", "B", "C"], &[("A", "C"), ("B", "C")]).unwrap();
        let o = DSeparationOracle::new(&dag);
        let g = inter_iamb_with(dag.nodes(), &o, &ConstraintSet::none()).unwrap();
        assert_eq!(g, cpdag_of(&dag));
    }
}
