//! Bootstrap model averaging.
//!
//! Each replicate learns a structure on a resample drawn from
//! `(master_seed, replicate_index)`. Per unordered pair we count how often an
//! edge appears (strength) and how the orientations split given presence
//! (direction). An undirected occurrence counts half for each orientation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::constraints::ConstraintSet;
use crate::dataset::Dataset;
use crate::graph::{EdgeMark, Pdag};
use crate::inter_iamb::inter_iamb;
use crate::pc_stable::{pc_stable, PcConfig};
use crate::{Error, Result};

/// Which learner a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    PcStable,
    InterIamb,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::PcStable => "pc-stable",
            Algorithm::InterIamb => "inter-iamb",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pc-stable" | "pc" => Ok(Algorithm::PcStable),
            "inter-iamb" | "iamb" => Ok(Algorithm::InterIamb),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm `{other}`"
            ))),
        }
    }
}

/// Runs one learner on a dataset.
pub fn learn(d: &Dataset, algorithm: Algorithm, cfg: &PcConfig, c: &ConstraintSet) -> Result<Pdag> {
    match algorithm {
        Algorithm::PcStable => pc_stable(d, cfg, c),
        Algorithm::InterIamb => inter_iamb(d, cfg, c),
    }
}

/// Learns on bootstrap replicate `replicate_index` (1-based).
pub fn learn_replicate(
    d: &Dataset,
    algorithm: Algorithm,
    cfg: &PcConfig,
    c: &ConstraintSet,
    replicate_index: u64,
    master_seed: u64,
) -> Result<Pdag> {
    learn(
        &d.bootstrap_resample(replicate_index, master_seed),
        algorithm,
        cfg,
        c,
    )
}

/// Averaged evidence for one unordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStrength {
    /// Majority endpoint: the tail of the orientation with probability ≥ 0.5
    /// (the smaller name on an exact tie).
    pub from: String,
    pub to: String,
    /// Fraction of replicates with any edge between the two.
    pub strength: f64,
    /// Probability of `from → to` given presence.
    pub direction: f64,
    /// Probability of `to → from` given presence.
    pub reverse_direction: f64,
}

impl EdgeStrength {
    /// An edge from precomputed values, canonicalised so that
    /// `direction ≥ 0.5`.
    pub fn new(
        from: impl Into<String>,
        to: impl Into<String>,
        strength: f64,
        direction: f64,
    ) -> Self {
        let (from, to) = (from.into(), to.into());
        let flip = direction < 0.5 || (direction == 0.5 && to < from);
        if flip {
            Self {
                from: to,
                to: from,
                strength,
                direction: 1.0 - direction,
                reverse_direction: direction,
            }
        } else {
            Self {
                from,
                to,
                strength,
                direction,
                reverse_direction: 1.0 - direction,
            }
        }
    }

    pub fn band(&self) -> ConfidenceBand {
        ConfidenceBand::of(self.strength)
    }
}

/// Averaged network over bootstrap replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedNetwork {
    pub nodes: Vec<String>,
    /// Pairs seen in at least one replicate, by decreasing strength then name.
    pub edges: Vec<EdgeStrength>,
    pub replicate_count: u64,
    pub algorithm: Algorithm,
    pub master_seed: u64,
}

impl AveragedNetwork {
    /// A network from precomputed edges; node list is the sorted union of
    /// endpoint names.
    pub fn from_edges(
        mut edges: Vec<EdgeStrength>,
        replicate_count: u64,
        algorithm: Algorithm,
        master_seed: u64,
    ) -> Self {
        let nodes: BTreeSet<String> = edges
            .iter()
            .flat_map(|e| [e.from.clone(), e.to.clone()])
            .collect();
        sort_edges(&mut edges);
        Self {
            nodes: nodes.into_iter().collect(),
            edges,
            replicate_count,
            algorithm,
            master_seed,
        }
    }

    /// The entry for a pair in either order.
    pub fn edge(&self, a: &str, b: &str) -> Option<&EdgeStrength> {
        self.edges
            .iter()
            .find(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }

    /// Strength of a pair, 0 when never observed.
    pub fn strength(&self, a: &str, b: &str) -> f64 {
        self.edge(a, b).map_or(0.0, |e| e.strength)
    }

    /// Probability of `from → to` given presence, `None` when never observed.
    pub fn orientation_probability(&self, from: &str, to: &str) -> Option<f64> {
        self.edge(from, to).map(|e| {
            if e.from == from {
                e.direction
            } else {
                e.reverse_direction
            }
        })
    }
}

fn sort_edges(edges: &mut [EdgeStrength]) {
    edges.sort_by(|a, b| {
        b.strength
            .total_cmp(&a.strength)
            .then_with(|| a.from.cmp(&b.from))
            .then_with(|| a.to.cmp(&b.to))
    });
}

/// Per-pair tallies accumulated over replicates in index order.
#[derive(Debug, Clone, Default)]
pub struct EdgeTally {
    nodes: Vec<String>,
    // (i, j) with i < j → (presence, tally i→j, tally j→i), tallies doubled
    pairs: BTreeMap<(usize, usize), (u64, u64, u64)>,
    replicates: u64,
}

impl EdgeTally {
    pub fn new(nodes: Vec<String>) -> Self {
        Self {
            nodes,
            pairs: BTreeMap::new(),
            replicates: 0,
        }
    }

    /// Adds one replicate's graph; its nodes must match the tally's.
    pub fn add(&mut self, g: &Pdag) -> Result<()> {
        let g = if g.nodes() == self.nodes.as_slice() {
            g.clone()
        } else {
            g.reordered(&self.nodes)?
        };
        let n = g.n();
        for i in 0..n {
            for j in i + 1..n {
                let (fwd, back) = match g.mark(i, j) {
                    EdgeMark::None => continue,
                    EdgeMark::Out => (2, 0),
                    EdgeMark::In => (0, 2),
                    EdgeMark::Undirected => (1, 1),
                };
                let e = self.pairs.entry((i, j)).or_default();
                e.0 += 1;
                e.1 += fwd;
                e.2 += back;
            }
        }
        self.replicates += 1;
        Ok(())
    }

    pub fn replicates(&self) -> u64 {
        self.replicates
    }

    pub fn finish(self, algorithm: Algorithm, master_seed: u64) -> Result<AveragedNetwork> {
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("no replicates were tallied".into()));
        }
        let r = self.replicates as f64;
        let mut edges: Vec<EdgeStrength> = self
            .pairs
            .iter()
            .map(|(&(i, j), &(present, fwd, back))| {
                let (a, b) = (&self.nodes[i], &self.nodes[j]);
                let p = 2.0 * present as f64;
                let (d_ab, d_ba) = (fwd as f64 / p, back as f64 / p);
                let flip = d_ab < d_ba || (d_ab == d_ba && b < a);
                let (from, to, direction, reverse_direction) = if flip {
                    (b, a, d_ba, d_ab)
                } else {
                    (a, b, d_ab, d_ba)
                };
                EdgeStrength {
                    from: from.clone(),
                    to: to.clone(),
                    strength: present as f64 / r,
                    direction,
                    reverse_direction,
                }
            })
            .collect();
        sort_edges(&mut edges);
        Ok(AveragedNetwork {
            nodes: self.nodes,
            edges,
            replicate_count: self.replicates,
            algorithm,
            master_seed,
        })
    }
}

pub(crate) fn check_replicates(replicates: u64) -> Result<()> {
    if replicates == 0 {
        return Err(Error::InvalidParameter(
            "replicates must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Learns on replicates `1..=replicates` and returns the graphs in index
/// order.
pub fn replicate_graphs(
    d: &Dataset,
    algorithm: Algorithm,
    cfg: &PcConfig,
    c: &ConstraintSet,
    replicates: u64,
    master_seed: u64,
) -> Result<Vec<Pdag>> {
    check_replicates(replicates)?;
    (1..=replicates)
        .map(|i| learn_replicate(d, algorithm, cfg, c, i, master_seed))
        .collect()
}

/// Sequential bootstrap model averaging.
pub fn averaged_network(
    d: &Dataset,
    algorithm: Algorithm,
    cfg: &PcConfig,
    c: &ConstraintSet,
    replicates: u64,
    master_seed: u64,
) -> Result<AveragedNetwork> {
    check_replicates(replicates)?;
    cfg.validate()?;
    let mut tally = EdgeTally::new(d.names());
    for i in 1..=replicates {
        tally.add(&learn_replicate(d, algorithm, cfg, c, i, master_seed)?)?;
    }
    tally.finish(algorithm, master_seed)
}

/// Confidence band of an edge strength.
///
/// High: above 0.5. Medium: 0.4 to 0.5 inclusive. Low: 0.3 inclusive up to
/// 0.4. Excluded: below 0.3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfidenceBand {
    High,
    Medium,
    Low,
    Excluded,
}

impl ConfidenceBand {
    pub fn of(strength: f64) -> Self {
        if strength > 0.5 {
            ConfidenceBand::High
        } else if strength >= 0.4 {
            ConfidenceBand::Medium
        } else if strength >= 0.3 {
            ConfidenceBand::Low
        } else {
            ConfidenceBand::Excluded
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConfidenceBand::High => "high",
            ConfidenceBand::Medium => "medium",
            ConfidenceBand::Low => "low",
            ConfidenceBand::Excluded => "excluded",
        }
    }
}

impl fmt::Display for ConfidenceBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConfidenceBand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high" => Ok(ConfidenceBand::High),
            "medium" => Ok(ConfidenceBand::Medium),
            "low" => Ok(ConfidenceBand::Low),
            "excluded" => Ok(ConfidenceBand::Excluded),
            other => Err(Error::InvalidParameter(format!("unknown band `{other}`"))),
        }
    }
}

/// Every edge with its band; excluded edges are kept and marked.
pub fn classify_confidence(n: &AveragedNetwork) -> Vec<(EdgeStrength, ConfidenceBand)> {
    n.edges.iter().map(|e| (e.clone(), e.band())).collect()
}

/// Minimum direction probability for an orientation to be trusted.
pub const DIRECTION_CUTOFF: f64 = 0.6;

/// Minimum strength for an edge to be displayed.
pub const STRENGTH_CUTOFF: f64 = 0.3;

/// Whether the majority orientation is reliable (`direction ≥ 0.6`).
pub fn direction_reliable(e: &EdgeStrength) -> bool {
    e.direction >= DIRECTION_CUTOFF
}

/// Display cutoffs for [`to_display_graph_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplayThresholds {
    pub strength: f64,
    pub direction: f64,
}

impl Default for DisplayThresholds {
    fn default() -> Self {
        Self {
            strength: STRENGTH_CUTOFF,
            direction: DIRECTION_CUTOFF,
        }
    }
}

/// A graph to render plus the band of each drawn edge.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplayGraph {
    pub graph: Pdag,
    /// Keyed by the drawn endpoints in graph indices, `(from, to)` for arrows
    /// and `(min, max)` for lines.
    pub bands: BTreeMap<(usize, usize), ConfidenceBand>,
}

impl DisplayGraph {
    pub fn band(&self, a: usize, b: usize) -> Option<ConfidenceBand> {
        self.bands
            .get(&(a, b))
            .or_else(|| self.bands.get(&(b, a)))
            .copied()
    }
}

/// Edges with strength ≥ 0.3, drawn as arrows when the direction is reliable
/// and as lines otherwise.
///
/// Edges are placed strongest first; a reliable arrow that would close a
/// directed cycle with arrows already placed is drawn as a line instead.
pub fn to_display_graph(n: &AveragedNetwork) -> DisplayGraph {
    to_display_graph_with(n, DisplayThresholds::default())
}

pub fn to_display_graph_with(n: &AveragedNetwork, t: DisplayThresholds) -> DisplayGraph {
    let mut graph = Pdag::new(n.nodes.clone()).expect("averaged nodes are unique");
    let mut bands = BTreeMap::new();
    for e in &n.edges {
        if e.strength < t.strength {
            continue;
        }
        let (Some(a), Some(b)) = (graph.index_of(&e.from), graph.index_of(&e.to)) else {
            continue;
        };
        let band = e.band();
        if e.direction >= t.direction && !graph.would_create_cycle(a, b) {
            graph
                .add_directed(a, b)
                .expect("pair is unique and acyclic");
            bands.insert((a, b), band);
        } else {
            graph.add_undirected(a, b).expect("pair is unique");
            bands.insert((a.min(b), a.max(b)), band);
        }
    }
    DisplayGraph { graph, bands }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn bands_and_boundaries() {
        assert_eq!(ConfidenceBand::of(0.997), ConfidenceBand::High);
        assert_eq!(ConfidenceBand::of(0.541), ConfidenceBand::High);
        assert_eq!(ConfidenceBand::of(0.5), ConfidenceBand::Medium);
        assert_eq!(ConfidenceBand::of(0.493), ConfidenceBand::Medium);
        assert_eq!(ConfidenceBand::of(0.418), ConfidenceBand::Medium);
        assert_eq!(ConfidenceBand::of(0.4), ConfidenceBand::Medium);
        assert_eq!(ConfidenceBand::of(0.384), ConfidenceBand::Low);
        assert_eq!(ConfidenceBand::of(0.373), ConfidenceBand::Low);
        assert_eq!(ConfidenceBand::of(0.3), ConfidenceBand::Low);
        assert_eq!(ConfidenceBand::of(0.299), ConfidenceBand::Excluded);
    }

    #[test]
    fn direction_boundary_inclusive() {
        assert!(direction_reliable(&EdgeStrength::new(
            "Nbr", "Evc", 0.997, 0.948
        )));
        assert!(!direction_reliable(&EdgeStrength::new(
            "Nbr", "FamFrds", 0.992, 0.511
        )));
        assert!(direction_reliable(&EdgeStrength::new("a", "b", 0.9, 0.6)));
    }

    #[test]
    fn edge_canonicalisation() {
        let e = EdgeStrength::new("b", "a", 0.8, 0.3);
        assert_eq!((e.from.as_str(), e.to.as_str()), ("a", "b"));
        assert!((e.direction - 0.7).abs() < 1e-15);
        let tie = EdgeStrength::new("b", "a", 0.8, 0.5);
        assert_eq!(tie.from, "a");
    }

    #[test]
    fn tally_splits_orientations() {
        // 560 replicates X→Y, 440 Y→X
        let nodes = names(&["SM_PpLv", "TV_PpLv"]);
        let mut fwd = Pdag::new(nodes.clone()).unwrap();
        fwd.add_directed(0, 1).unwrap();
        let mut back = Pdag::new(nodes.clone()).unwrap();
        back.add_directed(1, 0).unwrap();
        let mut tally = EdgeTally::new(nodes);
        for i in 0..1000 {
            tally.add(if i < 560 { &fwd } else { &back }).unwrap();
        }
        let n = tally.finish(Algorithm::PcStable, 0).unwrap();
        let e = &n.edges[0];
        assert_eq!((e.from.as_str(), e.to.as_str()), ("SM_PpLv", "TV_PpLv"));
        assert_eq!(e.strength, 1.0);
        assert_eq!(e.direction, 0.56);
    }

    #[test]
    fn undirected_counts_half_each_way() {
        let nodes = names(&["A", "B", "C"]);
        let mut g = Pdag::new(nodes.clone()).unwrap();
        g.add_undirected(0, 1).unwrap();
        let mut h = Pdag::new(nodes.clone()).unwrap();
        h.add_directed(1, 0).unwrap();
        let mut tally = EdgeTally::new(nodes.clone());
        tally.add(&g).unwrap();
        tally.add(&h).unwrap();
        tally.add(&Pdag::new(nodes).unwrap()).unwrap();
        let n = tally.finish(Algorithm::InterIamb, 1).unwrap();
        let e = n.edge("A", "B").unwrap();
        assert_eq!((e.from.as_str(), e.to.as_str()), ("B", "A"));
        assert!((e.strength - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.direction, 0.75);
        assert_eq!(n.orientation_probability("A", "B"), Some(0.25));
        assert_eq!(n.strength("A", "C"), 0.0);
    }

    #[test]
    fn single_replicate_values() {
        let nodes = names(&["A", "B", "C"]);
        let mut g = Pdag::new(nodes.clone()).unwrap();
        g.add_undirected(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        let mut tally = EdgeTally::new(nodes);
        tally.add(&g).unwrap();
        let n = tally.finish(Algorithm::PcStable, 0).unwrap();
        for e in &n.edges {
            assert_eq!(e.strength, 1.0);
            assert!(e.direction == 0.5 || e.direction == 1.0);
        }
    }

    #[test]
    fn display_graph_filters_and_styles() {
        let n = AveragedNetwork::from_edges(
            vec![
                EdgeStrength::new("Eld", "D_Eld", 1.0, 1.0),
                EdgeStrength::new("Nbr", "FamFrds", 0.992, 0.511),
                EdgeStrength::new("EvcNtc", "Evc", 0.373, 1.0),
                EdgeStrength::new("X", "Y", 0.299, 1.0),
            ],
            1000,
            Algorithm::PcStable,
            0,
        );
        let d = to_display_graph(&n);
        let idx = |s: &str| d.graph.index_of(s).unwrap();
        assert!(d.graph.has_directed(idx("Eld"), idx("D_Eld")));
        assert_eq!(d.band(idx("Eld"), idx("D_Eld")), Some(ConfidenceBand::High));
        assert!(d.graph.has_undirected(idx("Nbr"), idx("FamFrds")));
        assert!(d.graph.has_directed(idx("EvcNtc"), idx("Evc")));
        assert_eq!(d.band(idx("EvcNtc"), idx("Evc")), Some(ConfidenceBand::Low));
        assert!(!d.graph.is_adjacent(idx("X"), idx("Y")));

        let empty = AveragedNetwork::from_edges(vec![], 1, Algorithm::PcStable, 0);
        assert_eq!(to_display_graph(&empty).graph.edge_count(), 0);
    }

    #[test]
    fn zero_replicates_rejected() {
        assert!(check_replicates(0).is_err());
        assert!(EdgeTally::new(vec![])
            .finish(Algorithm::PcStable, 0)
            .is_err());
    }
}
