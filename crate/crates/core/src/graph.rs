//! Partially directed graphs: skeletons, v-structure orientation, Meek rules,
//! CPDAGs, d-separation and structural Hamming distance.
//!
//! All orientation passes visit nodes in name order, so results do not depend
//! on the order in which variables were supplied.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::constraints::{Admissibility, ConstraintSet, PairRules};
use crate::{Error, Result};

/// State of the pair `(i, j)` seen from `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeMark {
    None,
    /// `i → j`
    Out,
    /// `j → i`
    In,
    /// `i — j`
    Undirected,
}

impl EdgeMark {
    fn flipped(self) -> Self {
        match self {
            EdgeMark::Out => EdgeMark::In,
            EdgeMark::In => EdgeMark::Out,
            m => m,
        }
    }
}

/// An edge identified by node names, for comparisons across node orders.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamedEdge {
    Directed(String, String),
    /// Endpoints in ascending name order.
    Undirected(String, String),
}

/// Partially directed graph with at most one edge per pair and an acyclic
/// directed part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdag {
    nodes: Vec<String>,
    marks: Vec<EdgeMark>,
}

impl Pdag {
    /// An empty graph on the given nodes.
    pub fn new(nodes: Vec<String>) -> Result<Self> {
        let unique: BTreeSet<&String> = nodes.iter().collect();
        if unique.len() != nodes.len() {
            return Err(Error::InvalidGraph("duplicate node names".into()));
        }
        let n = nodes.len();
        Ok(Self {
            nodes,
            marks: vec![EdgeMark::None; n * n],
        })
    }

    /// The complete undirected graph on the given nodes.
    pub fn complete(nodes: Vec<String>) -> Result<Self> {
        let mut g = Self::new(nodes)?;
        let n = g.n();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    g.marks[i * n + j] = EdgeMark::Undirected;
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn name(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|s| s == name)
    }

    /// Node indices sorted by name.
    pub fn name_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.nodes[a].cmp(&self.nodes[b]));
        order
    }

    pub fn mark(&self, i: usize, j: usize) -> EdgeMark {
        self.marks[i * self.n() + j]
    }

    fn set(&mut self, i: usize, j: usize, m: EdgeMark) {
        let n = self.n();
        self.marks[i * n + j] = m;
        self.marks[j * n + i] = m.flipped();
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.mark(i, j) != EdgeMark::None
    }

    pub fn has_directed(&self, from: usize, to: usize) -> bool {
        self.mark(from, to) == EdgeMark::Out
    }

    pub fn has_undirected(&self, i: usize, j: usize) -> bool {
        self.mark(i, j) == EdgeMark::Undirected
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::InvalidGraph(format!(
                "self-loop on `{}`",
                self.nodes[i]
            )));
        }
        if i >= self.n() || j >= self.n() {
            return Err(Error::InvalidGraph("node index out of range".into()));
        }
        Ok(())
    }

    pub fn add_undirected(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_pair(i, j)?;
        if self.is_adjacent(i, j) {
            return Err(Error::InvalidGraph(format!(
                "`{}` and `{}` are already adjacent",
                self.nodes[i], self.nodes[j]
            )));
        }
        self.set(i, j, EdgeMark::Undirected);
        Ok(())
    }

    pub fn add_directed(&mut self, from: usize, to: usize) -> Result<()> {
        self.check_pair(from, to)?;
        if self.is_adjacent(from, to) {
            return Err(Error::InvalidGraph(format!(
                "`{}` and `{}` are already adjacent",
                self.nodes[from], self.nodes[to]
            )));
        }
        if self.has_directed_path(to, from) {
            return Err(Error::InvalidGraph(format!(
                "`{}` → `{}` would close a directed cycle",
                self.nodes[from], self.nodes[to]
            )));
        }
        self.set(from, to, EdgeMark::Out);
        Ok(())
    }

    /// Turns an existing edge into `from → to`.
    pub fn orient(&mut self, from: usize, to: usize) -> Result<()> {
        self.check_pair(from, to)?;
        if !self.is_adjacent(from, to) {
            return Err(Error::InvalidGraph(format!(
                "no edge between `{}` and `{}`",
                self.nodes[from], self.nodes[to]
            )));
        }
        if !self.has_directed(from, to) && self.would_create_cycle(from, to) {
            return Err(Error::InvalidGraph(format!(
                "`{}` → `{}` would close a directed cycle",
                self.nodes[from], self.nodes[to]
            )));
        }
        self.set(from, to, EdgeMark::Out);
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.set(i, j, EdgeMark::None);
    }

    fn neighbors_with(&self, i: usize, mark: EdgeMark) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.mark(i, j) == mark).collect()
    }

    pub fn parents(&self, i: usize) -> Vec<usize> {
        self.neighbors_with(i, EdgeMark::In)
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        self.neighbors_with(i, EdgeMark::Out)
    }

    pub fn undirected_neighbors(&self, i: usize) -> Vec<usize> {
        self.neighbors_with(i, EdgeMark::Undirected)
    }

    pub fn adjacent(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.is_adjacent(i, j)).collect()
    }

    /// Directed edges as `(from, to)`.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_directed(i, j))
            .collect()
    }

    /// Undirected edges as `(i, j)` with `i < j`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_undirected(i, j))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.marks.iter().filter(|&&m| m != EdgeMark::None).count() / 2
    }

    /// Whether `from` reaches `to` along directed edges.
    pub fn has_directed_path(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for c in self.children(v) {
                if c == to {
                    return true;
                }
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// Whether making `from → to` directed would close a directed cycle.
    pub fn would_create_cycle(&self, from: usize, to: usize) -> bool {
        self.has_directed_path(to, from)
    }

    /// Checks the acyclicity invariant (the pair invariants hold by
    /// construction).
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            if self.mark(i, i) != EdgeMark::None {
                return Err(Error::InvalidGraph("self-loop".into()));
            }
        }
        if topological_order(self).is_none() {
            return Err(Error::InvalidGraph("directed part contains a cycle".into()));
        }
        Ok(())
    }

    /// The same graph with all edges undirected.
    pub fn skeleton(&self) -> Pdag {
        let mut g = self.clone();
        for m in &mut g.marks {
            if *m != EdgeMark::None {
                *m = EdgeMark::Undirected;
            }
        }
        g
    }

    pub fn named_edges(&self) -> BTreeSet<NamedEdge> {
        let mut out = BTreeSet::new();
        for (i, j) in self.directed_edges() {
            out.insert(NamedEdge::Directed(
                self.nodes[i].clone(),
                self.nodes[j].clone(),
            ));
        }
        for (i, j) in self.undirected_edges() {
            let (a, b) = ordered(&self.nodes[i], &self.nodes[j]);
            out.insert(NamedEdge::Undirected(a.clone(), b.clone()));
        }
        out
    }

    /// Unordered adjacent name pairs.
    pub fn named_skeleton(&self) -> BTreeSet<(String, String)> {
        let n = self.n();
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.is_adjacent(i, j) {
                    let (a, b) = ordered(&self.nodes[i], &self.nodes[j]);
                    out.insert((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// The same graph over the same names listed in `order`.
    pub fn reordered(&self, order: &[String]) -> Result<Pdag> {
        let map = self.index_map(order)?;
        let mut g = Pdag::new(order.to_vec())?;
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                g.marks[map[i] * n + map[j]] = self.mark(i, j);
            }
        }
        Ok(g)
    }

    /// For every node of `self`, its index in `other_nodes`.
    fn index_map(&self, other_nodes: &[String]) -> Result<Vec<usize>> {
        if other_nodes.len() != self.n() {
            return Err(Error::NodeSetMismatch);
        }
        let lookup: BTreeMap<&str, usize> = other_nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if lookup.len() != other_nodes.len() {
            return Err(Error::NodeSetMismatch);
        }
        self.nodes
            .iter()
            .map(|s| {
                lookup
                    .get(s.as_str())
                    .copied()
                    .ok_or(Error::NodeSetMismatch)
            })
            .collect()
    }

    /// Unshielded colliders `a → c ← b` as `(a, c, b)` with `a < b`.
    pub fn v_structures(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for c in 0..self.n() {
            let parents = self.parents(c);
            for (k, &a) in parents.iter().enumerate() {
                for &b in &parents[k + 1..] {
                    if !self.is_adjacent(a, b) {
                        out.insert((a.min(b), c, a.max(b)));
                    }
                }
            }
        }
        out
    }
}

fn ordered<'a>(a: &'a String, b: &'a String) -> (&'a String, &'a String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Topological order of the directed part (undirected edges ignored), ties
/// broken by name. `None` when the directed part has a cycle.
pub fn topological_order(g: &Pdag) -> Option<Vec<usize>> {
    let n = g.n();
    let mut indeg: Vec<usize> = (0..n).map(|i| g.parents(i).len()).collect();
    let rank = name_rank(g);
    let mut ready: BTreeSet<(usize, usize)> = (0..n)
        .filter(|&i| indeg[i] == 0)
        .map(|i| (rank[i], i))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some((r, v)) = ready.iter().next().copied() {
        ready.remove(&(r, v));
        order.push(v);
        for c in g.children(v) {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.insert((rank[c], c));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Rank of each node in name order.
fn name_rank(g: &Pdag) -> Vec<usize> {
    let mut rank = vec![0; g.n()];
    for (r, i) in g.name_order().into_iter().enumerate() {
        rank[i] = r;
    }
    rank
}

/// A fully directed acyclic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag(Pdag);

impl Dag {
    pub fn new(nodes: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Pdag::new(nodes)?;
        for &(a, b) in edges {
            g.add_directed(a, b)?;
        }
        Ok(Dag(g))
    }

    /// Builds a DAG from name pairs.
    pub fn from_names(nodes: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = nodes.iter().map(|s| String::from(*s)).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::UnknownVariable(String::from(s)))
        };
        let pairs = edges
            .iter()
            .map(|&(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, &pairs)
    }

    pub fn as_pdag(&self) -> &Pdag {
        &self.0
    }

    pub fn into_pdag(self) -> Pdag {
        self.0
    }

    pub fn nodes(&self) -> &[String] {
        self.0.nodes()
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn parents(&self, i: usize) -> Vec<usize> {
        self.0.parents(i)
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        self.0.children(i)
    }

    pub fn topological_order(&self) -> Vec<usize> {
        topological_order(&self.0).expect("Dag is acyclic")
    }
}

impl TryFrom<Pdag> for Dag {
    type Error = Error;

    fn try_from(g: Pdag) -> Result<Self> {
        if !g.undirected_edges().is_empty() {
            return Err(Error::InvalidGraph("graph has undirected edges".into()));
        }
        g.validate()?;
        Ok(Dag(g))
    }
}

/// Separating sets keyed by unordered node pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SepsetMap(BTreeMap<(usize, usize), Vec<usize>>);

impl SepsetMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: usize, b: usize, mut set: Vec<usize>) {
        set.sort_unstable();
        self.0.insert((a.min(b), a.max(b)), set);
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&[usize]> {
        self.0.get(&(a.min(b), a.max(b))).map(Vec::as_slice)
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.get(a, b).is_some()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<usize>)> {
        self.0.iter()
    }
}

/// Why an orientation was not applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictReason {
    /// The edge was already oriented the other way.
    AlreadyReversed,
    /// The wanted direction is blacklisted.
    Blacklisted,
    /// The orientation would close a directed cycle.
    Cycle,
}

/// An orientation that was skipped. `collider` is the `(x, z, y)` triple that
/// demanded it, or `None` for blacklist-forced orientations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationConflict {
    pub from: usize,
    pub to: usize,
    pub collider: Option<(usize, usize, usize)>,
    pub reason: ConflictReason,
}

/// Result of [`orient_v_structures`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oriented {
    pub graph: Pdag,
    pub conflicts: Vec<OrientationConflict>,
}

fn try_orient(
    g: &mut Pdag,
    rules: &PairRules,
    from: usize,
    to: usize,
    collider: Option<(usize, usize, usize)>,
    conflicts: &mut Vec<OrientationConflict>,
) {
    let reason = match g.mark(from, to) {
        EdgeMark::Out | EdgeMark::None => return,
        EdgeMark::In => ConflictReason::AlreadyReversed,
        EdgeMark::Undirected if rules.blocked(from, to) => ConflictReason::Blacklisted,
        EdgeMark::Undirected if g.would_create_cycle(from, to) => ConflictReason::Cycle,
        EdgeMark::Undirected => {
            g.set(from, to, EdgeMark::Out);
            return;
        }
    };
    log::debug!(
        "orientation {} -> {} skipped: {:?}",
        g.name(from),
        g.name(to),
        reason
    );
    conflicts.push(OrientationConflict {
        from,
        to,
        collider,
        reason,
    });
}

/// Applies blacklist-forced orientations, then orients every unshielded
/// triple `x — z — y` with `z` outside `sepset(x, y)` as `x → z ← y`.
///
/// Triples are visited in name order of `(x, z, y)`; an orientation that
/// clashes with an earlier one, is blacklisted, or would close a cycle is
/// skipped and recorded as a conflict. Pairs absent from the skeleton without
/// a recorded sepset are not treated as colliders.
pub fn orient_v_structures(
    skeleton: &Pdag,
    sepsets: &SepsetMap,
    constraints: &ConstraintSet,
) -> Oriented {
    let rules = constraints.resolve(skeleton.nodes());
    orient_v_structures_with(skeleton, sepsets, &rules)
}

pub(crate) fn orient_v_structures_with(
    skeleton: &Pdag,
    sepsets: &SepsetMap,
    rules: &PairRules,
) -> Oriented {
    let mut g = skeleton.clone();
    let mut conflicts = Vec::new();
    let order = g.name_order();

    for (a, &x) in order.iter().enumerate() {
        for &y in &order[a + 1..] {
            if !g.is_adjacent(x, y) {
                continue;
            }
            match rules.admissibility(x, y) {
                Admissibility::Free => {}
                Admissibility::ForcedXToY => try_orient(&mut g, rules, x, y, None, &mut conflicts),
                Admissibility::ForcedYToX => try_orient(&mut g, rules, y, x, None, &mut conflicts),
                Admissibility::Forbidden => {
                    log::debug!("removing forbidden edge {} - {}", g.name(x), g.name(y));
                    g.remove_edge(x, y);
                }
            }
        }
    }

    for (a, &x) in order.iter().enumerate() {
        for &z in &order {
            if z == x || !g.is_adjacent(x, z) {
                continue;
            }
            for &y in &order[a + 1..] {
                if y == z || !g.is_adjacent(z, y) || g.is_adjacent(x, y) {
                    continue;
                }
                let Some(sep) = sepsets.get(x, y) else {
                    continue;
                };
                if sep.contains(&z) {
                    continue;
                }
                try_orient(&mut g, rules, x, z, Some((x, z, y)), &mut conflicts);
                try_orient(&mut g, rules, y, z, Some((x, z, y)), &mut conflicts);
            }
        }
    }
    Oriented {
        graph: g,
        conflicts,
    }
}

/// Whether Meek rules R1–R4 force `a — b` into `a → b`.
fn meek_forces(g: &Pdag, a: usize, b: usize) -> bool {
    let n = g.n();
    // R1: c → a — b, c and b nonadjacent
    if (0..n).any(|c| g.has_directed(c, a) && c != b && !g.is_adjacent(c, b)) {
        return true;
    }
    // R2: a → c → b
    if (0..n).any(|c| g.has_directed(a, c) && g.has_directed(c, b)) {
        return true;
    }
    // R3: a — c → b, a — d → b, c and d nonadjacent
    let und = g.undirected_neighbors(a);
    for (k, &c) in und.iter().enumerate() {
        if c == b || !g.has_directed(c, b) {
            continue;
        }
        for &d in &und[k + 1..] {
            if d != b && g.has_directed(d, b) && !g.is_adjacent(c, d) {
                return true;
            }
        }
    }
    // R4: a — c → d → b, a adjacent to d, c and b nonadjacent
    for &c in &und {
        if c == b || g.is_adjacent(c, b) {
            continue;
        }
        for d in g.children(c) {
            if d != a && d != b && g.has_directed(d, b) && g.is_adjacent(a, d) {
                return true;
            }
        }
    }
    false
}

fn creates_new_v_structure(g: &Pdag, from: usize, to: usize) -> bool {
    g.parents(to)
        .into_iter()
        .any(|w| w != from && !g.is_adjacent(w, from))
}

/// Closes a PDAG under Meek rules R1–R4.
///
/// Undirected edges are visited in name order and rules are reapplied until
/// nothing changes. An application that would close a cycle, introduce a new
/// v-structure, or use a blacklisted direction is skipped.
pub fn apply_meek_rules(g: &Pdag, constraints: &ConstraintSet) -> Pdag {
    let rules = constraints.resolve(g.nodes());
    apply_meek_rules_with(g, &rules)
}

pub(crate) fn apply_meek_rules_with(g: &Pdag, rules: &PairRules) -> Pdag {
    let mut g = g.clone();
    let order = g.name_order();
    loop {
        let mut changed = false;
        for &a in &order {
            for &b in &order {
                if a == b || !g.has_undirected(a, b) {
                    continue;
                }
                if meek_forces(&g, a, b)
                    && !rules.blocked(a, b)
                    && !g.would_create_cycle(a, b)
                    && !creates_new_v_structure(&g, a, b)
                {
                    g.set(a, b, EdgeMark::Out);
                    changed = true;
                }
            }
        }
        if !changed {
            return g;
        }
    }
}

/// Completed PDAG of a DAG: compelled edges directed, reversible edges
/// undirected. Uses edge ordering and compelled-edge labelling over a
/// topological order rather than rule propagation.
pub fn cpdag_of(dag: &Dag) -> Pdag {
    let g = dag.as_pdag();
    let n = g.n();
    let topo = dag.topological_order();
    let mut pos = vec![0; n];
    for (p, &v) in topo.iter().enumerate() {
        pos[v] = p;
    }
    // lowest child first, highest parent first within a child
    let mut ordered_edges = Vec::new();
    for &y in &topo {
        let mut parents = g.parents(y);
        parents.sort_by(|&a, &b| pos[b].cmp(&pos[a]));
        ordered_edges.extend(parents.into_iter().map(|x| (x, y)));
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Label {
        Unknown,
        Compelled,
        Reversible,
    }
    let mut label = vec![Label::Unknown; n * n];
    for &(x, y) in &ordered_edges {
        if label[x * n + y] != Label::Unknown {
            continue;
        }
        let mut finished = false;
        for w in g.parents(x) {
            if label[w * n + x] != Label::Compelled {
                continue;
            }
            if !g.has_directed(w, y) {
                for p in g.parents(y) {
                    label[p * n + y] = Label::Compelled;
                }
                finished = true;
                break;
            }
            label[w * n + y] = Label::Compelled;
        }
        if finished {
            continue;
        }
        let compelled = g
            .parents(y)
            .into_iter()
            .any(|z| z != x && !g.has_directed(z, x));
        let fill = if compelled {
            Label::Compelled
        } else {
            Label::Reversible
        };
        for p in g.parents(y) {
            if label[p * n + y] == Label::Unknown {
                label[p * n + y] = fill;
            }
        }
    }

    let mut out = Pdag::new(g.nodes().to_vec()).expect("dag nodes are unique");
    for (x, y) in ordered_edges {
        let mark = if label[x * n + y] == Label::Compelled {
            EdgeMark::Out
        } else {
            EdgeMark::Undirected
        };
        out.set(x, y, mark);
    }
    out
}

/// Whether `x` and `y` are d-separated by `z` in `dag`, decided on the
/// moralized ancestral graph.
pub fn d_separated(dag: &Dag, x: usize, y: usize, z: &[usize]) -> bool {
    let g = dag.as_pdag();
    let n = g.n();
    // ancestors of {x, y} ∪ z
    let mut keep = vec![false; n];
    let mut stack: Vec<usize> = z.iter().copied().chain([x, y]).collect();
    while let Some(v) = stack.pop() {
        if keep[v] {
            continue;
        }
        keep[v] = true;
        stack.extend(g.parents(v));
    }
    // moralize: parent-child links plus married co-parents
    let mut adj = vec![false; n * n];
    let mut link = |a: usize, b: usize| {
        adj[a * n + b] = true;
        adj[b * n + a] = true;
    };
    for v in (0..n).filter(|&v| keep[v]) {
        let parents = g.parents(v);
        for (k, &p) in parents.iter().enumerate() {
            link(p, v);
            for &q in &parents[k + 1..] {
                link(p, q);
            }
        }
    }
    let blocked: Vec<bool> = (0..n).map(|v| z.contains(&v)).collect();
    let mut seen = vec![false; n];
    let mut stack = vec![x];
    seen[x] = true;
    while let Some(v) = stack.pop() {
        if v == y {
            return false;
        }
        for w in 0..n {
            if adj[v * n + w] && keep[w] && !blocked[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    true
}

/// Structural Hamming distance: one per node pair whose edge state differs
/// (missing, extra, reversed, or directed vs undirected). Nodes are matched
/// by name.
pub fn shd(a: &Pdag, b: &Pdag) -> Result<usize> {
    let map = a.index_map(b.nodes())?;
    let n = a.n();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if a.mark(i, j) != b.mark(map[i], map[j]) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn undirected(nodes: &[&str], edges: &[(usize, usize)]) -> Pdag {
        let mut g = Pdag::new(names(nodes)).unwrap();
        for &(a, b) in edges {
            g.add_undirected(a, b).unwrap();
        }
        g
    }

    #[test]
    fn pair_invariants_and_cycles() {
        let mut g = undirected(&["A", "B", "C"], &[]);
        g.add_directed(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        assert!(g.add_directed(2, 0).is_err());
        assert!(g.add_undirected(0, 1).is_err());
        assert!(g.add_undirected(1, 1).is_err());
        g.add_undirected(0, 2).unwrap();
        assert!(g.orient(2, 0).is_err());
        g.orient(0, 2).unwrap();
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(Dag::try_from(g).unwrap().topological_order(), vec![0, 1, 2]);
    }

    #[test]
    fn textbook_collider() {
        let skel = undirected(&["A", "B", "C"], &[(0, 2), (1, 2)]);
        let mut sep = SepsetMap::new();
        sep.insert(0, 1, vec![]);
        let out = orient_v_structures(&skel, &sep, &ConstraintSet::none());
        assert!(out.conflicts.is_empty());
        assert!(out.graph.has_directed(0, 2));
        assert!(out.graph.has_directed(1, 2));
    }

    #[test]
    fn chain_with_middle_in_sepset_stays_undirected() {
        let skel = undirected(&["A", "B", "C"], &[(0, 1), (1, 2)]);
        let mut sep = SepsetMap::new();
        sep.insert(0, 2, vec![1]);
        let out = orient_v_structures(&skel, &sep, &ConstraintSet::none());
        assert_eq!(out.graph, skel);
    }

    #[test]
    fn conflicting_colliders_keep_first_orientation() {
        // A - B - C - D with sepsets that make both B and C colliders:
        // (A,B,C) orients A→B←C, then (B,C,D) wants B→C, which clashes.
        let skel = undirected(&["A", "B", "C", "D"], &[(0, 1), (1, 2), (2, 3)]);
        let mut sep = SepsetMap::new();
        sep.insert(0, 2, vec![]);
        sep.insert(1, 3, vec![]);
        sep.insert(0, 3, vec![1, 2]);
        let out = orient_v_structures(&skel, &sep, &ConstraintSet::none());
        assert!(out.graph.has_directed(0, 1));
        assert!(out.graph.has_directed(2, 1));
        assert!(out.graph.has_directed(3, 2));
        assert_eq!(out.conflicts.len(), 1);
        assert_eq!(out.conflicts[0].reason, ConflictReason::AlreadyReversed);
        assert_eq!((out.conflicts[0].from, out.conflicts[0].to), (1, 2));
    }

    #[test]
    fn blacklist_blocks_collider_and_forces_direction() {
        let skel = undirected(&["A", "B", "C"], &[(0, 2), (1, 2)]);
        let mut sep = SepsetMap::new();
        sep.insert(0, 1, vec![]);
        let c = ConstraintSet::from_blacklist([("A", "C")]);
        let out = orient_v_structures(&skel, &sep, &c);
        // forced C → A first, then the collider wants A → C: conflict
        assert!(out.graph.has_directed(2, 0));
        assert!(out.graph.has_directed(1, 2));
        assert_eq!(out.conflicts[0].reason, ConflictReason::AlreadyReversed);
    }

    #[test]
    fn meek_r1_and_undirected_triangle() {
        let mut g = undirected(&["A", "B", "C"], &[(1, 2)]);
        g.add_directed(0, 1).unwrap();
        let out = apply_meek_rules(&g, &ConstraintSet::none());
        assert!(out.has_directed(1, 2));

        let tri = undirected(&["A", "B", "C"], &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(apply_meek_rules(&tri, &ConstraintSet::none()), tri);
    }

    #[test]
    fn meek_r2_and_r3() {
        // R2: A → B → C, A — C
        let mut g = undirected(&["A", "B", "C"], &[(0, 2)]);
        g.add_directed(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        assert!(apply_meek_rules(&g, &ConstraintSet::none()).has_directed(0, 2));

        // R3: A — C → B, A — D → B, A — B, C and D nonadjacent
        let mut g = undirected(&["A", "B", "C", "D"], &[(0, 2), (0, 3), (0, 1)]);
        g.add_directed(2, 1).unwrap();
        g.add_directed(3, 1).unwrap();
        let out = apply_meek_rules(&g, &ConstraintSet::none());
        assert!(out.has_directed(0, 1));
        assert!(out.has_undirected(0, 2));
    }

    #[test]
    fn meek_r4_fires_on_background_knowledge() {
        // A — B, A — C, A — D, C → D → B, C and B nonadjacent
        let mut g = undirected(&["A", "B", "C", "D"], &[(0, 1), (0, 2), (0, 3)]);
        g.add_directed(2, 3).unwrap();
        g.add_directed(3, 1).unwrap();
        let out = apply_meek_rules(&g, &ConstraintSet::none());
        assert!(out.has_directed(0, 1));
    }

    #[test]
    fn meek_respects_blacklist() {
        let mut g = undirected(&["A", "B", "C"], &[(1, 2)]);
        g.add_directed(0, 1).unwrap();
        let out = apply_meek_rules(&g, &ConstraintSet::from_blacklist([("B", "C")]));
        assert!(out.has_undirected(1, 2));
    }

    #[test]
    fn cpdag_examples() {
        let chain = Dag::from_names(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        let c = cpdag_of(&chain);
        assert!(c.directed_edges().is_empty());
        assert_eq!(c.undirected_edges(), vec![(0, 1), (1, 2)]);

        let collider = Dag::from_names(&["A", "B", "C"], &[("A", "C"), ("B", "C")]).unwrap();
        let c = cpdag_of(&collider);
        assert_eq!(c.directed_edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn d_separation_basics() {
        let chain = Dag::from_names(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        assert!(!d_separated(&chain, 0, 2, &[]));
        assert!(d_separated(&chain, 0, 2, &[1]));
        let collider =
            Dag::from_names(&["A", "B", "C", "D"], &[("A", "C"), ("B", "C"), ("C", "D")]).unwrap();
        assert!(d_separated(&collider, 0, 1, &[]));
        assert!(!d_separated(&collider, 0, 1, &[2]));
        assert!(!d_separated(&collider, 0, 1, &[3]));
    }

    #[test]
    fn shd_examples() {
        let a = undirected(&["A", "B"], &[(0, 1)]);
        let mut b = Pdag::new(names(&["A", "B"])).unwrap();
        assert_eq!(shd(&a, &a).unwrap(), 0);
        assert_eq!(shd(&a, &b).unwrap(), 1);
        b.add_directed(0, 1).unwrap();
        assert_eq!(shd(&a, &b).unwrap(), 1);
        let mut r = Pdag::new(names(&["A", "B"])).unwrap();
        r.add_directed(1, 0).unwrap();
        assert_eq!(shd(&b, &r).unwrap(), 1);
        let other = Pdag::new(names(&["A", "C"])).unwrap();
        assert_eq!(shd(&a, &other), Err(Error::NodeSetMismatch));
        // node order does not matter
        let flipped = b.reordered(&names(&["B", "A"])).unwrap();
        assert_eq!(shd(&b, &flipped).unwrap(), 0);
    }
}
