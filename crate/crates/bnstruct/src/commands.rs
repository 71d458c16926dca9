//! The five pipeline commands. Each `cmd_*` reads its inputs from the
//! config; the `*_on` variants take an already-loaded dataset.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use bnstruct_core::averaging::{
    learn, to_display_graph_with, AveragedNetwork, DisplayThresholds, EdgeTally,
};
use bnstruct_core::constraints::{build_constraints, violations, ConstraintSet};
use bnstruct_core::dataset::Dataset;
use bnstruct_core::graph::Pdag;
use bnstruct_core::params_sim::ancestral_sample;
use bnstruct_core::pc_stable::PcConfig;
use bnstruct_core::select::{rank_features, select_features, RankedFeature};

use crate::config::PipelineConfig;
use crate::csvio::{load_csv_path, write_csv};
use crate::dot::{display_dot, learned_dot};
use crate::error::{Error, Result};
use crate::network::parse_network;
use crate::parallel::replicate_graphs_parallel;
use crate::tsv::{write_averaged, write_edges, write_selection};

const CONFIG: &str = "pipeline";

/// Loads the input and applies the recode spec.
pub fn load_dataset(cfg: &PipelineConfig) -> Result<Dataset> {
    let d = load_csv_path(cfg.require_input()?)?;
    if d.dropped_row_count() > 0 {
        log::info!("dropped {} rows with missing values", d.dropped_row_count());
    }
    if cfg.recode.is_identity() {
        return Ok(d);
    }
    d.apply_recode(&cfg.recode)
        .map_err(|e| Error::config(CONFIG, format!("recode: {e}")))
}

fn target_index(d: &Dataset, cfg: &PipelineConfig) -> Result<usize> {
    let target = cfg.require_target()?;
    d.index_of(target).ok_or_else(|| {
        Error::config(
            CONFIG,
            format!("target `{target}` is not a column of the dataset"),
        )
    })
}

/// Ranked features with their selection flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub ranked: Vec<RankedFeature>,
    /// Selected feature indices, in ranking order.
    pub selected: Vec<usize>,
}

pub fn select_on(d: &Dataset, cfg: &PipelineConfig) -> Result<Selection> {
    let target = target_index(d, cfg)?;
    Ok(Selection {
        ranked: rank_features(d, target),
        selected: select_features(d, target, cfg.thresholds.selection_fraction)?,
    })
}

/// `select`: the ranking TSV.
pub fn cmd_select(cfg: &PipelineConfig) -> Result<String> {
    let d = load_dataset(cfg)?;
    let s = select_on(&d, cfg)?;
    Ok(write_selection(&s.ranked, &s.selected))
}

/// The dataset learners run on and the constraints that apply to it.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub data: Dataset,
    pub constraints: ConstraintSet,
    pub pc: PcConfig,
}

/// Selection (when enabled), column subsetting and constraint building.
pub fn prepare(d: &Dataset, cfg: &PipelineConfig) -> Result<Analysis> {
    let target = target_index(d, cfg)?;
    let names = d.names();
    for v in cfg
        .tiers
        .keys()
        .chain(cfg.blacklist.iter().flat_map(|(a, b)| [a, b]))
    {
        if !names.contains(v) {
            return Err(Error::config(
                CONFIG,
                format!("unknown variable `{v}` in tiers or blacklist"),
            ));
        }
    }
    let mut keep: Vec<usize> = if cfg.select {
        let mut s = select_features(d, target, cfg.thresholds.selection_fraction)?;
        s.push(target);
        s
    } else {
        (0..d.n_vars()).collect()
    };
    keep.sort_unstable();
    let data = d.select_columns(&keep);
    let vars = data.names();
    log::info!("analysing {} variables: {}", vars.len(), vars.join(", "));

    let target = &names[target];
    let tiers = if cfg.tiers.is_empty() {
        vars.iter().map(|v| (v.clone(), 1)).collect()
    } else {
        cfg.tiers.clone()
    };
    let extra: Vec<(String, String)> = cfg
        .blacklist
        .iter()
        .filter(|(a, b)| vars.contains(a) && vars.contains(b))
        .cloned()
        .collect();
    let constraints = build_constraints(&vars, &tiers, target, &extra).map_err(|e| match e {
        bnstruct_core::Error::UnassignedTier(v) => {
            Error::config(CONFIG, format!("variable `{v}` has no tier"))
        }
        e => e.into(),
    })?;
    let pc = PcConfig {
        alpha: cfg.alpha,
        max_condition_size: cfg.max_condition_size,
    };
    pc.validate()?;
    Ok(Analysis {
        data,
        constraints,
        pc,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnOutput {
    pub graph: Pdag,
    pub edges_tsv: String,
    pub dot: String,
}

pub fn learn_on(d: &Dataset, cfg: &PipelineConfig) -> Result<LearnOutput> {
    let a = prepare(d, cfg)?;
    let graph = if a.data.n_vars() < 2 {
        Pdag::new(a.data.names())?
    } else {
        learn(&a.data, cfg.algorithm, &a.pc, &a.constraints)?
    };
    Ok(LearnOutput {
        edges_tsv: write_edges(&graph),
        dot: learned_dot(&graph),
        graph,
    })
}

/// `learn`: one structure on the full data.
pub fn cmd_learn(cfg: &PipelineConfig) -> Result<LearnOutput> {
    learn_on(&load_dataset(cfg)?, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageOutput {
    pub network: AveragedNetwork,
    pub tsv: String,
    pub dot: String,
    /// Constraint violations found across all replicate graphs.
    pub violations: Vec<(u64, String, String)>,
}

pub fn render_average(n: &AveragedNetwork, cfg: &PipelineConfig) -> (String, String) {
    let display = to_display_graph_with(
        n,
        DisplayThresholds {
            strength: cfg.thresholds.strength_cutoff,
            direction: cfg.thresholds.direction_cutoff,
        },
    );
    (write_averaged(n), display_dot(&display))
}

pub fn average_on(d: &Dataset, cfg: &PipelineConfig) -> Result<AverageOutput> {
    let a = prepare(d, cfg)?;
    let mut found = Vec::new();
    let network = if a.data.n_vars() < 2 {
        AveragedNetwork {
            nodes: a.data.names(),
            edges: Vec::new(),
            replicate_count: cfg.replicates,
            algorithm: cfg.algorithm,
            master_seed: cfg.master_seed,
        }
    } else {
        let graphs = replicate_graphs_parallel(
            &a.data,
            cfg.algorithm,
            &a.pc,
            &a.constraints,
            cfg.replicates,
            cfg.master_seed,
            cfg.workers,
        )?;
        let mut tally = EdgeTally::new(a.data.names());
        for (i, g) in graphs.iter().enumerate() {
            for (x, y) in violations(g, &a.constraints) {
                found.push((i as u64 + 1, x, y));
            }
            tally.add(g)?;
        }
        tally.finish(cfg.algorithm, cfg.master_seed)?
    };
    if !found.is_empty() {
        log::warn!("{} constraint violations across replicates", found.len());
    }
    let (tsv, dot) = render_average(&network, cfg);
    Ok(AverageOutput {
        network,
        tsv,
        dot,
        violations: found,
    })
}

/// `average`: bootstrap model averaging.
pub fn cmd_average(cfg: &PipelineConfig) -> Result<AverageOutput> {
    average_on(&load_dataset(cfg)?, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharedEdge {
    pub from: String,
    pub to: String,
    pub strength_a: f64,
    /// Probability of `from → to` in run A.
    pub direction_a: f64,
    pub strength_b: f64,
    /// Probability of `from → to` in run B.
    pub direction_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnlyEdge {
    pub from: String,
    pub to: String,
    pub strength: f64,
    pub direction: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Comparison {
    pub shared_variables: Vec<String>,
    pub shared: Vec<SharedEdge>,
    pub a_only: Vec<OnlyEdge>,
    pub b_only: Vec<OnlyEdge>,
    pub warnings: Vec<String>,
}

impl Comparison {
    pub fn contains_shared(&self, a: &str, b: &str) -> bool {
        self.shared
            .iter()
            .any(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.warnings {
            writeln!(out, "# warning: {w}").unwrap();
        }
        writeln!(out, "# shared: {}", self.shared.len()).unwrap();
        out.push_str("from\tto\tstrength_a\tdirection_a\tstrength_b\tdirection_b\n");
        for e in &self.shared {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                e.from, e.to, e.strength_a, e.direction_a, e.strength_b, e.direction_b
            )
            .unwrap();
        }
        for (label, rows) in [("a_only", &self.a_only), ("b_only", &self.b_only)] {
            writeln!(out, "# {label}: {}", rows.len()).unwrap();
            out.push_str("from\tto\tstrength\tdirection\n");
            for e in rows {
                writeln!(out, "{}\t{}\t{}\t{}", e.from, e.to, e.strength, e.direction).unwrap();
            }
        }
        out
    }
}

/// `compare`: edges at or above `strength_cutoff` in both runs, only A, only
/// B. Only variables present in both runs are compared.
pub fn cmd_compare(a: &AveragedNetwork, b: &AveragedNetwork, strength_cutoff: f64) -> Comparison {
    let va: BTreeSet<&String> = a.nodes.iter().collect();
    let vb: BTreeSet<&String> = b.nodes.iter().collect();
    let shared_vars: BTreeSet<&String> = va.intersection(&vb).copied().collect();
    let mut c = Comparison {
        shared_variables: shared_vars.iter().map(|s| s.to_string()).collect(),
        ..Comparison::default()
    };
    if shared_vars.is_empty() {
        let w = "the two runs have no variables in common".to_string();
        log::warn!("{w}");
        c.warnings.push(w);
        return c;
    }
    let excluded = va.symmetric_difference(&vb).count();
    if excluded > 0 {
        c.warnings.push(format!(
            "{excluded} variables appear in only one run and are ignored"
        ));
    }
    let in_scope =
        |from: &String, to: &String| shared_vars.contains(from) && shared_vars.contains(to);
    for e in a
        .edges
        .iter()
        .filter(|e| in_scope(&e.from, &e.to) && e.strength >= strength_cutoff)
    {
        let sb = b.strength(&e.from, &e.to);
        if sb >= strength_cutoff {
            c.shared.push(SharedEdge {
                from: e.from.clone(),
                to: e.to.clone(),
                strength_a: e.strength,
                direction_a: e.direction,
                strength_b: sb,
                direction_b: b
                    .orientation_probability(&e.from, &e.to)
                    .expect("edge is present"),
            });
        } else {
            c.a_only.push(OnlyEdge {
                from: e.from.clone(),
                to: e.to.clone(),
                strength: e.strength,
                direction: e.direction,
            });
        }
    }
    for e in b
        .edges
        .iter()
        .filter(|e| in_scope(&e.from, &e.to) && e.strength >= strength_cutoff)
    {
        if a.strength(&e.from, &e.to) < strength_cutoff {
            c.b_only.push(OnlyEdge {
                from: e.from.clone(),
                to: e.to.clone(),
                strength: e.strength,
                direction: e.direction,
            });
        }
    }
    c
}

/// `simulate`: `n` ancestral samples from a network file as CSV.
pub fn cmd_simulate(network_text: &str, source: &str, n: usize, seed: u64) -> Result<String> {
    let bn = parse_network(network_text, source)?;
    let d = ancestral_sample(&bn, n, seed)?;
    let mut out = Vec::new();
    write_csv(&mut out, &d).expect("writing to memory succeeds");
    Ok(String::from_utf8(out).expect("labels are UTF-8"))
}
