//! Canned ground-truth networks for recovery experiments.
//!
//! * [`chain`]: `A → B → C`, binary noisy copies.
//! * [`collider`]: `A → C ← B`, binary.
//! * [`tiered`]: eight survey-style variables in three tiers plus a binary
//!   target `Evc`, with effects strong enough for recovery at N = 50,000.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Variable;
use crate::graph::Dag;
use crate::params_sim::{BayesianNetwork, Cpt};

fn build(
    nodes: &[(&str, &[&str])],
    edges: &[(&str, &str)],
    tables: Vec<Vec<Vec<f64>>>,
) -> BayesianNetwork {
    let names: Vec<&str> = nodes.iter().map(|(n, _)| *n).collect();
    let dag = Dag::from_names(&names, edges).expect("benchmark DAG is valid");
    let variables = nodes
        .iter()
        .map(|(n, levels)| Variable::with_levels(n, levels).expect("benchmark variable is valid"))
        .collect();
    let cpts = tables
        .into_iter()
        .enumerate()
        .map(|(node, table)| Cpt {
            node,
            parents: dag.parents(node),
            table,
        })
        .collect();
    BayesianNetwork::new(variables, dag, cpts).expect("benchmark network is valid")
}

const BINARY: &[&str] = &["0", "1"];

pub fn chain() -> BayesianNetwork {
    build(
        &[("A", BINARY), ("B", BINARY), ("C", BINARY)],
        &[("A", "B"), ("B", "C")],
        vec![
            vec![vec![0.6, 0.4]],
            vec![vec![0.85, 0.15], vec![0.15, 0.85]],
            vec![vec![0.8, 0.2], vec![0.2, 0.8]],
        ],
    )
}

pub fn collider() -> BayesianNetwork {
    build(
        &[("A", BINARY), ("B", BINARY), ("C", BINARY)],
        &[("A", "C"), ("B", "C")],
        vec![
            vec![vec![0.5, 0.5]],
            vec![vec![0.5, 0.5]],
            // rows: (A, B) = 00, 01, 10, 11
            vec![
                vec![0.9, 0.1],
                vec![0.2, 0.8],
                vec![0.2, 0.8],
                vec![0.05, 0.95],
            ],
        ],
    )
}

/// Variables: `CstDst`, `Eld` (tier 1); `EvcNtc`, `Nbr`, `FamFrds` (tier 2);
/// `Rsk`, `D_Eld` (tier 3); `Evc` (target). `Eld` and `D_Eld` are
/// independent of the target.
pub fn tiered() -> BayesianNetwork {
    let yes_no: &[&str] = &["no", "yes"];
    build(
        &[
            ("CstDst", &["near", "mid", "far"]),
            ("Eld", yes_no),
            ("EvcNtc", yes_no),
            ("Nbr", yes_no),
            ("FamFrds", yes_no),
            ("Rsk", &["low", "mid", "high"]),
            ("D_Eld", yes_no),
            ("Evc", yes_no),
        ],
        &[
            ("CstDst", "EvcNtc"),
            ("CstDst", "Nbr"),
            ("Nbr", "FamFrds"),
            ("FamFrds", "Rsk"),
            ("Eld", "D_Eld"),
            ("EvcNtc", "Evc"),
            ("Nbr", "Evc"),
            ("Rsk", "Evc"),
        ],
        vec![
            vec![vec![0.35, 0.35, 0.30]],
            vec![vec![0.7, 0.3]],
            vec![vec![0.2, 0.8], vec![0.5, 0.5], vec![0.85, 0.15]],
            vec![vec![0.25, 0.75], vec![0.55, 0.45], vec![0.85, 0.15]],
            vec![vec![0.8, 0.2], vec![0.25, 0.75]],
            vec![vec![0.6, 0.3, 0.1], vec![0.15, 0.35, 0.5]],
            vec![vec![0.9, 0.1], vec![0.3, 0.7]],
            // rows: (EvcNtc, Nbr, Rsk), Rsk fastest
            vec![
                vec![0.88, 0.12],
                vec![0.71, 0.29],
                vec![0.45, 0.55],
                vec![0.60, 0.40],
                vec![0.33, 0.67],
                vec![0.14, 0.86],
                vec![0.60, 0.40],
                vec![0.33, 0.67],
                vec![0.14, 0.86],
                vec![0.23, 0.77],
                vec![0.09, 0.91],
                vec![0.03, 0.97],
            ],
        ],
    )
}

/// Target of the [`tiered`] network.
pub const TIERED_TARGET: &str = "Evc";

/// Three-tier assignment for the [`tiered`] network: background (1),
/// information and social cues (2), appraisals (3).
pub fn tiered_tiers() -> BTreeMap<String, u32> {
    [
        ("CstDst", 1),
        ("Eld", 1),
        ("EvcNtc", 2),
        ("Nbr", 2),
        ("FamFrds", 2),
        ("Rsk", 3),
        ("D_Eld", 3),
    ]
    .into_iter()
    .map(|(n, t)| (n.to_string(), t))
    .collect()
}
