//! Network definition files (TOML), used by `simulate`.
//!
//! ```toml
//! [[node]]
//! name = "A"
//! levels = ["no", "yes"]
//! cpt = [[0.6, 0.4]]
//!
//! [[node]]
//! name = "B"
//! levels = ["no", "yes"]
//! parents = ["A"]
//! # one row per parent configuration, first parent slowest
//! cpt = [[0.85, 0.15], [0.15, 0.85]]
//! ```

use serde::{Deserialize, Serialize};

use bnstruct_core::dataset::Variable;
use bnstruct_core::graph::Dag;
use bnstruct_core::params_sim::{BayesianNetwork, Cpt};

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub node: Vec<NodeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub name: String,
    pub levels: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub cpt: Vec<Vec<f64>>,
}

pub(crate) fn line_of(text: &str, offset: usize) -> u64 {
    text[..offset.min(text.len())].matches('\n').count() as u64 + 1
}

pub(crate) fn toml_error(text: &str, source: &str, e: toml::de::Error) -> Error {
    let line = e.span().map(|s| line_of(text, s.start));
    Error::parse(source, line, e.message().to_string())
}

pub fn parse_network(text: &str, source: &str) -> Result<BayesianNetwork> {
    let file: NetworkFile = toml::from_str(text).map_err(|e| toml_error(text, source, e))?;
    build_network(&file, source)
}

pub fn build_network(file: &NetworkFile, source: &str) -> Result<BayesianNetwork> {
    let bad = |path: String, msg: String| Error::parse(source, None, format!("{path}: {msg}"));
    if file.node.is_empty() {
        return Err(bad("node".into(), "at least one node is required".into()));
    }
    let index = |name: &str| file.node.iter().position(|n| n.name == name);
    let mut edges = Vec::new();
    for (i, n) in file.node.iter().enumerate() {
        if index(&n.name) != Some(i) {
            return Err(bad(
                format!("node[{i}].name"),
                format!("duplicate node `{}`", n.name),
            ));
        }
        for (k, p) in n.parents.iter().enumerate() {
            match index(p) {
                Some(j) if j != i => edges.push((j, i)),
                Some(_) => {
                    return Err(bad(
                        format!("node[{i}].parents[{k}]"),
                        "a node cannot be its own parent".into(),
                    ))
                }
                None => {
                    return Err(bad(
                        format!("node[{i}].parents[{k}]"),
                        format!("unknown node `{p}`"),
                    ))
                }
            }
        }
    }
    let variables = file
        .node
        .iter()
        .enumerate()
        .map(|(i, n)| {
            Variable::new(n.name.clone(), n.levels.clone())
                .map_err(|e| bad(format!("node[{i}].levels"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let names = file.node.iter().map(|n| n.name.clone()).collect();
    let dag = Dag::new(names, &edges).map_err(|e| bad("node[*].parents".into(), e.to_string()))?;

    let mut cpts = Vec::with_capacity(file.node.len());
    for (i, n) in file.node.iter().enumerate() {
        let parents: Vec<usize> = n
            .parents
            .iter()
            .map(|p| index(p).expect("checked above"))
            .collect();
        let rows: usize = parents.iter().map(|&p| variables[p].arity()).product();
        if n.cpt.len() != rows {
            return Err(bad(
                format!("node[{i}].cpt"),
                format!("expected {rows} rows, got {}", n.cpt.len()),
            ));
        }
        for (r, row) in n.cpt.iter().enumerate() {
            let path = format!("node[{i}].cpt[{r}]");
            if row.len() != variables[i].arity() {
                return Err(bad(
                    path,
                    format!(
                        "expected {} probabilities, got {}",
                        variables[i].arity(),
                        row.len()
                    ),
                ));
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(bad(
                    path,
                    "probabilities must be finite and non-negative".into(),
                ));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(bad(path, format!("probabilities sum to {sum}")));
            }
        }
        cpts.push(Cpt {
            node: i,
            parents,
            table: n.cpt.clone(),
        });
    }
    BayesianNetwork::new(variables, dag, cpts).map_err(|e| bad("node".into(), e.to_string()))
}

pub fn to_network_file(bn: &BayesianNetwork) -> NetworkFile {
    let names = bn.dag().nodes();
    NetworkFile {
        node: bn
            .variables()
            .iter()
            .zip(bn.cpts())
            .map(|(v, cpt)| NodeSpec {
                name: v.name().to_string(),
                levels: v.levels().to_vec(),
                parents: cpt.parents.iter().map(|&p| names[p].clone()).collect(),
                cpt: cpt.table.clone(),
            })
            .collect(),
    }
}

pub fn write_network(bn: &BayesianNetwork) -> String {
    toml::to_string(&to_network_file(bn)).expect("network file serializes")
}
