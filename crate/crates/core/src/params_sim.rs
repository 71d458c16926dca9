//! Conditional probability tables: fitting, ancestral sampling and exact
//! marginals by enumeration.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, Level, Variable};
use crate::graph::Dag;
use crate::{Error, Result};

const NORMALIZATION_TOL: f64 = 1e-9;

/// Conditional distribution of one node given its parents.
///
/// Row `k` of `table` is the distribution for parent configuration `k`, a
/// mixed-radix index with the first parent most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub node: usize,
    pub parents: Vec<usize>,
    pub table: Vec<Vec<f64>>,
}

impl Cpt {
    /// Row index for the given parent levels (in `parents` order).
    pub fn config_index(&self, parent_levels: &[Level], arities: &[usize]) -> usize {
        self.parents
            .iter()
            .zip(parent_levels)
            .fold(0, |acc, (&p, &l)| acc * arities[p] + l as usize)
    }
}

/// A DAG over named categorical variables with one CPT per node.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianNetwork {
    variables: Vec<Variable>,
    dag: Dag,
    cpts: Vec<Cpt>,
}

impl BayesianNetwork {
    /// Validates CPT shapes, normalization and parent sets against the DAG.
    /// `cpts[i]` must describe node `i`.
    pub fn new(variables: Vec<Variable>, dag: Dag, cpts: Vec<Cpt>) -> Result<Self> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidNetwork(msg));
        if variables.len() != dag.n() || cpts.len() != dag.n() {
            return bad(format!(
                "{} variables, {} DAG nodes, {} CPTs",
                variables.len(),
                dag.n(),
                cpts.len()
            ));
        }
        for (v, name) in variables.iter().zip(dag.nodes()) {
            if v.name() != name {
                return bad(format!(
                    "variable `{}` does not match DAG node `{name}`",
                    v.name()
                ));
            }
        }
        let arities: Vec<usize> = variables.iter().map(Variable::arity).collect();
        for (i, cpt) in cpts.iter().enumerate() {
            let name = variables[i].name();
            if cpt.node != i {
                return bad(format!("CPT {i} describes node {}", cpt.node));
            }
            let given: BTreeSet<usize> = cpt.parents.iter().copied().collect();
            let truth: BTreeSet<usize> = dag.parents(i).into_iter().collect();
            if given != truth || given.len() != cpt.parents.len() {
                return bad(format!("parents of `{name}` do not match the DAG"));
            }
            let rows: usize = cpt.parents.iter().map(|&p| arities[p]).product();
            if cpt.table.len() != rows {
                return bad(format!(
                    "`{name}` has {} CPT rows, expected {rows}",
                    cpt.table.len()
                ));
            }
            for (r, row) in cpt.table.iter().enumerate() {
                if row.len() != arities[i] {
                    return bad(format!(
                        "`{name}` row {r} has {} entries, expected {}",
                        row.len(),
                        arities[i]
                    ));
                }
                if row.iter().any(|&p| !p.is_finite() || p < 0.0) {
                    return bad(format!(
                        "`{name}` row {r} has a negative or non-finite entry"
                    ));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > NORMALIZATION_TOL {
                    return bad(format!("`{name}` row {r} sums to {sum}"));
                }
            }
        }
        Ok(Self {
            variables,
            dag,
            cpts,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn cpt(&self, node: usize) -> &Cpt {
        &self.cpts[node]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name() == name)
    }

    fn arities(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::arity).collect()
    }

    /// Probability of a full joint assignment.
    pub fn joint_probability(&self, assignment: &[Level]) -> f64 {
        let arities = self.arities();
        self.cpts
            .iter()
            .map(|cpt| {
                let levels: Vec<Level> = cpt.parents.iter().map(|&p| assignment[p]).collect();
                cpt.table[cpt.config_index(&levels, &arities)][assignment[cpt.node] as usize]
            })
            .product()
    }
}

/// Maximum-likelihood CPTs with `laplace` pseudo-counts per cell.
///
/// With `laplace = 0`, parent configurations that never occur get the
/// uniform distribution. Parents are listed in ascending node order of `g`.
pub fn fit_cpts(d: &Dataset, g: &Dag, laplace: f64) -> Result<BayesianNetwork> {
    if !laplace.is_finite() || laplace < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "laplace must be finite and non-negative, got {laplace}"
        )));
    }
    let cols: Vec<usize> = g
        .nodes()
        .iter()
        .map(|name| d.require(name))
        .collect::<Result<_>>()?;
    let variables: Vec<Variable> = cols.iter().map(|&c| d.variable(c).clone()).collect();
    let arities: Vec<usize> = variables.iter().map(Variable::arity).collect();
    let mut cpts = Vec::with_capacity(g.n());
    for node in 0..g.n() {
        let parents = g.parents(node);
        let rows: usize = parents.iter().map(|&p| arities[p]).product();
        let k = arities[node];
        let mut counts = vec![vec![0.0f64; k]; rows];
        for r in 0..d.n_rows() {
            let cfg = parents
                .iter()
                .fold(0, |acc, &p| acc * arities[p] + d.value(r, cols[p]) as usize);
            counts[cfg][d.value(r, cols[node]) as usize] += 1.0;
        }
        let table = counts
            .into_iter()
            .map(|row| {
                let total: f64 = row.iter().sum::<f64>() + laplace * k as f64;
                if total == 0.0 {
                    vec![1.0 / k as f64; k]
                } else {
                    row.iter().map(|&c| (c + laplace) / total).collect()
                }
            })
            .collect();
        cpts.push(Cpt {
            node,
            parents,
            table,
        });
    }
    BayesianNetwork::new(variables, g.clone(), cpts)
}

fn draw(rng: &mut ChaCha8Rng, probs: &[f64]) -> Level {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i as Level;
        }
    }
    // rounding left u above the cumulative total; take the last positive level
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0) as Level
}

/// `n` joint samples drawn in topological order; deterministic per seed.
pub fn ancestral_sample(bn: &BayesianNetwork, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "sample size must be at least 1".into(),
        ));
    }
    let arities = bn.arities();
    let order = bn.dag.topological_order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns = vec![Vec::with_capacity(n); arities.len()];
    let mut row = vec![0 as Level; arities.len()];
    for _ in 0..n {
        for &v in &order {
            let cpt = &bn.cpts[v];
            let levels: Vec<Level> = cpt.parents.iter().map(|&p| row[p]).collect();
            row[v] = draw(&mut rng, &cpt.table[cpt.config_index(&levels, &arities)]);
        }
        for (col, &l) in columns.iter_mut().zip(&row) {
            col.push(l);
        }
    }
    Dataset::new(bn.variables.clone(), columns, 0)
}

/// Largest joint state space [`exact_marginal`] will enumerate.
pub const MAX_JOINT_STATES: u128 = 1 << 20;

/// Marginal distribution of node `x` by summing the full joint.
pub fn exact_marginal(bn: &BayesianNetwork, x: usize) -> Result<Vec<f64>> {
    let arities = bn.arities();
    let states: u128 = arities.iter().map(|&a| a as u128).product();
    if states > MAX_JOINT_STATES {
        return Err(Error::StateSpaceTooLarge(states));
    }
    let mut marginal = vec![0.0; arities[x]];
    let mut assignment = vec![0 as Level; arities.len()];
    for _ in 0..states {
        marginal[assignment[x] as usize] += bn.joint_probability(&assignment);
        // odometer increment, last variable fastest
        for v in (0..assignment.len()).rev() {
            assignment[v] += 1;
            if (assignment[v] as usize) < arities[v] {
                break;
            }
            assignment[v] = 0;
        }
    }
    Ok(marginal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks;

    fn binary(name: &str) -> Variable {
        Variable::with_levels(name, &["0", "1"]).unwrap()
    }

    #[test]
    fn deterministic_copy_fits_identity() {
        let rows: Vec<Vec<Level>> = (0..20).map(|i| vec![i % 2, i % 2]).collect();
        let d = Dataset::from_rows(vec![binary("P"), binary("C")], &rows).unwrap();
        let g = Dag::from_names(&["P", "C"], &[("P", "C")]).unwrap();
        let bn = fit_cpts(&d, &g, 0.0).unwrap();
        assert_eq!(bn.cpt(1).table, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(bn.cpt(0).table, vec![vec![0.5, 0.5]]);
    }

    #[test]
    fn unseen_parent_config_is_uniform_without_smoothing() {
        let rows: Vec<Vec<Level>> = vec![vec![0, 1], vec![0, 0], vec![0, 1]];
        let d = Dataset::from_rows(vec![binary("P"), binary("C")], &rows).unwrap();
        let g = Dag::from_names(&["P", "C"], &[("P", "C")]).unwrap();
        let bn = fit_cpts(&d, &g, 0.0).unwrap();
        assert_eq!(bn.cpt(1).table[1], vec![0.5, 0.5]);
        let smoothed = fit_cpts(&d, &g, 1.0).unwrap();
        assert_eq!(smoothed.cpt(1).table[0], vec![2.0 / 5.0, 3.0 / 5.0]);
        assert!(fit_cpts(&d, &g, -1.0).is_err());
    }

    #[test]
    fn degenerate_root_always_samples_first_level() {
        let dag = Dag::from_names(&["A"], &[]).unwrap();
        let cpt = Cpt {
            node: 0,
            parents: vec![],
            table: vec![vec![1.0, 0.0]],
        };
        let bn = BayesianNetwork::new(vec![binary("A")], dag, vec![cpt]).unwrap();
        let d = ancestral_sample(&bn, 500, 3).unwrap();
        assert!(d.column(0).iter().all(|&v| v == 0));
    }

    #[test]
    fn network_validation() {
        let dag = Dag::from_names(&["A", "B"], &[("A", "B")]).unwrap();
        let root = Cpt {
            node: 0,
            parents: vec![],
            table: vec![vec![0.5, 0.5]],
        };
        let wrong_parents = Cpt {
            node: 1,
            parents: vec![],
            table: vec![vec![0.5, 0.5]],
        };
        let err = BayesianNetwork::new(
            vec![binary("A"), binary("B")],
            dag.clone(),
            vec![root.clone(), wrong_parents],
        );
        assert!(matches!(err, Err(Error::InvalidNetwork(_))));
        let unnormalized = Cpt {
            node: 1,
            parents: vec![0],
            table: vec![vec![0.5, 0.6], vec![0.5, 0.5]],
        };
        let err = BayesianNetwork::new(
            vec![binary("A"), binary("B")],
            dag,
            vec![root, unnormalized],
        );
        assert!(matches!(err, Err(Error::InvalidNetwork(_))));
    }

    #[test]
    fn root_marginal_is_its_cpt() {
        let bn = benchmarks::chain();
        let m = exact_marginal(&bn, 0).unwrap();
        assert_eq!(m, bn.cpt(0).table[0]);
    }

    #[test]
    fn chain_marginal_by_matrix_product() {
        let bn = benchmarks::chain();
        let pa = &bn.cpt(0).table[0];
        let step = |prior: &[f64], t: &[Vec<f64>]| -> Vec<f64> {
            (0..2)
                .map(|j| (0..2).map(|i| prior[i] * t[i][j]).sum())
                .collect()
        };
        let pb = step(pa, &bn.cpt(1).table);
        let pc = step(&pb, &bn.cpt(2).table);
        let m = exact_marginal(&bn, 2).unwrap();
        for j in 0..2 {
            assert!((m[j] - pc[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn marginals_normalize() {
        let bn = benchmarks::tiered();
        for v in 0..bn.variables().len() {
            let s: f64 = exact_marginal(&bn, v).unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn oversized_state_space_rejected() {
        let names: Vec<alloc::string::String> = (0..21).map(|i| format!("v{i}")).collect();
        let dag = Dag::new(names.clone(), &[]).unwrap();
        let vars = names.iter().map(|n| binary(n)).collect();
        let cpts = (0..21)
            .map(|i| Cpt {
                node: i,
                parents: vec![],
                table: vec![vec![0.5, 0.5]],
            })
            .collect();
        let bn = BayesianNetwork::new(vars, dag, cpts).unwrap();
        assert_eq!(
            exact_marginal(&bn, 0),
            Err(Error::StateSpaceTooLarge(1 << 21))
        );
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let bn = benchmarks::collider();
        assert_eq!(
            ancestral_sample(&bn, 200, 9).unwrap(),
            ancestral_sample(&bn, 200, 9).unwrap()
        );
        assert_ne!(
            ancestral_sample(&bn, 200, 9).unwrap(),
            ancestral_sample(&bn, 200, 10).unwrap()
        );
    }
}
