//! The conditional-independence seam shared by both learners.
//!
//! Learners only see [`CiTest`]; the data-driven [`G2Test`] and the
//! graph-driven [`DSeparationOracle`] are interchangeable behind it.

use crate::dataset::Dataset;
use crate::graph::{d_separated, Dag};
use crate::infotheory::{check_alpha, g2_from_table};
use crate::Result;

/// Decision returned by a CI test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiDecision {
    pub independent: bool,
    /// Strength of association, used to rank candidates. Larger is stronger.
    pub association: f64,
}

/// A conditional-independence test over variable indices.
pub trait CiTest {
    fn test(&self, x: usize, y: usize, z: &[usize]) -> CiDecision;
}

impl<T: CiTest + ?Sized> CiTest for &T {
    fn test(&self, x: usize, y: usize, z: &[usize]) -> CiDecision {
        (**self).test(x, y, z)
    }
}

/// G² test on a dataset; association is the conditional mutual information.
#[derive(Debug, Clone, Copy)]
pub struct G2Test<'a> {
    data: &'a Dataset,
    alpha: f64,
}

impl<'a> G2Test<'a> {
    pub fn new(data: &'a Dataset, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { data, alpha })
    }
}

impl CiTest for G2Test<'_> {
    fn test(&self, x: usize, y: usize, z: &[usize]) -> CiDecision {
        let table = self.data.counts(x, y, z);
        let r = g2_from_table(&table, self.alpha);
        CiDecision {
            independent: r.independent,
            association: r.statistic / (2.0 * table.total_count() as f64),
        }
    }
}

/// Exact answers from d-separation in a known DAG. Association is 1 for
/// dependent pairs and 0 otherwise.
#[derive(Debug, Clone, Copy)]
pub struct DSeparationOracle<'a> {
    dag: &'a Dag,
}

impl<'a> DSeparationOracle<'a> {
    pub fn new(dag: &'a Dag) -> Self {
        Self { dag }
    }
}

impl CiTest for DSeparationOracle<'_> {
    fn test(&self, x: usize, y: usize, z: &[usize]) -> CiDecision {
        let independent = d_separated(self.dag, x, y, z);
        CiDecision {
            independent,
            association: if independent { 0.0 } else { 1.0 },
        }
    }
}
