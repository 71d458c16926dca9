//! Categorical datasets: construction, level recoding, bootstrap resampling and
//! stratified contingency counts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Index of a level within its variable's level list.
pub type Level = u32;

/// A categorical variable with an ordered level vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    name: String,
    levels: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, levels: Vec<String>) -> Result<Self> {
        let name = name.into();
        if levels.len() < 2 {
            return Err(Error::DegenerateVariable(name));
        }
        let unique: BTreeSet<&str> = levels.iter().map(String::as_str).collect();
        if unique.len() != levels.len() {
            return Err(Error::InvalidDataset(format!(
                "variable `{name}` has duplicate level labels"
            )));
        }
        Ok(Self { name, levels })
    }

    /// Convenience constructor from string literals.
    pub fn with_levels(name: &str, levels: &[&str]) -> Result<Self> {
        Self::new(name, levels.iter().map(|s| s.to_string()).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn arity(&self) -> usize {
        self.levels.len()
    }

    pub fn level_index(&self, label: &str) -> Option<Level> {
        self.levels
            .iter()
            .position(|l| l == label)
            .map(|i| i as Level)
    }
}

/// N rows of level indices over V variables, stored column-major.
///
/// Column order is part of the dataset's identity. A dataset is immutable once
/// built; every transformation returns a new value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    variables: Vec<Variable>,
    columns: Vec<Vec<Level>>,
    dropped_row_count: usize,
}

impl Dataset {
    /// Builds a dataset from column vectors, validating every cell.
    pub fn new(
        variables: Vec<Variable>,
        columns: Vec<Vec<Level>>,
        dropped_row_count: usize,
    ) -> Result<Self> {
        if variables.len() != columns.len() {
            return Err(Error::InvalidDataset(format!(
                "{} variables but {} columns",
                variables.len(),
                columns.len()
            )));
        }
        let names: BTreeSet<&str> = variables.iter().map(Variable::name).collect();
        if names.len() != variables.len() {
            return Err(Error::InvalidDataset("duplicate variable names".into()));
        }
        let n = columns.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        for (var, col) in variables.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` has {} rows, expected {n}",
                    var.name,
                    col.len()
                )));
            }
            if let Some(bad) = col.iter().find(|&&v| v as usize >= var.arity()) {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` holds level index {bad} but arity is {}",
                    var.name,
                    var.arity()
                )));
            }
        }
        Ok(Self {
            variables,
            columns,
            dropped_row_count,
        })
    }

    /// Builds a dataset from row vectors.
    pub fn from_rows(variables: Vec<Variable>, rows: &[Vec<Level>]) -> Result<Self> {
        let mut columns = vec![Vec::with_capacity(rows.len()); variables.len()];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != variables.len() {
                return Err(Error::InvalidDataset(format!(
                    "row {r} has {} cells, expected {}",
                    row.len(),
                    variables.len()
                )));
            }
            for (col, &v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::new(variables, columns, 0)
    }

    /// Builds a dataset from textual records.
    ///
    /// Levels are numbered in order of first appearance among the complete
    /// rows. Rows with an empty cell are dropped and counted. Every column must
    /// show at least two distinct levels.
    pub fn from_records<H, I, R, S>(header: &[H], records: I) -> Result<Self>
    where
        H: AsRef<str>,
        I: IntoIterator<Item = R>,
        R: AsRef<[S]>,
        S: AsRef<str>,
    {
        let width = header.len();
        let names: BTreeSet<&str> = header.iter().map(AsRef::as_ref).collect();
        if names.len() != width {
            return Err(Error::InvalidDataset(
                "duplicate column names in header".into(),
            ));
        }
        let mut vocab: Vec<Vec<String>> = vec![Vec::new(); width];
        let mut lookup: Vec<BTreeMap<String, Level>> = vec![BTreeMap::new(); width];
        let mut columns: Vec<Vec<Level>> = vec![Vec::new(); width];
        let mut dropped = 0;
        for (r, record) in records.into_iter().enumerate() {
            let record = record.as_ref();
            if record.len() != width {
                return Err(Error::InvalidDataset(format!(
                    "record {} has {} fields, expected {width}",
                    r + 1,
                    record.len()
                )));
            }
            if record.iter().any(|c| c.as_ref().is_empty()) {
                dropped += 1;
                continue;
            }
            for (c, cell) in record.iter().enumerate() {
                let cell = cell.as_ref();
                let level = match lookup[c].get(cell) {
                    Some(&l) => l,
                    None => {
                        let l = vocab[c].len() as Level;
                        vocab[c].push(cell.to_string());
                        lookup[c].insert(cell.to_string(), l);
                        l
                    }
                };
                columns[c].push(level);
            }
        }
        if columns.first().is_none_or(Vec::is_empty) {
            return Err(Error::EmptyDataset);
        }
        let variables = header
            .iter()
            .zip(vocab)
            .map(|(name, levels)| Variable::new(name.as_ref(), levels))
            .collect::<Result<Vec<_>>>()?;
        Self::new(variables, columns, dropped)
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, var: usize) -> &Variable {
        &self.variables[var]
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn arity(&self, var: usize) -> usize {
        self.variables[var].arity()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Like [`Dataset::index_of`] but fails with [`Error::UnknownVariable`].
    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn column(&self, var: usize) -> &[Level] {
        &self.columns[var]
    }

    pub fn value(&self, row: usize, var: usize) -> Level {
        self.columns[var][row]
    }

    pub fn row(&self, row: usize) -> Vec<Level> {
        self.columns.iter().map(|c| c[row]).collect()
    }

    pub fn dropped_row_count(&self) -> usize {
        self.dropped_row_count
    }

    /// A dataset restricted to (and reordered by) the given columns.
    pub fn select_columns(&self, vars: &[usize]) -> Dataset {
        Dataset {
            variables: vars.iter().map(|&v| self.variables[v].clone()).collect(),
            columns: vars.iter().map(|&v| self.columns[v].clone()).collect(),
            dropped_row_count: self.dropped_row_count,
        }
    }

    /// A dataset made of the given rows (with repetition).
    pub fn take_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            variables: self.variables.clone(),
            columns: self
                .columns
                .iter()
                .map(|col| rows.iter().map(|&r| col[r]).collect())
                .collect(),
            dropped_row_count: 0,
        }
    }

    /// Applies level groupings and variable drops.
    pub fn apply_recode(&self, spec: &RecodeSpec) -> Result<Dataset> {
        for name in spec.levels.keys().chain(&spec.drop) {
            self.require(name)?;
        }
        let mut variables = Vec::new();
        let mut columns = Vec::new();
        for (var, col) in self.variables.iter().zip(&self.columns) {
            if spec.drop.contains(&var.name) {
                continue;
            }
            let Some(map) = spec.levels.get(&var.name) else {
                variables.push(var.clone());
                columns.push(col.clone());
                continue;
            };
            let recode_err = |reason: String| Error::Recode {
                variable: var.name.clone(),
                reason,
            };
            if let Some(extra) = map.keys().find(|k| var.level_index(k).is_none()) {
                return Err(recode_err(format!("unknown original level `{extra}`")));
            }
            let mut grouped: Vec<String> = Vec::new();
            let mut table: Vec<Level> = Vec::with_capacity(var.arity());
            for level in &var.levels {
                let target = map
                    .get(level)
                    .ok_or_else(|| recode_err(format!("level `{level}` is not mapped")))?;
                let idx = match grouped.iter().position(|g| g == target) {
                    Some(i) => i,
                    None => {
                        grouped.push(target.clone());
                        grouped.len() - 1
                    }
                };
                table.push(idx as Level);
            }
            if grouped.len() < 2 {
                return Err(recode_err("grouping leaves fewer than 2 levels".into()));
            }
            variables.push(Variable::new(var.name.clone(), grouped)?);
            columns.push(col.iter().map(|&v| table[v as usize]).collect());
        }
        if variables.is_empty() {
            return Err(Error::InvalidDataset("recode drops every variable".into()));
        }
        Dataset::new(variables, columns, self.dropped_row_count)
    }

    /// A nonparametric bootstrap resample of N rows.
    ///
    /// The drawn row sequence depends only on `(master_seed, replicate_index)`.
    pub fn bootstrap_resample(&self, replicate_index: u64, master_seed: u64) -> Dataset {
        self.take_rows(&bootstrap_indices(
            self.n_rows(),
            replicate_index,
            master_seed,
        ))
    }

    /// Joint counts of `(x, y)` within every configuration of `z`.
    ///
    /// # Panics
    ///
    /// If `x == y`, if `z` contains `x` or `y`, or if the number of `z`
    /// configurations overflows `u64`.
    pub fn counts(&self, x: usize, y: usize, z: &[usize]) -> ContingencyTable {
        assert!(x != y, "counts: x and y must differ");
        assert!(
            !z.contains(&x) && !z.contains(&y),
            "counts: conditioning set contains x or y"
        );
        let xa = self.arity(x) as u64;
        let ya = self.arity(y) as u64;
        let z_arities: Vec<usize> = z.iter().map(|&v| self.arity(v)).collect();
        let n_strata = z_arities
            .iter()
            .try_fold(1u64, |acc, &a| acc.checked_mul(a as u64))
            .expect("conditioning set has too many configurations");
        let cell_space = n_strata.checked_mul(xa * ya);

        let n = self.n_rows();
        let xs = &self.columns[x];
        let ys = &self.columns[y];
        let mut keys: Vec<u64> = Vec::with_capacity(n);
        for r in 0..n {
            let mut s = 0u64;
            for (&v, &a) in z.iter().zip(&z_arities) {
                s = s * a as u64 + self.columns[v][r] as u64;
            }
            keys.push(s);
        }
        let cells = (xa * ya) as usize;
        let mut strata: Vec<Stratum> = Vec::new();
        match cell_space {
            Some(space) if space <= DENSE_LIMIT => {
                let mut dense = vec![0u64; space as usize];
                for r in 0..n {
                    let at = keys[r] * xa * ya + xs[r] as u64 * ya + ys[r] as u64;
                    dense[at as usize] += 1;
                }
                for (s, chunk) in dense.chunks(cells).enumerate() {
                    if chunk.iter().any(|&c| c > 0) {
                        strata.push(Stratum {
                            index: s as u64,
                            counts: chunk.to_vec(),
                        });
                    }
                }
            }
            _ => {
                let mut tagged: Vec<(u64, usize)> = (0..n)
                    .map(|r| (keys[r], (xs[r] as u64 * ya + ys[r] as u64) as usize))
                    .collect();
                tagged.sort_unstable();
                for (key, cell) in tagged {
                    if strata.last().is_none_or(|s| s.index != key) {
                        strata.push(Stratum {
                            index: key,
                            counts: vec![0; cells],
                        });
                    }
                    strata.last_mut().unwrap().counts[cell] += 1;
                }
            }
        }
        ContingencyTable {
            x_arity: xa as usize,
            y_arity: ya as usize,
            z_arities,
            strata,
            total_count: n as u64,
        }
    }
}

const DENSE_LIMIT: u64 = 1 << 20;

/// Row indices of a bootstrap replicate: `n` draws with replacement from
/// `0..n`, seeded by `(master_seed, replicate_index)`.
pub fn bootstrap_indices(n: usize, replicate_index: u64, master_seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate_index);
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

/// Level groupings and variable drops applied before analysis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecodeSpec {
    /// variable → (original level → grouped level)
    pub levels: BTreeMap<String, BTreeMap<String, String>>,
    pub drop: Vec<String>,
}

impl RecodeSpec {
    pub fn is_identity(&self) -> bool {
        self.drop.is_empty() && self.levels.values().all(|m| m.iter().all(|(a, b)| a == b))
    }
}

/// One observed configuration of the conditioning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    /// Mixed-radix index of the configuration, first conditioning variable
    /// most significant.
    pub index: u64,
    /// `x_arity × y_arity` counts, row-major in x.
    pub counts: Vec<u64>,
}

/// Stratified `x × y` counts over the configurations of a conditioning set.
///
/// Only observed strata are stored; unobserved ones read back as all-zero
/// matrices through [`ContingencyTable::stratum`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    x_arity: usize,
    y_arity: usize,
    z_arities: Vec<usize>,
    strata: Vec<Stratum>,
    total_count: u64,
}

impl ContingencyTable {
    pub fn x_arity(&self) -> usize {
        self.x_arity
    }

    pub fn y_arity(&self) -> usize {
        self.y_arity
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    /// Number of conditioning configurations, observed or not.
    pub fn strata_count(&self) -> u64 {
        self.z_arities.iter().map(|&a| a as u64).product()
    }

    pub fn observed_strata(&self) -> &[Stratum] {
        &self.strata
    }

    /// Counts of a conditioning configuration; zeros when it was never seen.
    pub fn stratum(&self, index: u64) -> Vec<u64> {
        match self.strata.binary_search_by_key(&index, |s| s.index) {
            Ok(i) => self.strata[i].counts.clone(),
            Err(_) => vec![0; self.x_arity * self.y_arity],
        }
    }

    pub fn count(&self, stratum: u64, x: usize, y: usize) -> u64 {
        match self.strata.binary_search_by_key(&stratum, |s| s.index) {
            Ok(i) => self.strata[i].counts[x * self.y_arity + y],
            Err(_) => 0,
        }
    }

    /// The same table with the roles of x and y swapped.
    pub fn transposed(&self) -> ContingencyTable {
        let (xa, ya) = (self.x_arity, self.y_arity);
        let strata = self
            .strata
            .iter()
            .map(|s| {
                let mut t = vec![0; xa * ya];
                for i in 0..xa {
                    for j in 0..ya {
                        t[j * xa + i] = s.counts[i * ya + j];
                    }
                }
                Stratum {
                    index: s.index,
                    counts: t,
                }
            })
            .collect();
        ContingencyTable {
            x_arity: ya,
            y_arity: xa,
            z_arities: self.z_arities.clone(),
            strata,
            total_count: self.total_count,
        }
    }
}
