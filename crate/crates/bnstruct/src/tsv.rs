//! Tab-separated tables.
//!
//! Averaged network (`average`):
//!
//! ```text
//! # algorithm=pc-stable replicates=1000 master_seed=7
//! from  to  strength  direction  band  direction_reliable
//! ```
//!
//! `direction` is the probability of `from → to` given presence; `band` is
//! one of `high`, `medium`, `low`, `excluded`; `direction_reliable` is `0`
//! or `1`. When reading, the comment line and the last two columns are
//! optional; if the columns are present they must agree with the first four.
//!
//! Feature ranking (`select`): `variable  mi_nats  fraction  selected`.
//!
//! Learned graph (`learn`): a `# nodes` comment listing every node, then
//! `from  to  kind` with kind `directed` or `undirected`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use bnstruct_core::averaging::{
    direction_reliable, Algorithm, AveragedNetwork, ConfidenceBand, EdgeStrength,
};
use bnstruct_core::graph::Pdag;
use bnstruct_core::select::RankedFeature;

use crate::error::{Error, Result};

pub const AVERAGED_HEADER: [&str; 6] = [
    "from",
    "to",
    "strength",
    "direction",
    "band",
    "direction_reliable",
];
pub const SELECTION_HEADER: [&str; 4] = ["variable", "mi_nats", "fraction", "selected"];
pub const EDGES_HEADER: [&str; 3] = ["from", "to", "kind"];

/// Non-comment, non-blank lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (u64, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn comments(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter_map(|l| l.strip_prefix('#'))
        .map(str::trim)
}

fn check_header(
    found: Option<(u64, &str)>,
    want: &[&str],
    required: usize,
    source: &str,
) -> Result<usize> {
    let (line, header) = found.ok_or_else(|| Error::parse(source, None, "missing header row"))?;
    let cols: Vec<&str> = header.split('\t').collect();
    if cols.len() < required || cols.len() > want.len() || cols[..] != want[..cols.len()] {
        return Err(Error::parse(
            source,
            Some(line),
            format!("expected header `{}`", want.join("\t")),
        ));
    }
    Ok(cols.len())
}

fn fields<'a>(line: u64, text: &'a str, width: usize, source: &str) -> Result<Vec<&'a str>> {
    let f: Vec<&str> = text.split('\t').collect();
    if f.len() != width {
        return Err(Error::parse(
            source,
            Some(line),
            format!("row has {} fields, expected {width}", f.len()),
        ));
    }
    Ok(f)
}

fn unit_interval(s: &str, what: &str, line: u64, source: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
        _ => Err(Error::parse(
            source,
            Some(line),
            format!("{what} `{s}` is not a number in [0, 1]"),
        )),
    }
}

fn flag(s: &str, what: &str, line: u64, source: &str) -> Result<bool> {
    match s.trim() {
        "1" => Ok(true),
        "0" => Ok(false),
        _ => Err(Error::parse(
            source,
            Some(line),
            format!("{what} `{s}` must be 0 or 1"),
        )),
    }
}

pub fn write_averaged(n: &AveragedNetwork) -> String {
    let mut out = format!(
        "# algorithm={} replicates={} master_seed={}\n{}\n",
        n.algorithm,
        n.replicate_count,
        n.master_seed,
        AVERAGED_HEADER.join("\t")
    );
    for e in &n.edges {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            e.from,
            e.to,
            e.strength,
            e.direction,
            e.band(),
            u8::from(direction_reliable(e))
        )
        .unwrap();
    }
    out
}

pub fn read_averaged(text: &str, source: &str) -> Result<AveragedNetwork> {
    let (mut algorithm, mut replicates, mut seed) = (Algorithm::PcStable, 1u64, 0u64);
    for c in comments(text) {
        for kv in c.split_whitespace() {
            let Some((k, v)) = kv.split_once('=') else {
                continue;
            };
            let bad = || Error::parse(source, None, format!("bad metadata `{kv}`"));
            match k {
                "algorithm" => algorithm = v.parse().map_err(|_| bad())?,
                "replicates" => replicates = v.parse().ok().filter(|&r| r > 0).ok_or_else(bad)?,
                "master_seed" => seed = v.parse().map_err(|_| bad())?,
                _ => {}
            }
        }
    }
    let mut lines = data_lines(text);
    let width = check_header(lines.next(), &AVERAGED_HEADER, 4, source)?;
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (line, row) in lines {
        let f = fields(line, row, width, source)?;
        let (from, to) = (f[0].trim(), f[1].trim());
        if from.is_empty() || to.is_empty() || from == to {
            return Err(Error::parse(
                source,
                Some(line),
                "edge needs two distinct endpoints",
            ));
        }
        let key = if from < to { (from, to) } else { (to, from) };
        if !seen.insert(key) {
            return Err(Error::parse(
                source,
                Some(line),
                format!("duplicate pair {from}-{to}"),
            ));
        }
        let strength = unit_interval(f[2], "strength", line, source)?;
        let direction = unit_interval(f[3], "direction", line, source)?;
        let e = EdgeStrength::new(from, to, strength, direction);
        if width >= 5 {
            let band: ConfidenceBand = f[4].trim().parse().map_err(|_| {
                Error::parse(source, Some(line), format!("unknown band `{}`", f[4]))
            })?;
            if band != e.band() {
                return Err(Error::parse(
                    source,
                    Some(line),
                    format!("band `{band}` disagrees with strength {strength}"),
                ));
            }
        }
        if width == 6 && flag(f[5], "direction_reliable", line, source)? != direction_reliable(&e) {
            return Err(Error::parse(
                source,
                Some(line),
                format!("direction_reliable disagrees with direction {direction}"),
            ));
        }
        edges.push(e);
    }
    Ok(AveragedNetwork::from_edges(
        edges, replicates, algorithm, seed,
    ))
}

/// One selection row as read back from TSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRow {
    pub variable: String,
    pub mi: f64,
    pub fraction: f64,
    pub selected: bool,
}

pub fn write_selection(ranked: &[RankedFeature], selected: &[usize]) -> String {
    let mut out = SELECTION_HEADER.join("\t");
    out.push('\n');
    for f in ranked {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            f.name,
            f.mi,
            f.fraction_of_target_entropy,
            u8::from(selected.contains(&f.variable))
        )
        .unwrap();
    }
    out
}

pub fn read_selection(text: &str, source: &str) -> Result<Vec<SelectionRow>> {
    let mut lines = data_lines(text);
    check_header(lines.next(), &SELECTION_HEADER, 4, source)?;
    lines
        .map(|(line, row)| {
            let f = fields(line, row, 4, source)?;
            let num = |s: &str, what: &str| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| *v >= 0.0)
                    .ok_or_else(|| {
                        Error::parse(
                            source,
                            Some(line),
                            format!("{what} `{s}` is not a non-negative number"),
                        )
                    })
            };
            Ok(SelectionRow {
                variable: f[0].trim().to_string(),
                mi: num(f[1], "mi_nats")?,
                fraction: num(f[2], "fraction")?,
                selected: flag(f[3], "selected", line, source)?,
            })
        })
        .collect()
}

pub fn write_edges(g: &Pdag) -> String {
    let mut out = format!(
        "# nodes\t{}\n{}\n",
        g.nodes().join("\t"),
        EDGES_HEADER.join("\t")
    );
    let mut rows: Vec<(String, String, &str)> = g
        .directed_edges()
        .into_iter()
        .map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string(), "directed"))
        .chain(g.undirected_edges().into_iter().map(|(a, b)| {
            let (x, y) = (g.name(a), g.name(b));
            let (x, y) = if x < y { (x, y) } else { (y, x) };
            (x.to_string(), y.to_string(), "undirected")
        }))
        .collect();
    rows.sort();
    for (a, b, k) in rows {
        writeln!(out, "{a}\t{b}\t{k}").unwrap();
    }
    out
}

pub fn read_edges(text: &str, source: &str) -> Result<Pdag> {
    let nodes: Vec<String> = comments(text)
        .find_map(|c| c.strip_prefix("nodes"))
        .ok_or_else(|| Error::parse(source, None, "missing `# nodes` line"))?
        .split('\t')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    let mut g = Pdag::new(nodes).map_err(|e| Error::parse(source, None, e.to_string()))?;
    let mut lines = data_lines(text);
    check_header(lines.next(), &EDGES_HEADER, 3, source)?;
    for (line, row) in lines {
        let f = fields(line, row, 3, source)?;
        let idx = |name: &str| {
            g.index_of(name.trim())
                .ok_or_else(|| Error::parse(source, Some(line), format!("unknown node `{name}`")))
        };
        let (a, b) = (idx(f[0])?, idx(f[1])?);
        let added = match f[2].trim() {
            "directed" => g.add_directed(a, b),
            "undirected" => g.add_undirected(a, b),
            k => {
                return Err(Error::parse(
                    source,
                    Some(line),
                    format!("unknown edge kind `{k}`"),
                ))
            }
        };
        added.map_err(|e| Error::parse(source, Some(line), e.to_string()))?;
    }
    Ok(g)
}
