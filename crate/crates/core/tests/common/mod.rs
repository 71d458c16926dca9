#![allow(dead_code)]

use std::collections::BTreeMap;

use bnstruct_core::graph::{Dag, EdgeMark, Pdag};

/// Node names deliberately out of alphabetical order so index order and name
/// order disagree.
pub const SCRAMBLED: [&str; 5] = ["D", "B", "E", "A", "C"];

pub fn names(n: usize, scrambled: bool) -> Vec<String> {
    if scrambled {
        SCRAMBLED[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n)
            .map(|i| ((b'A' + i as u8) as char).to_string())
            .collect()
    }
}

/// Every labelled DAG on `n` nodes.
pub fn all_dags(n: usize, scrambled: bool) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for &(i, j) in &pairs {
            match c % 3 {
                1 => edges.push((i, j)),
                2 => edges.push((j, i)),
                _ => {}
            }
            c /= 3;
        }
        if let Ok(d) = Dag::new(names(n, scrambled), &edges) {
            out.push(d);
        }
    }
    out
}

fn descendants(dag: &Dag, v: usize) -> Vec<bool> {
    let mut seen = vec![false; dag.n()];
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if seen[u] {
            continue;
        }
        seen[u] = true;
        stack.extend(dag.children(u));
    }
    seen
}

/// d-separation by enumerating every simple path between `x` and `y`.
pub fn naive_d_separated(dag: &Dag, x: usize, y: usize, z: &[usize]) -> bool {
    let n = dag.n();
    let g = dag.as_pdag();
    let desc: Vec<Vec<bool>> = (0..n).map(|v| descendants(dag, v)).collect();
    let opens_collider = |v: usize| z.iter().any(|&w| desc[v][w]);

    fn walk(g: &Pdag, path: &mut Vec<usize>, y: usize, active: &dyn Fn(&[usize]) -> bool) -> bool {
        let last = *path.last().unwrap();
        if last == y {
            return active(path);
        }
        for next in g.adjacent(last) {
            if path.contains(&next) {
                continue;
            }
            path.push(next);
            let found = walk(g, path, y, active);
            path.pop();
            if found {
                return true;
            }
        }
        false
    }

    let active = |path: &[usize]| {
        path.windows(3).all(|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            let collider = g.has_directed(a, b) && g.has_directed(c, b);
            if collider {
                opens_collider(b)
            } else {
                !z.contains(&b)
            }
        })
    };
    !walk(g, &mut vec![x], y, &active)
}

/// All conditional-independence statements of a DAG, as a bit vector over
/// (pair, conditioning subset).
pub fn independence_signature(dag: &Dag) -> Vec<bool> {
    let n = dag.n();
    let mut sig = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
            for mask in 0..(1usize << rest.len()) {
                let z: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                sig.push(naive_d_separated(dag, x, y, &z));
            }
        }
    }
    sig
}

/// Essential graph of every DAG, computed by grouping DAGs with identical
/// independence statements and directing exactly the edges that every
/// member of the class agrees on.
pub fn essential_graphs(dags: &[Dag]) -> Vec<Pdag> {
    let sigs: Vec<Vec<bool>> = dags.iter().map(independence_signature).collect();
    let mut classes: BTreeMap<&[bool], Vec<usize>> = BTreeMap::new();
    for (i, s) in sigs.iter().enumerate() {
        classes.entry(s.as_slice()).or_default().push(i);
    }
    let mut out: Vec<Option<Pdag>> = vec![None; dags.len()];
    for members in classes.values() {
        let first = dags[members[0]].as_pdag();
        let n = first.n();
        let mut g = Pdag::new(first.nodes().to_vec()).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                if !first.is_adjacent(i, j) {
                    continue;
                }
                let fwd = members
                    .iter()
                    .all(|&m| dags[m].as_pdag().has_directed(i, j));
                let bwd = members
                    .iter()
                    .all(|&m| dags[m].as_pdag().has_directed(j, i));
                if fwd {
                    g.add_directed(i, j).unwrap();
                } else if bwd {
                    g.add_directed(j, i).unwrap();
                } else {
                    g.add_undirected(i, j).unwrap();
                }
            }
        }
        for &m in members {
            out[m] = Some(g.clone());
        }
    }
    out.into_iter().map(Option::unwrap).collect()
}

pub fn describe(g: &Pdag) -> String {
    let mut parts = Vec::new();
    for i in 0..g.n() {
        for j in 0..g.n() {
            match g.mark(i, j) {
                EdgeMark::Out => parts.push(format!("{}->{}", g.name(i), g.name(j))),
                EdgeMark::Undirected if i < j => {
                    parts.push(format!("{}--{}", g.name(i), g.name(j)))
                }
                _ => {}
            }
        }
    }
    parts.join(" ")
}
