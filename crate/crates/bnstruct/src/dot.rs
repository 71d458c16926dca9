//! Graphviz DOT export and a reader for the subset we emit.
//!
//! Arrows are `a -> b`; undirected edges carry `dir=none`. Every edge has
//! `style=solid|dashed|dotted` by confidence band (learned single graphs are
//! all solid).

use std::fmt::Write as _;

use bnstruct_core::averaging::{ConfidenceBand, DisplayGraph};
use bnstruct_core::graph::Pdag;

use crate::error::{Error, Result};

pub fn style_of(band: ConfidenceBand) -> &'static str {
    match band {
        ConfidenceBand::High => "solid",
        ConfidenceBand::Medium => "dashed",
        ConfidenceBand::Low | ConfidenceBand::Excluded => "dotted",
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render(g: &Pdag, style: impl Fn(usize, usize) -> &'static str) -> String {
    let mut out = String::from("digraph bn {\n");
    for i in g.name_order() {
        writeln!(out, "  {};", quote(g.name(i))).unwrap();
    }
    let mut lines: Vec<(String, String, String)> = Vec::new();
    for (a, b) in g.directed_edges() {
        lines.push((
            g.name(a).into(),
            g.name(b).into(),
            format!("style={}", style(a, b)),
        ));
    }
    for (a, b) in g.undirected_edges() {
        let (a, b) = if g.name(a) < g.name(b) {
            (a, b)
        } else {
            (b, a)
        };
        lines.push((
            g.name(a).into(),
            g.name(b).into(),
            format!("dir=none, style={}", style(a, b)),
        ));
    }
    lines.sort();
    for (a, b, attrs) in lines {
        writeln!(out, "  {} -> {} [{attrs}];", quote(&a), quote(&b)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// A single learned graph; every edge solid.
pub fn learned_dot(g: &Pdag) -> String {
    render(g, |_, _| "solid")
}

/// An averaged network's display graph, styled by band.
pub fn display_dot(d: &DisplayGraph) -> String {
    render(&d.graph, |a, b| {
        style_of(d.band(a, b).expect("every drawn edge has a band"))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotEdge {
    pub from: String,
    pub to: String,
    pub directed: bool,
    pub style: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotGraph {
    pub name: Option<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<DotEdge>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Arrow,
    Line,
    Open,
    Close,
    LBracket,
    RBracket,
    Eq,
    Comma,
    Semi,
}

fn tokenize(text: &str, source: &str) -> Result<Vec<(u64, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1u64;
    while let Some(c) = chars.next() {
        let tok = match c {
            '\n' => {
                line += 1;
                continue;
            }
            c if c.is_whitespace() => continue,
            '{' => Tok::Open,
            '}' => Tok::Close,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                Tok::Arrow
            }
            '-' if chars.peek() == Some(&'-') => {
                chars.next();
                Tok::Line
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some(e) => {
                                s.push('\\');
                                s.push(e);
                            }
                            None => break,
                        },
                        Some('"') => break,
                        Some(ch) => {
                            if ch == '\n' {
                                line += 1;
                            }
                            s.push(ch)
                        }
                        None => {
                            return Err(Error::parse(source, Some(line), "unterminated string"))
                        }
                    }
                }
                Tok::Id(s)
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_alphanumeric() || n == '_' || n == '.' {
                        s.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                Tok::Id(s)
            }
            c => {
                return Err(Error::parse(
                    source,
                    Some(line),
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        out.push((line, tok));
    }
    Ok(out)
}

/// Parses a `digraph` made of node and single-edge statements with optional
/// attribute lists.
pub fn parse_dot(text: &str, source: &str) -> Result<DotGraph> {
    let toks = tokenize(text, source)?;
    let mut pos = 0;
    let last_line = toks.last().map(|t| t.0);
    let err = |pos: usize, msg: &str| {
        let line = toks.get(pos).map(|t| t.0).or(last_line);
        Error::parse(source, line, msg.to_string())
    };
    let mut g = DotGraph::default();
    match toks.get(pos) {
        Some((_, Tok::Id(k))) if k == "digraph" => pos += 1,
        _ => return Err(err(pos, "expected `digraph`")),
    }
    if let Some((_, Tok::Id(name))) = toks.get(pos) {
        g.name = Some(name.clone());
        pos += 1;
    }
    if toks.get(pos).map(|t| &t.1) != Some(&Tok::Open) {
        return Err(err(pos, "expected `{`"));
    }
    pos += 1;
    loop {
        let first = match toks.get(pos) {
            Some((_, Tok::Close)) => {
                pos += 1;
                break;
            }
            Some((_, Tok::Semi)) => {
                pos += 1;
                continue;
            }
            Some((_, Tok::Id(id))) => id.clone(),
            _ => return Err(err(pos, "expected a statement or `}`")),
        };
        pos += 1;
        let mut edge = None;
        match toks.get(pos).map(|t| &t.1) {
            Some(Tok::Arrow) => match toks.get(pos + 1) {
                Some((_, Tok::Id(to))) => {
                    edge = Some(to.clone());
                    pos += 2;
                }
                _ => return Err(err(pos + 1, "expected edge target")),
            },
            Some(Tok::Line) => return Err(err(pos, "`--` is not allowed in a digraph")),
            _ => {}
        }
        let mut attrs: Vec<(String, String)> = Vec::new();
        if toks.get(pos).map(|t| &t.1) == Some(&Tok::LBracket) {
            pos += 1;
            loop {
                match toks.get(pos) {
                    Some((_, Tok::RBracket)) => {
                        pos += 1;
                        break;
                    }
                    Some((_, Tok::Comma)) | Some((_, Tok::Semi)) => pos += 1,
                    Some((_, Tok::Id(k))) => match (toks.get(pos + 1), toks.get(pos + 2)) {
                        (Some((_, Tok::Eq)), Some((_, Tok::Id(v)))) => {
                            attrs.push((k.clone(), v.clone()));
                            pos += 3;
                        }
                        _ => return Err(err(pos, "expected `key=value`")),
                    },
                    _ => return Err(err(pos, "unterminated attribute list")),
                }
            }
        }
        let attr = |k: &str| attrs.iter().find(|(a, _)| a == k).map(|(_, v)| v.clone());
        match edge {
            Some(to) => {
                for n in [&first, &to] {
                    if !g.nodes.contains(n) {
                        g.nodes.push(n.clone());
                    }
                }
                g.edges.push(DotEdge {
                    from: first,
                    to,
                    directed: attr("dir").as_deref() != Some("none"),
                    style: attr("style"),
                });
            }
            None => {
                if !g.nodes.contains(&first) {
                    g.nodes.push(first);
                }
            }
        }
    }
    if pos != toks.len() {
        return Err(err(pos, "trailing content after graph"));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn learned_graph_round_trip() {
        let mut g = Pdag::new(vec!["C".into(), "A \"x\"".into(), "B".into()]).unwrap();
        g.add_directed(1, 0).unwrap();
        g.add_undirected(0, 2).unwrap();
        let text = learned_dot(&g);
        let parsed = parse_dot(&text, "mem").unwrap();
        assert_eq!(parsed.nodes, ["A \"x\"", "B", "C"]);
        assert_eq!(
            parsed.edges,
            [
                DotEdge {
                    from: "A \"x\"".into(),
                    to: "C".into(),
                    directed: true,
                    style: Some("solid".into())
                },
                DotEdge {
                    from: "B".into(),
                    to: "C".into(),
                    directed: false,
                    style: Some("solid".into())
                },
            ]
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "graph g { a -- b; }",
            "digraph { a -> ; }",
            "digraph { a [x=]; }",
            "digraph { a",
            "digraph { } x",
        ] {
            assert!(parse_dot(bad, "mem").is_err(), "{bad}");
        }
    }
}
