//! Line-oriented text format for marked graphs.
//!
//! ```text
//! g 3
//! v 1 t:s
//! v 2 t:s
//! v 3 t:r
//! e 1 2 a:_
//! e 2 3 _:b
//! ```
//!
//! Vertex ids are 1-based in files. Joint marks are written `x1:x2` with `_`
//! for a placeholder coordinate; domain graphs use single-token marks.
//! Blank lines and lines starting with `#` are ignored on input. Output is
//! canonical: header, vertex lines in id order, then edges in lexicographic
//! order with the smaller endpoint first.

use std::fmt::Write as _;

use super::graph::{DomainGraph, JointGraph, MarkedGraph};
use super::marks::{Mark, MarkSpaces, Side};
use crate::error::{Error, Result};

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

fn parse_vertex_id(token: &str, n: usize, line: usize) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(id) if (1..=n).contains(&id) => Ok(id - 1),
        _ => parse_err(line, format!("vertex id {token:?} not in 1..={n}")),
    }
}

fn parse_generic<V: Copy, E: Copy>(
    text: &str,
    vertex: impl Fn(&str) -> Option<V>,
    edge: impl Fn(&str) -> Option<E>,
) -> Result<MarkedGraph<V, E>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = match lines.next() {
        Some(h) => h,
        None => return parse_err(1, "missing header line `g <n>`"),
    };
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["g", n] => match n.parse::<usize>() {
            Ok(n) => n,
            Err(_) => return parse_err(hline, format!("bad vertex count {n:?}")),
        },
        _ => return parse_err(hline, "expected header `g <n>`"),
    };

    let mut vmarks: Vec<Option<V>> = vec![None; n];
    let mut edges: Vec<(usize, usize, usize, E)> = Vec::new();
    for (lineno, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        match tokens[..] {
            ["v", id, mark] => {
                let v = parse_vertex_id(id, n, lineno)?;
                let Some(m) = vertex(mark) else {
                    return parse_err(lineno, format!("unknown vertex mark {mark:?}"));
                };
                if vmarks[v].replace(m).is_some() {
                    return parse_err(lineno, format!("vertex {id} declared twice"));
                }
            }
            ["e", a, b, mark] => {
                let u = parse_vertex_id(a, n, lineno)?;
                let v = parse_vertex_id(b, n, lineno)?;
                if u == v {
                    return parse_err(lineno, format!("self-loop at vertex {a}"));
                }
                let Some(m) = edge(mark) else {
                    return parse_err(lineno, format!("unknown edge mark {mark:?}"));
                };
                edges.push((lineno, u, v, m));
            }
            _ => return parse_err(lineno, format!("malformed line {l:?}")),
        }
    }
    let Some(vertex_marks) = vmarks.iter().copied().collect::<Option<Vec<V>>>() else {
        let missing = vmarks.iter().position(Option::is_none).expect("some vertex missing");
        return parse_err(hline, format!("vertex {} has no mark line", missing + 1));
    };
    let mut g = MarkedGraph::empty(vertex_marks);
    for (lineno, u, v, m) in edges {
        if g.edge(u, v).is_some() {
            return parse_err(lineno, format!("duplicate edge ({}, {})", u + 1, v + 1));
        }
        g.insert_edge(u, v, m).expect("validated above");
    }
    Ok(g)
}

fn serialize_generic<V: Copy, E: Copy>(
    g: &MarkedGraph<V, E>,
    vertex: impl Fn(V) -> String,
    edge: impl Fn(E) -> String,
) -> String {
    let mut out = String::new();
    writeln!(out, "g {}", g.n()).unwrap();
    for (i, &t) in g.vertex_marks().iter().enumerate() {
        writeln!(out, "v {} {}", i + 1, vertex(t)).unwrap();
    }
    for (u, v, x) in g.edges() {
        writeln!(out, "e {} {} {}", u + 1, v + 1, edge(x)).unwrap();
    }
    out
}

pub fn parse_graph(text: &str, marks: &MarkSpaces) -> Result<JointGraph> {
    parse_generic(text, |s| marks.parse_vertex_pair(s), |s| marks.parse_edge_pair(s))
}

pub fn serialize_graph(j: &JointGraph, marks: &MarkSpaces) -> String {
    serialize_generic(j, |t| marks.format_vertex_pair(t), |x| marks.format_edge_pair(x))
}

pub fn parse_domain_graph(text: &str, side: Side, marks: &MarkSpaces) -> Result<DomainGraph> {
    let g: MarkedGraph<Mark, Mark> = parse_generic(
        text,
        |s| marks.vertex_mark_of(side, s),
        |s| marks.edge_mark_of(side, s),
    )?;
    DomainGraph::new(side, g, marks)
}

pub fn serialize_domain_graph(g: &DomainGraph, marks: &MarkSpaces) -> String {
    let side = g.side();
    serialize_generic(
        g.graph(),
        |t| marks.vertex_symbol(side, t).to_string(),
        |x| marks.edge_symbol(side, Some(x)).to_string(),
    )
}
