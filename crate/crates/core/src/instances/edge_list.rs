//! Plain-text edge lists: a header line `n m` followed by `m` lines `u v`
//! with 0-based node ids. Writing emits LF line endings, `u < v` and
//! lexicographic edge order.

use std::fmt::Write;

use crate::{Error, Graph, Node, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::EdgeList {
        line,
        msg: msg.into(),
    }
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_ascii_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = parts
            .next()
            .ok_or_else(|| err(line_no, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| err(line_no, format!("invalid {what} {tok:?}")))
    };
    let pair = (next("first field")?, next("second field")?);
    if parts.next().is_some() {
        return Err(err(line_no, "expected exactly two fields"));
    }
    Ok(pair)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let (n, m) = parse_pair(header_line, header)?;
    if n == 0 {
        return Err(err(header_line, "node count must be positive"));
    }
    let mut edges: Vec<(Node, Node)> = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let (u, v) = parse_pair(line_no, line)?;
        if u >= n || v >= n {
            return Err(err(line_no, format!("endpoint out of range for n = {n}")));
        }
        if u == v {
            return Err(err(line_no, format!("self-loop on node {u}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(err(
            header_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
