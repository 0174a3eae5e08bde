use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::Graph;
use crate::error::{Error, Result};

/// Renders the edge-list format: a header `n k` (k = 0 when the graph carries no
/// ring tag), then one `u v` line per edge with `u < v`, lexicographically sorted.
pub fn write_graph_string(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    let _ = writeln!(out, "{} {}", g.n(), g.ring_k().unwrap_or(0));
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_graph_string(g)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse(&text, path)
}

/// Parses the edge-list format from memory. Errors name `<memory>` as the path.
pub fn read_graph_str(text: &str) -> Result<Graph> {
    parse(text, Path::new("<memory>"))
}

fn parse(text: &str, path: &Path) -> Result<Graph> {
    let err = |line: usize, message: String| Error::Parse { path: PathBuf::from(path), line, message };
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let pair = |lineno: usize, line: &str| -> Result<(usize, usize)> {
        let mut it = line.split(' ');
        let a = it.next().and_then(|t| t.parse().ok());
        let b = it.next().and_then(|t| t.parse().ok());
        match (a, b, it.next()) {
            (Some(a), Some(b), None) => Ok((a, b)),
            _ => Err(err(lineno, format!("expected two non-negative integers separated by one space, got {line:?}"))),
        }
    };
    let (n, k) = pair(1, header)?;

    let mut edges = Vec::new();
    let mut last: Option<(usize, usize)> = None;
    for (lineno, line) in lines {
        if line.is_empty() {
            return Err(err(lineno, "blank line".into()));
        }
        let (u, v) = pair(lineno, line)?;
        if u >= v {
            return Err(err(lineno, format!("edge must satisfy u < v, got {u} {v}")));
        }
        if v >= n {
            return Err(err(lineno, format!("endpoint {v} >= n = {n}")));
        }
        if let Some(prev) = last {
            if (u, v) == prev {
                return Err(err(lineno, format!("duplicate edge {u} {v}")));
            }
            if (u, v) < prev {
                return Err(err(lineno, format!("edges not sorted: {u} {v} after {} {}", prev.0, prev.1)));
            }
        }
        last = Some((u, v));
        edges.push((u, v));
    }
    let g = Graph::from_edges(n, edges)?;
    if k > 0 {
        g.with_ring_tag(k)
    } else {
        Ok(g)
    }
}
