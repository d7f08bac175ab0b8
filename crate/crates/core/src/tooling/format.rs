//! The line-oriented graph document format.
//!
//! ```text
//! reebgraph 1
//! vertex 0 0
//! vertex 1 3/2
//! edge 0 0 1
//! ```
//!
//! Blank lines and `#` comments are ignored. The canonical form lists vertices then edges by
//! ascending id, heights reduced, and each edge with its lower endpoint first.

use crate::height::Height;
use crate::reeb::{Edge, EdgeId, ReebGraph, ValidationError, Vertex, VertexId};

pub const FORMAT_VERSION: u32 = 1;
const HEADER: &str = "reebgraph";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: invalid rational `{text}`")]
    InvalidRational { line: usize, text: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn id(line: usize, s: &str) -> Result<u32, FormatError> {
    s.parse().map_err(|_| syntax(line, format!("bad id `{s}`")))
}

pub fn parse(text: &str) -> Result<ReebGraph, FormatError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        if !seen_header {
            match words.as_slice() {
                [HEADER, v] if *v == FORMAT_VERSION.to_string() => {
                    seen_header = true;
                    continue;
                }
                [HEADER, v] => return Err(syntax(line, format!("unsupported version `{v}`"))),
                _ => return Err(syntax(line, format!("expected `{HEADER} {FORMAT_VERSION}`"))),
            }
        }
        match words.as_slice() {
            ["vertex", v, hgt] => {
                let height: Height =
                    hgt.parse().map_err(|_| FormatError::InvalidRational { line, text: hgt.to_string() })?;
                vertices.push(Vertex { id: VertexId(id(line, v)?), height });
            }
            ["edge", e, a, b] => {
                edges.push(Edge { id: EdgeId(id(line, e)?), ends: [VertexId(id(line, a)?), VertexId(id(line, b)?)] });
            }
            ["vertex", ..] => return Err(syntax(line, "expected `vertex <id> <height>`")),
            ["edge", ..] => return Err(syntax(line, "expected `edge <id> <a> <b>`")),
            [w, ..] => return Err(syntax(line, format!("unknown record `{w}`"))),
            [] => unreachable!(),
        }
    }
    if !seen_header {
        return Err(syntax(1, format!("expected `{HEADER} {FORMAT_VERSION}`")));
    }
    Ok(ReebGraph::new(vertices, edges)?)
}

pub fn serialize(g: &ReebGraph) -> String {
    let mut vs: Vec<&Vertex> = g.vertices().iter().collect();
    vs.sort_by_key(|v| v.id);
    let mut es: Vec<&Edge> = g.edges().iter().collect();
    es.sort_by_key(|e| e.id);
    let mut out = format!("{HEADER} {FORMAT_VERSION}\n");
    for v in vs {
        out.push_str(&format!("vertex {} {}\n", v.id, v.height));
    }
    for e in es {
        out.push_str(&format!("edge {} {} {}\n", e.id, e.ends[0], e.ends[1]));
    }
    out
}
