//! Graphviz and SVG drawings with height on the vertical axis.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::height::Height;
use crate::reeb::{ReebGraph, Vertex, VertexId};

const SCALE: f64 = 60.0;
const SPACING: f64 = 60.0;
const MARGIN: f64 = 30.0;

struct Layout {
    pos: BTreeMap<VertexId, (f64, f64)>,
    width: f64,
    height: f64,
}

fn to_f64(h: &Height) -> f64 {
    h.to_f64()
}

// Vertices at the same height share a row, ordered by id.
fn layout(g: &ReebGraph) -> Layout {
    let mut rows: BTreeMap<&Height, Vec<&Vertex>> = BTreeMap::new();
    for v in g.vertices() {
        rows.entry(&v.height).or_default().push(v);
    }
    let (lo, hi) = match (rows.keys().next(), rows.keys().next_back()) {
        (Some(a), Some(b)) => (to_f64(a), to_f64(b)),
        _ => (0.0, 0.0),
    };
    let span = (hi - lo).max(1.0);
    let widest = rows.values().map(Vec::len).max().unwrap_or(0);
    let mut pos = BTreeMap::new();
    for (h, mut vs) in rows {
        vs.sort_by_key(|v| v.id);
        let y = MARGIN + (hi - to_f64(h)) / span * SCALE * span.min(10.0);
        for (i, v) in vs.iter().enumerate() {
            pos.insert(v.id, (MARGIN + SPACING * i as f64, y));
        }
    }
    Layout {
        pos,
        width: 2.0 * MARGIN + SPACING * widest.saturating_sub(1) as f64,
        height: 2.0 * MARGIN + SCALE * span.min(10.0),
    }
}

pub fn to_dot(g: &ReebGraph) -> String {
    let lay = layout(g);
    let mut out = String::from("graph reeb {\n  node [shape=circle, fontsize=10];\n");
    for (id, (x, y)) in &lay.pos {
        let v = g.height(*id);
        let _ = writeln!(out, "  v{id} [label=\"{id}\\nh={v}\", pos=\"{x:.1},{:.1}!\"];", lay.height - y);
    }
    let mut es: Vec<_> = g.edges().iter().collect();
    es.sort_by_key(|e| e.id);
    for e in es {
        let _ = writeln!(out, "  v{} -- v{} [label=\"e{}\"];", e.ends[0], e.ends[1], e.id);
    }
    out.push_str("}\n");
    out
}

pub fn to_svg(g: &ReebGraph) -> String {
    let lay = layout(g);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">",
        lay.width, lay.height, lay.width, lay.height
    );
    let mut es: Vec<_> = g.edges().iter().collect();
    es.sort_by_key(|e| e.id);
    for e in es {
        let (x1, y1) = lay.pos[&e.ends[0]];
        let (x2, y2) = lay.pos[&e.ends[1]];
        let _ = writeln!(
            out,
            "  <line id=\"e{}\" x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"black\"/>",
            e.id
        );
    }
    for (id, (x, y)) in &lay.pos {
        let _ = writeln!(out, "  <circle id=\"v{id}\" cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"black\"/>");
        let _ = writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{id}: {}</text>",
            x + 6.0,
            y - 6.0,
            g.height(*id)
        );
    }
    out.push_str("</svg>\n");
    out
}
