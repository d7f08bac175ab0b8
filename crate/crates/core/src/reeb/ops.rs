use std::collections::{BTreeSet, HashMap};

use crate::height::Height;

use super::graph::{Edge, EdgeId, Interval, ReebGraph, Vertex, VertexId};

pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }
}

/// Connected components as sorted vertex-id lists, ordered by their smallest id.
pub fn components(g: &ReebGraph) -> Vec<Vec<VertexId>> {
    let labels = component_labels(g);
    let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
    let mut out = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        out[l].push(g.vertices()[i].id);
    }
    for c in &mut out {
        c.sort();
    }
    out.sort();
    out
}

/// Component label per vertex position, labels numbered by first appearance.
pub fn component_labels(g: &ReebGraph) -> Vec<usize> {
    let mut dsu = Dsu::new(g.vertex_count());
    for ei in 0..g.edge_count() {
        let (a, b) = g.ends_at(ei);
        dsu.union(a, b);
    }
    let mut label = HashMap::new();
    (0..g.vertex_count())
        .map(|i| {
            let r = dsu.find(i);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

pub fn component_count(g: &ReebGraph) -> usize {
    components(g).len()
}

pub fn is_connected(g: &ReebGraph) -> bool {
    component_count(g) == 1
}

/// Per-component images (in `components` order) and the overall image.
pub fn image(g: &ReebGraph) -> (Vec<Interval>, Interval) {
    let comps = components(g);
    let mut overall = Interval::Empty;
    let per = comps
        .iter()
        .map(|c| {
            let iv = c.iter().fold(Interval::Empty, |acc, &v| {
                let x = g.height(v).clone();
                acc.hull(&Interval::Closed(x.clone(), x))
            });
            overall = overall.hull(&iv);
            iv
        })
        .collect();
    (per, overall)
}

pub fn overall_image(g: &ReebGraph) -> Interval {
    image(g).1
}

/// Correspondence from each original edge to the chain of edges replacing it, bottom to top.
pub type EdgeChains = Vec<(EdgeId, Vec<EdgeId>)>;

/// Inserts a degree-2 vertex wherever an edge crosses one of `levels` in its open span.
///
/// Original vertex ids are kept; an edge that is split keeps its id on the lowest piece.
pub fn subdivide_at(g: &ReebGraph, levels: &BTreeSet<Height>) -> (ReebGraph, EdgeChains) {
    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    let mut next_v = g.vertices().iter().map(|v| v.id.0 + 1).max().unwrap_or(0);
    let mut next_e = g.edges().iter().map(|e| e.id.0 + 1).max().unwrap_or(0);
    let mut edges: Vec<Edge> = Vec::with_capacity(g.edge_count());
    let mut extra: Vec<Edge> = Vec::new();
    let mut chains = Vec::with_capacity(g.edge_count());
    for (ei, e) in g.edges().iter().enumerate() {
        let (lo, hi) = g.span_at(ei);
        let inner: Vec<&Height> = levels
            .range((std::ops::Bound::Excluded(lo), std::ops::Bound::Excluded(hi)))
            .collect();
        if inner.is_empty() {
            edges.push(e.clone());
            chains.push((e.id, vec![e.id]));
            continue;
        }
        let mut prev = e.ends[0];
        let mut chain = Vec::with_capacity(inner.len() + 1);
        for (k, &x) in inner.iter().enumerate() {
            let v = VertexId(next_v);
            next_v += 1;
            vertices.push(Vertex { id: v, height: x.clone() });
            let id = if k == 0 { e.id } else { fresh(&mut next_e) };
            let piece = Edge { id, ends: [prev, v] };
            if k == 0 {
                edges.push(piece);
            } else {
                extra.push(piece);
            }
            chain.push(id);
            prev = v;
        }
        let id = fresh(&mut next_e);
        extra.push(Edge { id, ends: [prev, e.ends[1]] });
        chain.push(id);
        chains.push((e.id, chain));
    }
    edges.extend(extra);
    (ReebGraph::build(vertices, edges), chains)
}

fn fresh(next: &mut u32) -> EdgeId {
    let id = EdgeId(*next);
    *next += 1;
    id
}

/// Vertex positions in an order where every edge goes from an earlier to a later position.
pub fn upward_order(g: &ReebGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut indeg: Vec<usize> = vec![0; n];
    for ei in 0..g.edge_count() {
        indeg[g.ends_at(ei).1] += 1;
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &ei in g.incident_at(v) {
            let (lo, hi) = g.ends_at(ei);
            if lo == v {
                indeg[hi] -= 1;
                if indeg[hi] == 0 {
                    order.push(hi);
                }
            }
        }
    }
    order
}

/// For each vertex position, the positions of the highest vertex reachable by an up-path
/// and the lowest reachable by a down-path.
pub fn reach_extremes(g: &ReebGraph) -> (Vec<usize>, Vec<usize>) {
    let order = upward_order(g);
    let n = g.vertex_count();
    let mut top: Vec<usize> = (0..n).collect();
    let mut bottom: Vec<usize> = (0..n).collect();
    for &v in order.iter().rev() {
        for &ei in g.incident_at(v) {
            let (lo, hi) = g.ends_at(ei);
            if lo == v && g.height_at(top[hi]) > g.height_at(top[v]) {
                top[v] = top[hi];
            }
        }
    }
    for &v in order.iter() {
        for &ei in g.incident_at(v) {
            let (lo, hi) = g.ends_at(ei);
            if hi == v && g.height_at(bottom[lo]) < g.height_at(bottom[v]) {
                bottom[v] = bottom[lo];
            }
        }
    }
    (top, bottom)
}

/// Heights of the tallest up-path and down-path from each vertex, indexed by vertex position.
pub fn longest_up_down(g: &ReebGraph) -> Vec<(Height, Height)> {
    let (top, bottom) = reach_extremes(g);
    (0..g.vertex_count())
        .map(|v| {
            let x = g.height_at(v);
            (g.height_at(top[v]) - x, x - g.height_at(bottom[v]))
        })
        .collect()
}

/// Up-forks and down-forks, as sorted id sets.
pub fn forks(g: &ReebGraph) -> (Vec<VertexId>, Vec<VertexId>) {
    let mut up = Vec::new();
    let mut down = Vec::new();
    for vi in 0..g.vertex_count() {
        let (u, d) = g.up_down_at(vi);
        if u.len() >= 2 {
            up.push(g.vertices()[vi].id);
        }
        if d.len() >= 2 {
            down.push(g.vertices()[vi].id);
        }
    }
    up.sort();
    down.sort();
    (up, down)
}
