//! The ε-smoothing, computed as a sweep over interlevel sets `f⁻¹([c−ε, c+ε])`.
//!
//! Every vertex and every open edge of the input is an *element*. A vertex is present in the
//! window around `c` for `c ∈ [f(v)−ε, f(v)+ε]`, an open edge `(u,w)` for
//! `c ∈ (f(u)−ε, f(w)+ε)`, and an edge is glued to an endpoint whenever both are present.
//! Presence only changes at the critical levels `f(v)±ε`, so the sweep alternates between
//! critical levels and the open gaps between them ("slots"). Output vertices are created only
//! for components that contain an element whose presence changes at that level; all other
//! components pass through as edges.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::height::Height;
use crate::morphisms::ReebMorphism;
use crate::reeb::{Edge, EdgeId, PointRef, ReebGraph, Vertex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Element {
    Vertex(VertexId),
    Edge(EdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Vertex(u32),
    Edge(u32),
}

#[derive(Clone, Debug)]
struct TraceEntry {
    first: usize,
    last: usize,
    item: Item,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("smoothing parameter must be non-negative")]
    NegativeEpsilon,
    #[error("truncation parameter must be non-negative")]
    NegativeTau,
    #[error("slope must lie in [0, 1]")]
    SlopeOutOfRange,
    #[error("backward view needs tau <= eps")]
    TauExceedsEpsilon,
    #[error("band must satisfy -eps <= lo <= hi <= eps")]
    BandOutOfRange,
}

/// The smoothed graph together with the data realizing the quotient map.
#[derive(Clone)]
pub struct SmoothResult {
    pub graph: Arc<ReebGraph>,
    pub eta: ReebMorphism,
    /// Sorted distinct sweep levels: every `f(v)−ε`, `f(v)` and `f(v)+ε`.
    pub levels: Vec<Height>,
    pub eps: Height,
    input: Arc<ReebGraph>,
    vertex_fibers: Vec<Vec<Element>>,
    edge_fibers: Vec<Vec<Element>>,
    traces: Vec<Vec<TraceEntry>>,
}

impl std::fmt::Debug for SmoothResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothResult").field("eps", &self.eps).field("graph", &self.graph).finish()
    }
}

pub fn smooth(g: &ReebGraph, eps: &Height) -> Result<SmoothResult, FlowError> {
    smooth_arc(Arc::new(g.clone()), eps)
}

pub fn smooth_arc(g: Arc<ReebGraph>, eps: &Height) -> Result<SmoothResult, FlowError> {
    if eps.is_negative() {
        return Err(FlowError::NegativeEpsilon);
    }
    Ok(Sweep::new(&g, eps).run(g.clone(), eps))
}

struct Sweep {
    n: usize,
    levels: Vec<Height>,
    // presence of each element as an inclusive slot range; slot 2i+1 is level i, slot 2i+2 the gap above it
    present: Vec<(usize, usize)>,
    // elements whose presence changes at each level, sorted
    touched: Vec<Vec<usize>>,
    starts: Vec<Vec<usize>>,
    // per element: for edges, endpoint element ids
    edge_ends: Vec<(usize, usize)>,
}

impl Sweep {
    fn new(g: &ReebGraph, eps: &Height) -> Sweep {
        let n = g.vertex_count();
        let m = g.edge_count();
        let mut levels = Vec::with_capacity(3 * n);
        for v in g.vertices() {
            levels.push(&v.height - eps);
            levels.push(v.height.clone());
            levels.push(&v.height + eps);
        }
        levels.sort();
        levels.dedup();
        let idx = |x: &Height| levels.binary_search(x).expect("level present");
        let mut lo_idx = Vec::with_capacity(n);
        let mut mid_idx = Vec::with_capacity(n);
        let mut hi_idx = Vec::with_capacity(n);
        for v in g.vertices() {
            lo_idx.push(idx(&(&v.height - eps)));
            mid_idx.push(idx(&v.height));
            hi_idx.push(idx(&(&v.height + eps)));
        }
        let mut present = Vec::with_capacity(n + m);
        for v in 0..n {
            present.push((2 * lo_idx[v] + 1, 2 * hi_idx[v] + 1));
        }
        let mut edge_ends = vec![(usize::MAX, usize::MAX); n];
        for ei in 0..m {
            let (a, b) = g.ends_at(ei);
            present.push((2 * lo_idx[a] + 2, 2 * hi_idx[b]));
            edge_ends.push((a, b));
        }
        let mut touched = vec![Vec::new(); levels.len()];
        for v in 0..n {
            for i in [lo_idx[v], mid_idx[v], hi_idx[v]] {
                touched[i].push(v);
                for &ei in g.incident_at(v) {
                    touched[i].push(n + ei);
                }
            }
        }
        for t in &mut touched {
            t.sort_unstable();
            t.dedup();
        }
        let slots = 2 * levels.len() + 1;
        let mut starts = vec![Vec::new(); slots + 1];
        for (x, &(s, _)) in present.iter().enumerate() {
            starts[s].push(x);
        }
        Sweep { n, levels, present, touched, starts, edge_ends }
    }

    fn run(self, input: Arc<ReebGraph>, eps: &Height) -> SmoothResult {
        let total = self.present.len();
        let nl = self.levels.len();
        let mut parent: Vec<usize> = (0..total).collect();
        let mut comp_of: Vec<usize> = vec![usize::MAX; total];
        let mut mark: Vec<usize> = vec![usize::MAX; total];
        let mut active: Vec<usize> = Vec::new();

        let mut out_vertices: Vec<Vertex> = Vec::new();
        let mut vertex_fibers: Vec<Vec<usize>> = Vec::new();
        let mut edge_start: Vec<u32> = Vec::new();
        let mut edge_end: Vec<u32> = Vec::new();
        let mut edge_fibers: Vec<Vec<usize>> = Vec::new();
        let mut pending: HashMap<usize, u32> = HashMap::new();
        let mut traces: Vec<Vec<TraceEntry>> = vec![Vec::new(); total];
        // output vertex of each element's component at the current level (valid when mark == slot)
        let mut level_vertex: Vec<u32> = vec![0; total];
        let mut closing: Vec<(u32, usize)> = Vec::new();

        let record = |traces: &mut Vec<Vec<TraceEntry>>, x: usize, s: usize, item: Item| {
            let t = &mut traces[x];
            if let Some(last) = t.last_mut() {
                if last.item == item && last.last + 1 == s {
                    last.last = s;
                    return;
                }
            }
            t.push(TraceEntry { first: s, last: s, item });
        };

        for s in 1..2 * nl + 1 {
            active.retain(|&x| self.present[x].1 >= s);
            active.extend(self.starts[s].iter().copied());
            active.sort_unstable();
            let comps = self.components(s, &active, &mut parent, &mut comp_of);
            if s % 2 == 1 {
                let i = (s - 1) / 2;
                let height = &self.levels[i];
                let mut touched_comp = vec![false; comps.len()];
                for &x in &self.touched[i] {
                    if self.is_present(x, s) {
                        touched_comp[comp_of[x]] = true;
                    }
                }
                for (c, members) in comps.iter().enumerate() {
                    if touched_comp[c] {
                        let id = out_vertices.len() as u32;
                        out_vertices.push(Vertex { id: VertexId(id), height: height.clone() });
                        vertex_fibers.push(members.clone());
                        for &x in members {
                            level_vertex[x] = id;
                            mark[x] = s;
                            record(&mut traces, x, s, Item::Vertex(id));
                        }
                    } else {
                        let key = members[0];
                        let e = *pending.get(&key).expect("untouched component continues an edge");
                        for &x in members {
                            record(&mut traces, x, s, Item::Edge(e));
                        }
                    }
                }
                for (e, rep) in closing.drain(..) {
                    debug_assert_eq!(mark[rep], s);
                    edge_end[e as usize] = level_vertex[rep];
                }
            } else {
                let below = s / 2 - 1;
                let above = s / 2;
                let mut from_below = vec![false; comps.len()];
                let mut from_above = vec![false; comps.len()];
                for &x in &self.touched[below] {
                    if self.is_present(x, s) {
                        from_below[comp_of[x]] = true;
                    }
                }
                if above < nl {
                    for &x in &self.touched[above] {
                        if self.is_present(x, s) {
                            from_above[comp_of[x]] = true;
                        }
                    }
                }
                for (c, members) in comps.iter().enumerate() {
                    let key = members[0];
                    let e = if from_below[c] {
                        let rep = self.anchor(members, s - 1).expect("gap component meets the level below");
                        let e = edge_start.len() as u32;
                        edge_start.push(level_vertex[rep]);
                        edge_end.push(u32::MAX);
                        edge_fibers.push(members.clone());
                        pending.insert(key, e);
                        e
                    } else {
                        *pending.get(&key).expect("untouched component continues an edge")
                    };
                    for &x in members {
                        record(&mut traces, x, s, Item::Edge(e));
                    }
                    if from_above[c] {
                        pending.remove(&key);
                        let rep = self.anchor(members, s + 1).expect("gap component meets the level above");
                        closing.push((e, rep));
                    }
                }
            }
        }
        debug_assert!(pending.is_empty());

        let edges: Vec<Edge> = edge_start
            .iter()
            .zip(&edge_end)
            .enumerate()
            .map(|(i, (&a, &b))| Edge { id: EdgeId(i as u32), ends: [VertexId(a), VertexId(b)] })
            .collect();
        let graph = Arc::new(ReebGraph::build(out_vertices, edges));
        let to_elements = |fibers: Vec<Vec<usize>>| -> Vec<Vec<Element>> {
            fibers
                .into_iter()
                .map(|f| f.into_iter().map(|x| self.element(&input, x)).collect())
                .collect()
        };
        let mut result = SmoothResult {
            graph: graph.clone(),
            eta: ReebMorphism::identity(Arc::new(ReebGraph::empty())),
            levels: self.levels.clone(),
            eps: eps.clone(),
            input: input.clone(),
            vertex_fibers: to_elements(vertex_fibers),
            edge_fibers: to_elements(edge_fibers),
            traces,
        };
        result.eta = result.build_eta();
        result
    }

    fn is_present(&self, x: usize, s: usize) -> bool {
        let (a, b) = self.present[x];
        a <= s && s <= b
    }

    // An element present at slot `t` in the closure of a gap component. At ε = 0 an edge
    // meets the adjacent level only through its endpoint.
    fn anchor(&self, members: &[usize], t: usize) -> Option<usize> {
        members.iter().copied().find(|&x| self.is_present(x, t)).or_else(|| {
            members.iter().find_map(|&x| {
                if x < self.n {
                    return None;
                }
                let (a, b) = self.edge_ends[x];
                [a, b].into_iter().find(|&v| self.is_present(v, t))
            })
        })
    }

    fn element(&self, g: &ReebGraph, x: usize) -> Element {
        if x < self.n {
            Element::Vertex(g.vertices()[x].id)
        } else {
            Element::Edge(g.edges()[x - self.n].id)
        }
    }

    // Components of the active elements at slot `s`; members sorted, components ordered by
    // their smallest member. Fills `comp_of` for active elements.
    fn components(
        &self,
        s: usize,
        active: &[usize],
        parent: &mut [usize],
        comp_of: &mut [usize],
    ) -> Vec<Vec<usize>> {
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &x in active {
            parent[x] = x;
        }
        for &x in active {
            if x >= self.n {
                let (a, b) = self.edge_ends[x];
                for v in [a, b] {
                    if self.is_present(v, s) {
                        let (ra, rb) = (find(parent, x), find(parent, v));
                        if ra != rb {
                            // keep the smaller element as root so roots are component minima
                            if ra < rb {
                                parent[rb] = ra;
                            } else {
                                parent[ra] = rb;
                            }
                        }
                    }
                }
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for &x in active {
            let r = find(parent, x);
            if r == x {
                comp_of[x] = comps.len();
                comps.push(vec![x]);
            } else {
                let c = comp_of[r];
                comp_of[x] = c;
                comps[c].push(x);
            }
        }
        comps
    }
}

impl SmoothResult {
    pub fn input(&self) -> &Arc<ReebGraph> {
        &self.input
    }

    /// Input elements forming the interlevel component represented by an output vertex.
    pub fn vertex_fiber(&self, v: VertexId) -> &[Element] {
        &self.vertex_fibers[self.graph.vertex_index(v)]
    }

    /// Input elements forming the interlevel components along an output edge.
    pub fn edge_fiber(&self, e: EdgeId) -> &[Element] {
        &self.edge_fibers[self.graph.edge_index(e)]
    }

    /// Input elements of the component represented by an output point.
    pub fn fiber(&self, p: &PointRef) -> &[Element] {
        match p {
            PointRef::Vertex(v) => self.vertex_fiber(*v),
            PointRef::EdgeInterior(e, _) => self.edge_fiber(*e),
        }
    }

    fn element_index(&self, x: Element) -> usize {
        match x {
            Element::Vertex(v) => self.input.vertex_index(v),
            Element::Edge(e) => self.input.vertex_count() + self.input.edge_index(e),
        }
    }

    fn slot_of(&self, c: &Height) -> usize {
        match self.levels.binary_search(c) {
            Ok(i) => 2 * i + 1,
            Err(i) => 2 * i,
        }
    }

    fn item_at(&self, x: usize, slot: usize) -> Option<Item> {
        let t = &self.traces[x];
        let k = t.partition_point(|e| e.last < slot);
        t.get(k).filter(|e| e.first <= slot).map(|e| e.item)
    }

    /// The output point at height `c` whose component contains element `x`, if `x` meets
    /// the window `[c−ε, c+ε]`.
    pub fn locate(&self, c: &Height, x: Element) -> Option<PointRef> {
        let slot = self.slot_of(c);
        self.item_at(self.element_index(x), slot).map(|item| match item {
            Item::Vertex(v) => PointRef::Vertex(VertexId(v)),
            Item::Edge(e) => PointRef::EdgeInterior(EdgeId(e), c.clone()),
        })
    }

    /// Output edges followed by the component of `x` as the level rises over `(lo, hi)`.
    ///
    /// `x` must meet every window in between.
    pub fn follow(&self, x: Element, lo: &Height, hi: &Height) -> Vec<EdgeId> {
        let xi = self.element_index(x);
        let (a, b) = (self.slot_of(lo), self.slot_of(hi));
        let t = &self.traces[xi];
        let k = t.partition_point(|e| e.last < a);
        let mut out = Vec::new();
        for e in &t[k..] {
            if e.first > b {
                break;
            }
            if let Item::Edge(id) = e.item {
                out.push(EdgeId(id));
            }
        }
        out
    }

    fn build_eta(&self) -> ReebMorphism {
        let g = &self.input;
        let vertex_map = g
            .vertices()
            .iter()
            .map(|v| self.locate(&v.height, Element::Vertex(v.id)).expect("vertex meets its own window"))
            .collect();
        let edge_map = g
            .edges()
            .iter()
            .enumerate()
            .map(|(ei, e)| {
                let (lo, hi) = g.span_at(ei);
                self.follow(Element::Edge(e.id), lo, hi)
            })
            .collect();
        ReebMorphism::from_parts(self.input.clone(), self.graph.clone(), vertex_map, edge_map)
    }
}
