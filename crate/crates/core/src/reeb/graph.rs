use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::height::Height;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub height: Height,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
}

/// A point of a Reeb graph: a vertex, or an interior point of an edge at a given height.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointRef {
    Vertex(VertexId),
    EdgeInterior(EdgeId, Height),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interval {
    Empty,
    Closed(Height, Height),
}

impl Interval {
    pub fn new(lo: Height, hi: Height) -> Interval {
        assert!(lo <= hi, "interval bounds out of order");
        Interval::Closed(lo, hi)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Interval::Empty, x) | (x, Interval::Empty) => x.clone(),
            (Interval::Closed(a, b), Interval::Closed(c, d)) => {
                Interval::Closed(a.min_of(c).clone(), b.max_of(d).clone())
            }
        }
    }

    pub fn contains(&self, x: &Height) -> bool {
        match self {
            Interval::Empty => false,
            Interval::Closed(a, b) => a <= x && x <= b,
        }
    }

    pub fn length(&self) -> Height {
        match self {
            Interval::Empty => Height::zero(),
            Interval::Closed(a, b) => b - a,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => write!(f, "empty"),
            Interval::Closed(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, thiserror::Error, Serialize, Deserialize)]
pub enum Violation {
    #[error("edge {0} joins two vertices of equal height")]
    AdjacentEqualHeights(EdgeId),
    #[error("edge {0} references a missing vertex")]
    DanglingEndpoint(EdgeId),
    #[error("vertex id {0} is used more than once")]
    DuplicateVertexId(VertexId),
    #[error("edge id {0} is used more than once")]
    DuplicateEdgeId(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid Reeb graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError(pub Vec<Violation>);

/// Checks raw graph data against the Reeb graph invariants.
pub fn validate(vertices: &[Vertex], edges: &[Edge]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut heights: HashMap<VertexId, &Height> = HashMap::with_capacity(vertices.len());
    for v in vertices {
        if heights.insert(v.id, &v.height).is_some() {
            out.push(Violation::DuplicateVertexId(v.id));
        }
    }
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for e in edges {
        if !seen.insert(e.id) {
            out.push(Violation::DuplicateEdgeId(e.id));
        }
        match (heights.get(&e.ends[0]), heights.get(&e.ends[1])) {
            (Some(a), Some(b)) => {
                if a == b {
                    out.push(Violation::AdjacentEqualHeights(e.id));
                }
            }
            _ => out.push(Violation::DanglingEndpoint(e.id)),
        }
    }
    out
}

/// A finite multigraph with an exact height per vertex and no edge between equal heights.
///
/// Edges are stored with their lower endpoint first. Values are immutable once built.
#[derive(Clone)]
pub struct ReebGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vpos: HashMap<VertexId, usize>,
    epos: HashMap<EdgeId, usize>,
    dense: bool,
    // per vertex position: incident edge positions
    incident: Vec<Vec<usize>>,
    // per edge position: (low vertex position, high vertex position)
    ends: Vec<(usize, usize)>,
}

impl PartialEq for ReebGraph {
    fn eq(&self, other: &ReebGraph) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for ReebGraph {}

impl fmt::Debug for ReebGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReebGraph {{ vertices: [")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}@{}", v.id, v.height)?;
        }
        write!(f, "], edges: [")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}:{:?}-{:?}", e.id, e.ends[0], e.ends[1])?;
        }
        write!(f, "] }}")
    }
}

impl Default for ReebGraph {
    fn default() -> ReebGraph {
        ReebGraph::empty()
    }
}

impl ReebGraph {
    pub fn empty() -> ReebGraph {
        ReebGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vpos: HashMap::new(),
            epos: HashMap::new(),
            dense: true,
            incident: Vec::new(),
            ends: Vec::new(),
        }
    }

    /// Builds a graph, rejecting data that violates any invariant.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<ReebGraph, ValidationError> {
        let violations = validate(&vertices, &edges);
        if !violations.is_empty() {
            return Err(ValidationError(violations));
        }
        Ok(ReebGraph::build(vertices, edges))
    }

    /// Builds a graph whose vertex ids are `0..heights.len()` and whose edge ids are `0..pairs.len()`.
    pub fn from_heights(heights: Vec<Height>, pairs: &[(u32, u32)]) -> Result<ReebGraph, ValidationError> {
        let vertices = heights
            .into_iter()
            .enumerate()
            .map(|(i, height)| Vertex { id: VertexId(i as u32), height })
            .collect();
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| Edge { id: EdgeId(i as u32), ends: [VertexId(a), VertexId(b)] })
            .collect();
        ReebGraph::new(vertices, edges)
    }

    // Caller guarantees validity.
    pub(crate) fn build(vertices: Vec<Vertex>, mut edges: Vec<Edge>) -> ReebGraph {
        let dense = vertices.iter().enumerate().all(|(i, v)| v.id.0 as usize == i)
            && edges.iter().enumerate().all(|(i, e)| e.id.0 as usize == i);
        let (vpos, epos) = if dense {
            (HashMap::new(), HashMap::new())
        } else {
            (
                vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect(),
                edges.iter().enumerate().map(|(i, e)| (e.id, i)).collect(),
            )
        };
        let mut g = ReebGraph {
            vertices,
            edges: Vec::new(),
            vpos,
            epos,
            dense,
            incident: Vec::new(),
            ends: Vec::new(),
        };
        let mut incident = vec![Vec::new(); g.vertices.len()];
        let mut ends = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter_mut().enumerate() {
            let a = g.vpos_of(e.ends[0]);
            let b = g.vpos_of(e.ends[1]);
            let (lo, hi) = if g.vertices[a].height < g.vertices[b].height { (a, b) } else { (b, a) };
            e.ends = [g.vertices[lo].id, g.vertices[hi].id];
            incident[lo].push(i);
            incident[hi].push(i);
            ends.push((lo, hi));
        }
        g.edges = edges;
        g.incident = incident;
        g.ends = ends;
        g
    }

    fn vpos_of(&self, id: VertexId) -> usize {
        if self.dense {
            id.0 as usize
        } else {
            self.vpos[&id]
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_vertex(&self, id: VertexId) -> bool {
        if self.dense {
            (id.0 as usize) < self.vertices.len()
        } else {
            self.vpos.contains_key(&id)
        }
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        if self.dense {
            (id.0 as usize) < self.edges.len()
        } else {
            self.epos.contains_key(&id)
        }
    }

    /// Position of a vertex in `vertices()`.
    pub fn vertex_index(&self, id: VertexId) -> usize {
        self.vpos_of(id)
    }

    /// Position of an edge in `edges()`.
    pub fn edge_index(&self, id: EdgeId) -> usize {
        if self.dense {
            id.0 as usize
        } else {
            self.epos[&id]
        }
    }

    pub fn height(&self, v: VertexId) -> &Height {
        &self.vertices[self.vpos_of(v)].height
    }

    pub fn height_at(&self, vi: usize) -> &Height {
        &self.vertices[vi].height
    }

    /// Endpoint positions `(low, high)` of the edge at position `ei`.
    pub fn ends_at(&self, ei: usize) -> (usize, usize) {
        self.ends[ei]
    }

    /// Incident edge positions of the vertex at position `vi`.
    pub fn incident_at(&self, vi: usize) -> &[usize] {
        &self.incident[vi]
    }

    pub fn low(&self, e: EdgeId) -> VertexId {
        self.edges[self.edge_index(e)].ends[0]
    }

    pub fn high(&self, e: EdgeId) -> VertexId {
        self.edges[self.edge_index(e)].ends[1]
    }

    /// Heights of the lower and upper endpoint of an edge.
    pub fn span(&self, e: EdgeId) -> (&Height, &Height) {
        let (a, b) = self.ends[self.edge_index(e)];
        (&self.vertices[a].height, &self.vertices[b].height)
    }

    pub fn span_at(&self, ei: usize) -> (&Height, &Height) {
        let (a, b) = self.ends[ei];
        (&self.vertices[a].height, &self.vertices[b].height)
    }

    pub fn point_height(&self, p: &PointRef) -> Height {
        match p {
            PointRef::Vertex(v) => self.height(*v).clone(),
            PointRef::EdgeInterior(_, h) => h.clone(),
        }
    }

    /// Whether the point exists in this graph and (for edge points) lies strictly inside its edge.
    pub fn contains_point(&self, p: &PointRef) -> bool {
        match p {
            PointRef::Vertex(v) => self.has_vertex(*v),
            PointRef::EdgeInterior(e, h) => {
                if !self.has_edge(*e) {
                    return false;
                }
                let (lo, hi) = self.span(*e);
                lo < h && h < hi
            }
        }
    }

    /// The point of edge `e` at height `h`, which may be an endpoint.
    pub fn point_on_edge(&self, e: EdgeId, h: &Height) -> PointRef {
        let ei = self.edge_index(e);
        let (a, b) = self.ends[ei];
        if h == &self.vertices[a].height {
            PointRef::Vertex(self.vertices[a].id)
        } else if h == &self.vertices[b].height {
            PointRef::Vertex(self.vertices[b].id)
        } else {
            PointRef::EdgeInterior(e, h.clone())
        }
    }

    /// Up-going and down-going incident edge positions of a vertex position.
    pub fn up_down_at(&self, vi: usize) -> (Vec<usize>, Vec<usize>) {
        let mut up = Vec::new();
        let mut down = Vec::new();
        for &ei in &self.incident[vi] {
            if self.ends[ei].0 == vi {
                up.push(ei);
            } else {
                down.push(ei);
            }
        }
        (up, down)
    }

    /// Re-checks the invariants; always empty for values built through the public constructors.
    pub fn validate(&self) -> Vec<Violation> {
        validate(&self.vertices, &self.edges)
    }

    /// Sorted distinct vertex heights.
    pub fn distinct_heights(&self) -> Vec<Height> {
        let mut hs: Vec<Height> = self.vertices.iter().map(|v| v.height.clone()).collect();
        hs.sort();
        hs.dedup();
        hs
    }
}
