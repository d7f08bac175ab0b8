//! Closed subgraphs of a Reeb graph, described by kept vertices and kept closed height
//! intervals on each edge, materialized as Reeb graphs with a two-way point correspondence.

use std::sync::Arc;

use crate::height::Height;
use crate::morphisms::{MorphismError, ReebMorphism};
use crate::reeb::{Edge, EdgeId, PointRef, ReebGraph, Vertex, VertexId};

#[derive(Clone, Debug)]
struct Piece {
    lo: Height,
    hi: Height,
    lo_v: VertexId,
    hi_v: VertexId,
    edge: Option<EdgeId>,
}

/// A closed subset of `parent`, with its own graph structure.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Arc<ReebGraph>,
    parent: Arc<ReebGraph>,
    vertex_origin: Vec<PointRef>,
    edge_origin: Vec<(EdgeId, Height, Height)>,
    vertex_lift: Vec<Option<VertexId>>,
    pieces: Vec<Vec<Piece>>,
}

impl Subgraph {
    /// The whole parent, sharing its graph.
    pub fn whole(parent: Arc<ReebGraph>) -> Subgraph {
        let vertex_origin = parent.vertices().iter().map(|v| PointRef::Vertex(v.id)).collect();
        let edge_origin = (0..parent.edge_count())
            .map(|ei| {
                let (a, b) = parent.span_at(ei);
                (parent.edges()[ei].id, a.clone(), b.clone())
            })
            .collect();
        let vertex_lift = parent.vertices().iter().map(|v| Some(v.id)).collect();
        let pieces = (0..parent.edge_count())
            .map(|ei| {
                let (a, b) = parent.ends_at(ei);
                let (x, y) = parent.span_at(ei);
                vec![Piece {
                    lo: x.clone(),
                    hi: y.clone(),
                    lo_v: parent.vertices()[a].id,
                    hi_v: parent.vertices()[b].id,
                    edge: Some(parent.edges()[ei].id),
                }]
            })
            .collect();
        Subgraph { graph: parent.clone(), parent, vertex_origin, edge_origin, vertex_lift, pieces }
    }

    /// Builds the subgraph made of the kept vertices (by parent position) and, per parent edge
    /// position, a list of closed height intervals inside the edge's span.
    ///
    /// Intervals are merged when they overlap or touch; an interval reaching an endpoint keeps
    /// that endpoint. New vertices get ids after the kept parent vertices, in parent edge order.
    pub fn build(parent: Arc<ReebGraph>, mut keep: Vec<bool>, intervals: Vec<Vec<(Height, Height)>>) -> Subgraph {
        let g = &*parent;
        let mut merged: Vec<Vec<(Height, Height)>> = Vec::with_capacity(g.edge_count());
        for (ei, mut iv) in intervals.into_iter().enumerate() {
            iv.sort();
            let mut out: Vec<(Height, Height)> = Vec::with_capacity(iv.len());
            for (a, b) in iv {
                debug_assert!(a <= b);
                match out.last_mut() {
                    Some(last) if a <= last.1 => {
                        if b > last.1 {
                            last.1 = b;
                        }
                    }
                    _ => out.push((a, b)),
                }
            }
            let (lo, hi) = g.ends_at(ei);
            let (x, y) = g.span_at(ei);
            if out.first().is_some_and(|p| &p.0 == x) {
                keep[lo] = true;
            }
            if out.last().is_some_and(|p| &p.1 == y) {
                keep[hi] = true;
            }
            merged.push(out);
        }

        let mut vertices: Vec<Vertex> = Vec::new();
        let mut vertex_origin = Vec::new();
        let mut vertex_lift = vec![None; g.vertex_count()];
        for (vi, v) in g.vertices().iter().enumerate() {
            if keep[vi] {
                let id = VertexId(vertices.len() as u32);
                vertices.push(Vertex { id, height: v.height.clone() });
                vertex_origin.push(PointRef::Vertex(v.id));
                vertex_lift[vi] = Some(id);
            }
        }
        let mut edges = Vec::new();
        let mut edge_origin = Vec::new();
        let mut pieces = Vec::with_capacity(g.edge_count());
        for (ei, iv) in merged.into_iter().enumerate() {
            let e = g.edges()[ei].id;
            let (lo, hi) = g.ends_at(ei);
            let (x, y) = g.span_at(ei);
            let mut ps = Vec::with_capacity(iv.len());
            for (a, b) in iv {
                let mut endpoint = |t: &Height, vertices: &mut Vec<Vertex>| -> VertexId {
                    if t == x {
                        vertex_lift[lo].unwrap()
                    } else if t == y {
                        vertex_lift[hi].unwrap()
                    } else {
                        let id = VertexId(vertices.len() as u32);
                        vertices.push(Vertex { id, height: t.clone() });
                        vertex_origin.push(PointRef::EdgeInterior(e, t.clone()));
                        id
                    }
                };
                let lo_v = endpoint(&a, &mut vertices);
                let hi_v = if a == b { lo_v } else { endpoint(&b, &mut vertices) };
                let edge = if a < b {
                    let id = EdgeId(edges.len() as u32);
                    edges.push(Edge { id, ends: [lo_v, hi_v] });
                    edge_origin.push((e, a.clone(), b.clone()));
                    Some(id)
                } else {
                    None
                };
                ps.push(Piece { lo: a, hi: b, lo_v, hi_v, edge });
            }
            pieces.push(ps);
        }
        Subgraph {
            graph: Arc::new(ReebGraph::build(vertices, edges)),
            parent,
            vertex_origin,
            edge_origin,
            vertex_lift,
            pieces,
        }
    }

    pub fn parent(&self) -> &Arc<ReebGraph> {
        &self.parent
    }

    /// The parent point underlying a point of the subgraph.
    pub fn lower(&self, p: &PointRef) -> PointRef {
        match p {
            PointRef::Vertex(v) => self.vertex_origin[self.graph.vertex_index(*v)].clone(),
            PointRef::EdgeInterior(e, x) => {
                PointRef::EdgeInterior(self.edge_origin[self.graph.edge_index(*e)].0, x.clone())
            }
        }
    }

    /// Parent edge and height range of a subgraph edge.
    pub fn edge_origin(&self, e: EdgeId) -> (EdgeId, &Height, &Height) {
        let (p, a, b) = &self.edge_origin[self.graph.edge_index(e)];
        (*p, a, b)
    }

    /// The subgraph point over a parent point, if the point is kept.
    pub fn lift(&self, p: &PointRef) -> Option<PointRef> {
        match p {
            PointRef::Vertex(v) => self.vertex_lift[self.parent.vertex_index(*v)].map(PointRef::Vertex),
            PointRef::EdgeInterior(e, x) => {
                let ps = &self.pieces[self.parent.edge_index(*e)];
                let k = ps.partition_point(|q| &q.hi < x);
                let q = ps.get(k).filter(|q| &q.lo <= x)?;
                Some(if x == &q.lo {
                    PointRef::Vertex(q.lo_v)
                } else if x == &q.hi {
                    PointRef::Vertex(q.hi_v)
                } else {
                    PointRef::EdgeInterior(q.edge.unwrap(), x.clone())
                })
            }
        }
    }

    pub fn contains(&self, p: &PointRef) -> bool {
        self.lift(p).is_some()
    }

    /// The subgraph edge covering heights `[lo, hi]` (`lo < hi`) of a parent edge.
    pub fn lift_edge(&self, e: EdgeId, lo: &Height, hi: &Height) -> Option<EdgeId> {
        let ps = &self.pieces[self.parent.edge_index(e)];
        let k = ps.partition_point(|q| &q.hi < hi);
        ps.get(k).filter(|q| &q.lo <= lo).and_then(|q| q.edge)
    }

    /// Closed height intervals kept on a parent edge.
    pub fn kept_on_edge(&self, e: EdgeId) -> Vec<(Height, Height)> {
        self.pieces[self.parent.edge_index(e)].iter().map(|q| (q.lo.clone(), q.hi.clone())).collect()
    }

    pub fn keeps_vertex(&self, v: VertexId) -> bool {
        self.vertex_lift[self.parent.vertex_index(v)].is_some()
    }

    /// The inclusion of this subgraph into its parent.
    pub fn inclusion(&self) -> ReebMorphism {
        let vertex_map = self.vertex_origin.clone();
        let edge_map = self.edge_origin.iter().map(|(e, _, _)| vec![*e]).collect();
        ReebMorphism::from_parts(self.graph.clone(), self.parent.clone(), vertex_map, edge_map)
    }

    /// The intersection of two subgraphs of the same parent.
    pub fn intersect(&self, other: &Subgraph) -> Subgraph {
        let g = &self.parent;
        let keep = (0..g.vertex_count()).map(|vi| self.vertex_lift[vi].is_some() && other.vertex_lift[vi].is_some()).collect();
        let intervals = (0..g.edge_count())
            .map(|ei| {
                let mut out = Vec::new();
                for p in &self.pieces[ei] {
                    for q in &other.pieces[ei] {
                        let a = p.lo.max_of(&q.lo);
                        let b = p.hi.min_of(&q.hi);
                        if a <= b {
                            out.push((a.clone(), b.clone()));
                        }
                    }
                }
                out
            })
            .collect();
        Subgraph::build(g.clone(), keep, intervals)
    }
}

/// The image of a morphism, as a subgraph of its codomain.
pub fn image_subgraph(m: &ReebMorphism) -> Subgraph {
    let q = m.codomain();
    let mut keep = vec![false; q.vertex_count()];
    let mut intervals: Vec<Vec<(Height, Height)>> = vec![Vec::new(); q.edge_count()];
    for p in m.vertex_map() {
        match p {
            PointRef::Vertex(v) => keep[q.vertex_index(*v)] = true,
            PointRef::EdgeInterior(e, x) => intervals[q.edge_index(*e)].push((x.clone(), x.clone())),
        }
    }
    let d = m.domain();
    for ei in 0..d.edge_count() {
        let (lo, hi) = d.span_at(ei);
        for s in m.path_between(ei, lo, hi) {
            let (a, b) = q.span(s);
            intervals[q.edge_index(s)].push((a.max_of(lo).clone(), b.min_of(hi).clone()));
        }
    }
    Subgraph::build(q.clone(), keep, intervals)
}

/// Restricts `m: P → Q` to a map `A → B` between subgraphs `A ⊆ P`, `B ⊆ Q`.
pub fn restrict(m: &ReebMorphism, from: &Subgraph, to: &Subgraph) -> Result<ReebMorphism, MorphismError> {
    let p = &*from.parent;
    let q = &*to.parent;
    debug_assert!(**m.domain() == *p && **m.codomain() == *q);
    let vertex_map = from
        .graph
        .vertices()
        .iter()
        .map(|v| to.lift(&m.eval(&from.lower(&PointRef::Vertex(v.id)))).ok_or(MorphismError::LeavesTarget))
        .collect::<Result<Vec<_>, _>>()?;
    let mut edge_map = Vec::with_capacity(from.graph.edge_count());
    for (e, lo, hi) in &from.edge_origin {
        let steps = m.path_between(p.edge_index(*e), lo, hi);
        let mut path = Vec::with_capacity(steps.len());
        for s in steps {
            let (a, b) = q.span(s);
            let piece = to.lift_edge(s, a.max_of(lo), b.min_of(hi)).ok_or(MorphismError::LeavesTarget)?;
            path.push(piece);
        }
        edge_map.push(path);
    }
    Ok(ReebMorphism::from_parts(from.graph.clone(), to.graph.clone(), vertex_map, edge_map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::h;

    #[test]
    fn build_and_lift() {
        let g = Arc::new(ReebGraph::from_heights(vec![h(0, 1), h(4, 1), h(6, 1)], &[(0, 1), (1, 2)]).unwrap());
        let sub = Subgraph::build(
            g.clone(),
            vec![false; 3],
            vec![vec![(h(1, 1), h(2, 1)), (h(3, 1), h(4, 1))], vec![(h(5, 1), h(5, 1))]],
        );
        // kept: vertex 1 (reached by [3,4]); new points 1, 2, 3 on edge 0; isolated point 5 on edge 1
        assert_eq!(sub.graph.vertex_count(), 5);
        assert_eq!(sub.graph.edge_count(), 2);
        assert_eq!(sub.lift(&PointRef::EdgeInterior(EdgeId(0), h(5, 2))), None);
        assert_eq!(
            sub.lift(&PointRef::EdgeInterior(EdgeId(0), h(7, 2))),
            Some(PointRef::EdgeInterior(EdgeId(1), h(7, 2)))
        );
        assert_eq!(sub.lift(&PointRef::Vertex(VertexId(1))), Some(PointRef::Vertex(VertexId(0))));
        assert!(sub.lift(&PointRef::EdgeInterior(EdgeId(1), h(5, 1))).is_some());
        assert_eq!(sub.lift_edge(EdgeId(0), &h(3, 2), &h(2, 1)), Some(EdgeId(0)));
        assert!(sub.inclusion().is_valid());
        let whole = Subgraph::whole(g.clone());
        assert!(*whole.intersect(&sub).graph == *sub.graph);
    }
}
