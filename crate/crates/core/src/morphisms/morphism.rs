use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::height::Height;
use crate::reeb::{EdgeId, PointRef, ReebGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Location {
    Vertex(VertexId),
    Edge(EdgeId),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Vertex(v) => write!(f, "vertex {v}"),
            Location::Edge(e) => write!(f, "edge {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, thiserror::Error, Serialize)]
pub enum MorphismViolation {
    #[error("{0} is not mapped to a point of equal height")]
    NotFunctionPreserving(Location),
    #[error("{0}: image path does not start or end at the endpoint images")]
    Discontinuous(Location),
    #[error("edge {0}: image is not a monotone edge path")]
    NonMonotonePath(EdgeId),
    #[error("{0} is mapped to a point that is not in the codomain")]
    InvalidPoint(Location),
    #[error("map data does not cover the domain")]
    ShapeMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("codomain of the first map is not the domain of the second")]
    DomainMismatch,
    #[error("invalid morphism: {0:?}")]
    Invalid(Vec<MorphismViolation>),
    #[error("{kind} map needs {constraint}")]
    ParamsOutOfRange { kind: &'static str, constraint: &'static str },
    #[error("truncated domain is empty")]
    EmptyTruncatedDomain,
    #[error("image point leaves the target subgraph")]
    LeavesTarget,
}

/// A function-preserving piecewise-linear map, presented by vertex images and the monotone
/// edge paths traversed by each domain edge.
#[derive(Clone)]
pub struct ReebMorphism {
    domain: Arc<ReebGraph>,
    codomain: Arc<ReebGraph>,
    vertex_map: Vec<PointRef>,
    edge_map: Vec<Vec<EdgeId>>,
}

impl fmt::Debug for ReebMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReebMorphism")
            .field("vertex_map", &self.vertex_map)
            .field("edge_map", &self.edge_map)
            .finish()
    }
}

fn same_graph(a: &Arc<ReebGraph>, b: &Arc<ReebGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ReebMorphism {
    /// Assembles a morphism without checking it; see [`ReebMorphism::verify`].
    ///
    /// `vertex_map` and `edge_map` are indexed by position in `domain.vertices()` / `domain.edges()`.
    pub fn from_parts(
        domain: Arc<ReebGraph>,
        codomain: Arc<ReebGraph>,
        vertex_map: Vec<PointRef>,
        edge_map: Vec<Vec<EdgeId>>,
    ) -> ReebMorphism {
        ReebMorphism { domain, codomain, vertex_map, edge_map }
    }

    /// Assembles and verifies.
    pub fn new(
        domain: Arc<ReebGraph>,
        codomain: Arc<ReebGraph>,
        vertex_map: Vec<PointRef>,
        edge_map: Vec<Vec<EdgeId>>,
    ) -> Result<ReebMorphism, MorphismError> {
        let m = ReebMorphism::from_parts(domain, codomain, vertex_map, edge_map);
        let bad = m.verify();
        if bad.is_empty() {
            Ok(m)
        } else {
            Err(MorphismError::Invalid(bad))
        }
    }

    pub fn identity(g: Arc<ReebGraph>) -> ReebMorphism {
        let vertex_map = g.vertices().iter().map(|v| PointRef::Vertex(v.id)).collect();
        let edge_map = g.edges().iter().map(|e| vec![e.id]).collect();
        ReebMorphism { domain: g.clone(), codomain: g, vertex_map, edge_map }
    }

    pub fn domain(&self) -> &Arc<ReebGraph> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<ReebGraph> {
        &self.codomain
    }

    pub fn vertex_image(&self, v: VertexId) -> &PointRef {
        &self.vertex_map[self.domain.vertex_index(v)]
    }

    pub fn edge_path(&self, e: EdgeId) -> &[EdgeId] {
        &self.edge_map[self.domain.edge_index(e)]
    }

    pub fn vertex_map(&self) -> &[PointRef] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[Vec<EdgeId>] {
        &self.edge_map
    }

    /// Checks height preservation, continuity and monotonicity.
    pub fn verify(&self) -> Vec<MorphismViolation> {
        let (d, c) = (&*self.domain, &*self.codomain);
        if self.vertex_map.len() != d.vertex_count() || self.edge_map.len() != d.edge_count() {
            return vec![MorphismViolation::ShapeMismatch];
        }
        let mut out = Vec::new();
        for (vi, p) in self.vertex_map.iter().enumerate() {
            let v = d.vertices()[vi].id;
            if !c.contains_point(p) {
                out.push(MorphismViolation::InvalidPoint(Location::Vertex(v)));
            } else if &c.point_height(p) != d.height_at(vi) {
                out.push(MorphismViolation::NotFunctionPreserving(Location::Vertex(v)));
            }
        }
        for (ei, path) in self.edge_map.iter().enumerate() {
            let e = d.edges()[ei].id;
            if path.is_empty() || path.iter().any(|s| !c.has_edge(*s)) {
                out.push(MorphismViolation::NonMonotonePath(e));
                continue;
            }
            if path.windows(2).any(|w| c.high(w[0]) != c.low(w[1])) {
                out.push(MorphismViolation::NonMonotonePath(e));
                continue;
            }
            let (lo, hi) = d.ends_at(ei);
            let starts = match &self.vertex_map[lo] {
                PointRef::Vertex(x) => c.low(path[0]) == *x,
                PointRef::EdgeInterior(s, _) => *s == path[0],
            };
            let ends = match &self.vertex_map[hi] {
                PointRef::Vertex(x) => c.high(*path.last().unwrap()) == *x,
                PointRef::EdgeInterior(s, _) => s == path.last().unwrap(),
            };
            let ordered = c.point_height(&self.vertex_map[lo]) < c.point_height(&self.vertex_map[hi]);
            if !(starts && ends && ordered) {
                out.push(MorphismViolation::Discontinuous(Location::Edge(e)));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_empty()
    }

    /// Image of a domain point.
    pub fn eval(&self, p: &PointRef) -> PointRef {
        match p {
            PointRef::Vertex(v) => self.vertex_image(*v).clone(),
            PointRef::EdgeInterior(e, x) => self.eval_on_edge(self.domain.edge_index(*e), x),
        }
    }

    fn eval_on_edge(&self, ei: usize, x: &Height) -> PointRef {
        let c = &*self.codomain;
        let (_, top) = self.domain.span_at(ei);
        for s in &self.edge_map[ei] {
            let (_, shi) = c.span(*s);
            let hi = shi.min_of(top);
            if x < hi {
                return c.point_on_edge(*s, x);
            }
            if x == hi {
                return PointRef::Vertex(c.high(*s));
            }
        }
        panic!("height {x} outside the image path")
    }

    /// The codomain edges traversed by domain edge position `ei` over heights `[lo, hi]`, `lo < hi`.
    pub fn path_between(&self, ei: usize, lo: &Height, hi: &Height) -> Vec<EdgeId> {
        let c = &*self.codomain;
        let (bottom, top) = self.domain.span_at(ei);
        self.edge_map[ei]
            .iter()
            .filter(|s| {
                let (slo, shi) = c.span(**s);
                slo.max_of(bottom) < hi && shi.min_of(top) > lo
            })
            .copied()
            .collect()
    }

    /// The image path of a monotone domain path `path` restricted to heights `[a, b]`.
    pub fn image_of_path(&self, path: &[EdgeId], a: &Height, b: &Height) -> Vec<EdgeId> {
        let d = &*self.domain;
        let mut out: Vec<EdgeId> = Vec::new();
        for s in path {
            let (slo, shi) = d.span(*s);
            for c in self.path_between(d.edge_index(*s), slo.max_of(a), shi.min_of(b)) {
                if out.last() != Some(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Pointwise composition `g ∘ self`.
    pub fn then(&self, g: &ReebMorphism) -> Result<ReebMorphism, MorphismError> {
        compose(self, g)
    }
}

/// Composition: first `f`, then `g`.
pub fn compose(f: &ReebMorphism, g: &ReebMorphism) -> Result<ReebMorphism, MorphismError> {
    if !same_graph(&f.codomain, &g.domain) {
        return Err(MorphismError::DomainMismatch);
    }
    let vertex_map = f.vertex_map.iter().map(|p| g.eval(p)).collect();
    let edge_map = (0..f.domain.edge_count())
        .map(|ei| {
            let (a, b) = f.domain.span_at(ei);
            g.image_of_path(&f.edge_map[ei], a, b)
        })
        .collect();
    Ok(ReebMorphism { domain: f.domain.clone(), codomain: g.codomain.clone(), vertex_map, edge_map })
}

/// Exact equality of two maps with the same domain and codomain.
///
/// Paths are sequences of codomain edges between fixed endpoint images, so two presentations
/// of the same map over the same graphs coincide entry by entry.
pub fn equal_maps(a: &ReebMorphism, b: &ReebMorphism) -> Result<bool, MorphismError> {
    if !same_graph(&a.domain, &b.domain) || !same_graph(&a.codomain, &b.codomain) {
        return Err(MorphismError::DomainMismatch);
    }
    Ok(a.vertex_map == b.vertex_map && a.edge_map == b.edge_map)
}

/// First point of disagreement between two maps over the same graphs.
pub fn first_difference(a: &ReebMorphism, b: &ReebMorphism) -> Option<Location> {
    let d = &*a.domain;
    for (i, (p, q)) in a.vertex_map.iter().zip(&b.vertex_map).enumerate() {
        if p != q {
            return Some(Location::Vertex(d.vertices()[i].id));
        }
    }
    for (i, (p, q)) in a.edge_map.iter().zip(&b.edge_map).enumerate() {
        if p != q {
            return Some(Location::Edge(d.edges()[i].id));
        }
    }
    None
}

/// Builds a morphism from a pointwise rule.
///
/// Each domain edge is sampled at every codomain vertex height inside its span and at the
/// midpoints in between; between consecutive codomain vertex heights an image path stays
/// inside a single codomain edge, so these samples determine the path.
pub fn from_point_fn<E>(
    domain: Arc<ReebGraph>,
    codomain: Arc<ReebGraph>,
    mut f: impl FnMut(&PointRef) -> Result<PointRef, E>,
    mut bad_sample: impl FnMut() -> E,
) -> Result<ReebMorphism, E> {
    let levels = codomain.distinct_heights();
    let vertex_map: Vec<PointRef> = domain
        .vertices()
        .iter()
        .map(|v| f(&PointRef::Vertex(v.id)))
        .collect::<Result<_, E>>()?;
    let mut edge_map = Vec::with_capacity(domain.edge_count());
    for (ei, e) in domain.edges().iter().enumerate() {
        let (a, b) = domain.span_at(ei);
        let start = levels.partition_point(|x| x <= a);
        let end = levels.partition_point(|x| x < b);
        let mut cuts = Vec::with_capacity(end.saturating_sub(start) + 2);
        cuts.push(a.clone());
        cuts.extend(levels[start..end.max(start)].iter().cloned());
        cuts.push(b.clone());
        let mut path: Vec<EdgeId> = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            let mid = Height::midpoint(&w[0], &w[1]);
            match f(&PointRef::EdgeInterior(e.id, mid))? {
                PointRef::EdgeInterior(s, _) => {
                    if path.last() != Some(&s) {
                        path.push(s);
                    }
                }
                PointRef::Vertex(_) => return Err(bad_sample()),
            }
        }
        edge_map.push(path);
    }
    Ok(ReebMorphism { domain, codomain, vertex_map, edge_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::h;

    fn arc(g: ReebGraph) -> Arc<ReebGraph> {
        Arc::new(g)
    }

    fn cycle() -> Arc<ReebGraph> {
        arc(ReebGraph::from_heights(vec![h(0, 1), h(2, 1)], &[(0, 1), (0, 1)]).unwrap())
    }

    fn segment(a: i64, b: i64) -> Arc<ReebGraph> {
        arc(ReebGraph::from_heights(vec![Height::int(a), Height::int(b)], &[(0, 1)]).unwrap())
    }

    #[test]
    fn identity_verifies_and_composes() {
        let g = cycle();
        let id = ReebMorphism::identity(g.clone());
        assert!(id.is_valid());
        let c = compose(&id, &id).unwrap();
        assert!(equal_maps(&c, &id).unwrap());
    }

    #[test]
    fn height_violation_detected() {
        let g = segment(0, 2);
        let m = ReebMorphism::from_parts(
            g.clone(),
            g.clone(),
            vec![PointRef::Vertex(VertexId(1)), PointRef::Vertex(VertexId(1))],
            vec![vec![EdgeId(0)]],
        );
        let bad = m.verify();
        assert!(bad.contains(&MorphismViolation::NotFunctionPreserving(Location::Vertex(VertexId(0)))));
    }

    #[test]
    fn parallel_routing_differs() {
        let g = segment(0, 2);
        let c = cycle();
        let via = |e: u32| {
            ReebMorphism::new(
                g.clone(),
                c.clone(),
                vec![PointRef::Vertex(VertexId(0)), PointRef::Vertex(VertexId(1))],
                vec![vec![EdgeId(e)]],
            )
            .unwrap()
        };
        assert!(!equal_maps(&via(0), &via(1)).unwrap());
        assert_eq!(first_difference(&via(0), &via(1)), Some(Location::Edge(EdgeId(0))));
    }

    #[test]
    fn eval_and_compose_through_interior() {
        // [1,2] sits inside [0,3], which folds onto a cycle with a middle vertex.
        let small = segment(1, 2);
        let big = segment(0, 3);
        let inc = ReebMorphism::new(
            small.clone(),
            big.clone(),
            vec![
                PointRef::EdgeInterior(EdgeId(0), h(1, 1)),
                PointRef::EdgeInterior(EdgeId(0), h(2, 1)),
            ],
            vec![vec![EdgeId(0)]],
        )
        .unwrap();
        let target = arc(
            ReebGraph::from_heights(vec![h(0, 1), h(3, 2), h(3, 1)], &[(0, 1), (1, 2)]).unwrap(),
        );
        let proj = ReebMorphism::new(
            big.clone(),
            target.clone(),
            vec![PointRef::Vertex(VertexId(0)), PointRef::Vertex(VertexId(2))],
            vec![vec![EdgeId(0), EdgeId(1)]],
        )
        .unwrap();
        let both = compose(&inc, &proj).unwrap();
        assert!(both.is_valid());
        assert_eq!(both.edge_map()[0], vec![EdgeId(0), EdgeId(1)]);
        assert_eq!(both.eval(&PointRef::EdgeInterior(EdgeId(0), h(3, 2))), PointRef::Vertex(VertexId(1)));
        assert!(compose(&proj, &inc).is_err());
    }

    #[test]
    fn point_fn_builder_matches_explicit() {
        let big = segment(0, 3);
        let target = arc(
            ReebGraph::from_heights(vec![h(0, 1), h(3, 2), h(3, 1)], &[(0, 1), (1, 2)]).unwrap(),
        );
        let m = from_point_fn(
            big.clone(),
            target.clone(),
            |p| -> Result<PointRef, ()> {
                let x = big.point_height(p);
                Ok(if x < h(3, 2) {
                    target.point_on_edge(EdgeId(0), &x)
                } else {
                    target.point_on_edge(EdgeId(1), &x)
                })
            },
            || (),
        )
        .unwrap();
        assert!(m.is_valid());
        assert_eq!(m.edge_map()[0], vec![EdgeId(0), EdgeId(1)]);
    }
}
