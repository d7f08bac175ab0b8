use std::sync::Arc;

use serde::Serialize;

use crate::height::Height;
use crate::reeb::{reach_extremes, EdgeId, ReebGraph, VertexId};

use super::smooth::FlowError;
use super::subgraph::Subgraph;

/// Points removed by a truncation: whole vertices plus open height ranges inside edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RemovedSet {
    pub vertices: Vec<VertexId>,
    /// `(edge, lo, hi)`: the interior points of `edge` with height in the open range `(lo, hi)`.
    pub edge_segments: Vec<(EdgeId, Height, Height)>,
}

#[derive(Clone, Debug)]
pub struct TruncationResult {
    pub graph: Arc<ReebGraph>,
    pub sub: Subgraph,
    /// Points without an up-path of height τ.
    pub removed_up: RemovedSet,
    /// Points without a down-path of height τ.
    pub removed_down: RemovedSet,
    pub tau: Height,
}

pub fn truncate(g: &ReebGraph, tau: &Height) -> Result<TruncationResult, FlowError> {
    truncate_arc(Arc::new(g.clone()), tau)
}

/// Keeps the points having both an up-path and a down-path of height at least `tau`.
///
/// From an interior point at height `h` of an edge `(u, w)` the tallest up-path runs through
/// `w`, and the tallest down-path through `u`, so both budgets are linear in `h` and the kept
/// part of every edge is one closed interval.
pub fn truncate_arc(g: Arc<ReebGraph>, tau: &Height) -> Result<TruncationResult, FlowError> {
    if tau.is_negative() {
        return Err(FlowError::NegativeTau);
    }
    if tau.is_zero() {
        return Ok(TruncationResult {
            graph: g.clone(),
            sub: Subgraph::whole(g),
            removed_up: RemovedSet::default(),
            removed_down: RemovedSet::default(),
            tau: tau.clone(),
        });
    }
    let (top, bottom) = reach_extremes(&g);
    let n = g.vertex_count();
    let mut removed_up = RemovedSet::default();
    let mut removed_down = RemovedSet::default();
    let mut keep = vec![false; n];
    // highest kept height from above (top − τ) and lowest from below (bottom + τ), per vertex
    let ceil: Vec<Height> = (0..n).map(|v| g.height_at(top[v]) - tau).collect();
    let floor: Vec<Height> = (0..n).map(|v| g.height_at(bottom[v]) + tau).collect();
    for v in 0..n {
        let x = g.height_at(v);
        let up_ok = x <= &ceil[v];
        let down_ok = x >= &floor[v];
        keep[v] = up_ok && down_ok;
        if !up_ok {
            removed_up.vertices.push(g.vertices()[v].id);
        }
        if !down_ok {
            removed_down.vertices.push(g.vertices()[v].id);
        }
    }
    let mut intervals = Vec::with_capacity(g.edge_count());
    for ei in 0..g.edge_count() {
        let (u, w) = g.ends_at(ei);
        let (a, b) = g.span_at(ei);
        let e = g.edges()[ei].id;
        let lo = a.max_of(&floor[u]);
        let hi = b.min_of(&ceil[w]);
        if &ceil[w] < b {
            removed_up.edge_segments.push((e, a.max_of(&ceil[w]).clone(), b.clone()));
        }
        if &floor[u] > a {
            removed_down.edge_segments.push((e, a.clone(), b.min_of(&floor[u]).clone()));
        }
        intervals.push(if lo <= hi { vec![(lo.clone(), hi.clone())] } else { Vec::new() });
    }
    let sub = Subgraph::build(g, keep, intervals);
    Ok(TruncationResult { graph: sub.graph.clone(), sub, removed_up, removed_down, tau: tau.clone() })
}
