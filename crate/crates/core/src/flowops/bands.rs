use std::sync::Arc;

use crate::height::Height;
use crate::reeb::ReebGraph;

use super::level::{component_map, FlowLevel, FlowParams};
use super::smooth::{smooth_arc, Element, FlowError, SmoothResult};
use super::subgraph::{image_subgraph, Subgraph};
use super::truncate::truncate_arc;

/// `S_ε^τ(G)`: the truncation of the smoothing.
pub fn truncated_smooth(g: &ReebGraph, p: &FlowParams) -> Result<ReebGraph, FlowError> {
    let s = smooth_arc(Arc::new(g.clone()), &p.eps)?;
    let t = truncate_arc(s.graph, &p.tau)?;
    Ok(Arc::unwrap_or_clone(t.graph))
}

/// The image of `η: S_{ε−τ}(G) → S_ε(G)`, as a subgraph of `S_ε(G)`.
pub fn backward_view_sub(g: Arc<ReebGraph>, p: &FlowParams) -> Result<Subgraph, FlowError> {
    if p.tau > p.eps {
        return Err(FlowError::TauExceedsEpsilon);
    }
    let from = FlowLevel::new(g.clone(), FlowParams::new(&p.eps - &p.tau, Height::zero())?)?;
    let to = FlowLevel::new(g, FlowParams::new(p.eps.clone(), Height::zero())?)?;
    let eta = component_map(&from, &to).expect("untruncated target");
    Ok(image_subgraph(&eta))
}

pub fn backward_view(g: &ReebGraph, p: &FlowParams) -> Result<ReebGraph, FlowError> {
    Ok(Arc::unwrap_or_clone(backward_view_sub(Arc::new(g.clone()), p)?.graph))
}

/// The points of `S_ε(G)` at height `c` whose component meets `f⁻¹([c−hi, c−lo])`.
pub fn band_image(s: &SmoothResult, lo: &Height, hi: &Height) -> Result<Subgraph, FlowError> {
    let eps = &s.eps;
    if lo > hi || lo < &-eps || hi > eps {
        return Err(FlowError::BandOutOfRange);
    }
    let g = s.input();
    let out = &s.graph;
    let keep = out
        .vertices()
        .iter()
        .map(|v| {
            let (a, b) = (&v.height - hi, &v.height - lo);
            s.vertex_fiber(v.id).iter().any(|x| match *x {
                Element::Vertex(u) => {
                    let f = g.height(u);
                    &a <= f && f <= &b
                }
                Element::Edge(e) => {
                    let (fu, fw) = g.span(e);
                    fu <= &b && fw >= &a
                }
            })
        })
        .collect();
    let intervals = out
        .edges()
        .iter()
        .map(|e| {
            let (ca, cb) = out.span(e.id);
            s.edge_fiber(e.id)
                .iter()
                .filter_map(|x| {
                    let (x0, x1) = match *x {
                        Element::Vertex(u) => (g.height(u) + lo, g.height(u) + hi),
                        Element::Edge(f) => {
                            let (fu, fw) = g.span(f);
                            (fu + lo, fw + hi)
                        }
                    };
                    let (a, b) = (x0.max_of(ca).clone(), x1.min_of(cb).clone());
                    (a <= b).then_some((a, b))
                })
                .collect()
        })
        .collect();
    Ok(Subgraph::build(s.graph.clone(), keep, intervals))
}

/// `q(G × [τ−ε, ε]) ∩ q(G × [−ε, ε−τ])` inside `S_ε(G)`, for `0 ≤ τ ≤ 2ε`.
pub fn band_intersection(s: &SmoothResult, tau: &Height) -> Result<Subgraph, FlowError> {
    let eps = &s.eps;
    let upper = band_image(s, &(tau - eps), eps)?;
    let lower = band_image(s, &-eps, &(eps - tau))?;
    Ok(upper.intersect(&lower))
}
