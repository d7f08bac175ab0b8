use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::height::Height;
use crate::morphisms::{MorphismError, ReebMorphism};
use crate::reeb::{EdgeId, PointRef, ReebGraph};

use super::smooth::{smooth_arc, Element, FlowError, SmoothResult};
use super::truncate::{truncate_arc, TruncationResult};

/// Smoothing and truncation parameters `(ε, τ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FlowParams {
    pub eps: Height,
    pub tau: Height,
}

impl FlowParams {
    pub fn new(eps: Height, tau: Height) -> Result<FlowParams, FlowError> {
        if eps.is_negative() {
            return Err(FlowError::NegativeEpsilon);
        }
        if tau.is_negative() {
            return Err(FlowError::NegativeTau);
        }
        Ok(FlowParams { eps, tau })
    }

    /// `(ε, m·ε)` for a slope `0 ≤ m ≤ 1`.
    pub fn slope(eps: Height, m: &Height) -> Result<FlowParams, FlowError> {
        if m.is_negative() || m > &Height::one() {
            return Err(FlowError::SlopeOutOfRange);
        }
        let tau = &eps * m;
        FlowParams::new(eps, tau)
    }

    pub fn zero() -> FlowParams {
        FlowParams { eps: Height::zero(), tau: Height::zero() }
    }
}

/// The graph `S_ε^τ(G)` together with the smoothing it was cut from.
///
/// At `ε = 0` no smoothing is built: the level is cut directly from `G`, so that maps out of
/// `S_0^0(G)` are maps out of `G` itself.
#[derive(Clone, Debug)]
pub struct FlowLevel {
    pub params: FlowParams,
    base: Arc<ReebGraph>,
    smoothing: Option<Arc<SmoothResult>>,
    pub truncation: TruncationResult,
}

impl FlowLevel {
    pub fn new(base: Arc<ReebGraph>, params: FlowParams) -> Result<FlowLevel, FlowError> {
        let smoothing = if params.eps.is_zero() {
            None
        } else {
            Some(Arc::new(smooth_arc(base.clone(), &params.eps)?))
        };
        FlowLevel::with_smoothing(base, params, smoothing)
    }

    fn with_smoothing(
        base: Arc<ReebGraph>,
        params: FlowParams,
        smoothing: Option<Arc<SmoothResult>>,
    ) -> Result<FlowLevel, FlowError> {
        let parent = smoothing.as_ref().map(|s| s.graph.clone()).unwrap_or_else(|| base.clone());
        let truncation = truncate_arc(parent, &params.tau)?;
        Ok(FlowLevel { params, base, smoothing, truncation })
    }

    pub fn graph(&self) -> &Arc<ReebGraph> {
        &self.truncation.graph
    }

    pub fn base(&self) -> &Arc<ReebGraph> {
        &self.base
    }

    pub fn smoothing(&self) -> Option<&SmoothResult> {
        self.smoothing.as_deref()
    }

    /// The graph the level is truncated from.
    pub fn parent(&self) -> &Arc<ReebGraph> {
        self.truncation.sub.parent()
    }

    /// An input element in the interlevel component represented by a parent point.
    pub fn parent_representative(&self, p: &PointRef) -> Element {
        match &self.smoothing {
            Some(s) => s.fiber(p)[0],
            None => match p {
                PointRef::Vertex(v) => Element::Vertex(*v),
                PointRef::EdgeInterior(e, _) => Element::Edge(*e),
            },
        }
    }

    /// An input element in the interlevel component represented by a point of the level.
    pub fn representative(&self, p: &PointRef) -> Element {
        self.parent_representative(&self.truncation.sub.lower(p))
    }

    /// A point of the input graph lying in the component represented by `p`; its height is
    /// within `ε` of the height of `p`.
    pub fn witness_point(&self, p: &PointRef) -> PointRef {
        let c = self.graph().point_height(p);
        match self.representative(p) {
            Element::Vertex(v) => PointRef::Vertex(v),
            Element::Edge(e) => {
                let (a, b) = self.base.span(e);
                let x = c.max_of(a).min_of(b).clone();
                self.base.point_on_edge(e, &x)
            }
        }
    }

    /// The parent point at height `c` whose component contains `x`.
    pub fn locate_parent(&self, c: &Height, x: Element) -> Option<PointRef> {
        match &self.smoothing {
            Some(s) => s.locate(c, x),
            None => match x {
                Element::Vertex(v) => (self.base.height(v) == c).then_some(PointRef::Vertex(v)),
                Element::Edge(e) => {
                    let (a, b) = self.base.span(e);
                    (a < c && c < b).then(|| PointRef::EdgeInterior(e, c.clone()))
                }
            },
        }
    }

    /// The point of this level at height `c` whose component contains `x`, if it survives truncation.
    pub fn locate(&self, c: &Height, x: Element) -> Option<PointRef> {
        self.locate_parent(c, x).and_then(|p| self.truncation.sub.lift(&p))
    }

    /// Parent edges followed by the component of `x` over heights `(lo, hi)`.
    pub fn follow_parent(&self, x: Element, lo: &Height, hi: &Height) -> Vec<EdgeId> {
        match &self.smoothing {
            Some(s) => s.follow(x, lo, hi),
            None => match x {
                Element::Edge(e) => vec![e],
                Element::Vertex(_) => Vec::new(),
            },
        }
    }
}

/// The map `S_{ε₁}^{τ₁}(G) → S_{ε₂}^{τ₂}(G)` sending a point to the point representing the
/// interlevel component that contains its own component, for `ε₁ ≤ ε₂`.
///
/// Fails with `LeavesTarget` when some image point is cut away by the target truncation.
pub fn component_map(from: &FlowLevel, to: &FlowLevel) -> Result<ReebMorphism, MorphismError> {
    debug_assert!(from.params.eps <= to.params.eps);
    let dom = from.graph();
    let vertex_map = dom
        .vertices()
        .iter()
        .map(|v| {
            let x = from.representative(&PointRef::Vertex(v.id));
            to.locate(&v.height, x).ok_or(MorphismError::LeavesTarget)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let target_parent = to.parent();
    let mut edge_map = Vec::with_capacity(dom.edge_count());
    for e in dom.edges() {
        let (pe, lo, hi) = from.truncation.sub.edge_origin(e.id);
        let x = from.parent_representative(&PointRef::EdgeInterior(pe, lo.clone()));
        let steps = to.follow_parent(x, lo, hi);
        let mut path = Vec::with_capacity(steps.len());
        for s in steps {
            let (a, b) = target_parent.span(s);
            let (a, b) = (a.max_of(lo), b.min_of(hi));
            if a >= b {
                continue;
            }
            path.push(to.truncation.sub.lift_edge(s, a, b).ok_or(MorphismError::LeavesTarget)?);
        }
        edge_map.push(path);
    }
    Ok(ReebMorphism::from_parts(dom.clone(), to.graph().clone(), vertex_map, edge_map))
}

/// Memoized flow levels of one graph, shared across threads.
#[derive(Debug)]
pub struct FlowFamily {
    base: Arc<ReebGraph>,
    smoothings: Mutex<HashMap<Height, Arc<SmoothResult>>>,
    levels: Mutex<HashMap<FlowParams, Arc<FlowLevel>>>,
}

impl FlowFamily {
    pub fn new(base: Arc<ReebGraph>) -> FlowFamily {
        FlowFamily { base, smoothings: Mutex::new(HashMap::new()), levels: Mutex::new(HashMap::new()) }
    }

    pub fn base(&self) -> &Arc<ReebGraph> {
        &self.base
    }

    pub fn smoothing(&self, eps: &Height) -> Result<Arc<SmoothResult>, FlowError> {
        if let Some(s) = self.smoothings.lock().unwrap().get(eps) {
            return Ok(s.clone());
        }
        let s = Arc::new(smooth_arc(self.base.clone(), eps)?);
        Ok(self.smoothings.lock().unwrap().entry(eps.clone()).or_insert(s).clone())
    }

    pub fn level(&self, params: &FlowParams) -> Result<Arc<FlowLevel>, FlowError> {
        if let Some(l) = self.levels.lock().unwrap().get(params) {
            return Ok(l.clone());
        }
        let smoothing = if params.eps.is_zero() { None } else { Some(self.smoothing(&params.eps)?) };
        let level = Arc::new(FlowLevel::with_smoothing(self.base.clone(), params.clone(), smoothing)?);
        Ok(self.levels.lock().unwrap().entry(params.clone()).or_insert(level).clone())
    }
}
