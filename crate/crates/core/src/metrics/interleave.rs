//! Interleavings along the truncated smoothing flow: verification and exhaustive search.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::flowops::{component_map, FlowError, FlowFamily, FlowLevel, FlowParams};
use crate::height::Height;
use crate::morphisms::{
    compose, equal_maps, first_difference, flow_functor, Location, MorphismError, MorphismViolation, ReebMorphism,
};
use crate::reeb::{EdgeId, PointRef, ReebGraph};

pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

/// `φ: G → S_ε^{mε}(H)` and `ψ: H → S_ε^{mε}(G)`.
#[derive(Clone, Debug)]
pub struct InterleavingWitness {
    pub eps: Height,
    pub m: Height,
    pub phi: ReebMorphism,
    pub psi: ReebMorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    G,
    H,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::G => "G",
            Side::H => "H",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InterleavingFailure {
    #[error("need eps >= 0 and 0 <= m <= 1")]
    BadParameters,
    #[error("map out of {0} has the wrong domain or codomain")]
    WrongShape(Side),
    #[error("map out of {0} is not a valid morphism: {1:?}")]
    InvalidMap(Side, Vec<MorphismViolation>),
    #[error("functor action on the map into {0} failed: {1}")]
    Functor(Side, MorphismError),
    #[error("triangle at {side} fails at {location}")]
    DiagramFails { side: Side, location: Location },
}

/// The levels and coherence maps of one interleaving diagram.
pub struct Diagram {
    pub eps: Height,
    pub m: Height,
    fg: FlowFamily,
    fh: FlowFamily,
    lg1: Arc<FlowLevel>,
    lh1: Arc<FlowLevel>,
    lg2: Arc<FlowLevel>,
    lh2: Arc<FlowLevel>,
    rho_g: ReebMorphism,
    rho_h: ReebMorphism,
}

fn flow_err(_: FlowError) -> InterleavingFailure {
    InterleavingFailure::BadParameters
}

impl Diagram {
    pub fn new(g: Arc<ReebGraph>, h: Arc<ReebGraph>, eps: &Height, m: &Height) -> Result<Diagram, InterleavingFailure> {
        if eps.is_negative() || m.is_negative() || m > &Height::one() {
            return Err(InterleavingFailure::BadParameters);
        }
        let fg = FlowFamily::new(g);
        let fh = FlowFamily::new(h);
        let one = FlowParams::slope(eps.clone(), m).map_err(flow_err)?;
        let two = FlowParams::slope(eps + eps, m).map_err(flow_err)?;
        let zero = FlowParams::zero();
        let lg1 = fg.level(&one).map_err(flow_err)?;
        let lh1 = fh.level(&one).map_err(flow_err)?;
        let lg2 = fg.level(&two).map_err(flow_err)?;
        let lh2 = fh.level(&two).map_err(flow_err)?;
        // the flow's coherence map from 0 to 2ε: η when m = 0, ρ otherwise, both built the same way
        let rho_g = component_map(&*fg.level(&zero).map_err(flow_err)?, &lg2)
            .map_err(|e| InterleavingFailure::Functor(Side::G, e))?;
        let rho_h = component_map(&*fh.level(&zero).map_err(flow_err)?, &lh2)
            .map_err(|e| InterleavingFailure::Functor(Side::H, e))?;
        Ok(Diagram { eps: eps.clone(), m: m.clone(), fg, fh, lg1, lh1, lg2, lh2, rho_g, rho_h })
    }

    pub fn g(&self) -> &Arc<ReebGraph> {
        self.fg.base()
    }

    pub fn h(&self) -> &Arc<ReebGraph> {
        self.fh.base()
    }

    /// `S_ε^{mε}(G)`, the codomain of `ψ`.
    pub fn g_level(&self) -> &Arc<FlowLevel> {
        &self.lg1
    }

    /// `S_ε^{mε}(H)`, the codomain of `φ`.
    pub fn h_level(&self) -> &Arc<FlowLevel> {
        &self.lh1
    }

    /// `S_ε^{mε}[ψ]: S_ε^{mε}(H) → S_{2ε}^{2mε}(G)`.
    pub fn lift_psi(&self, psi: &ReebMorphism) -> Result<ReebMorphism, InterleavingFailure> {
        flow_functor(psi, &self.lh1, &self.lg1, &self.lg2).map_err(|e| InterleavingFailure::Functor(Side::G, e))
    }

    /// `S_ε^{mε}[φ]: S_ε^{mε}(G) → S_{2ε}^{2mε}(H)`.
    pub fn lift_phi(&self, phi: &ReebMorphism) -> Result<ReebMorphism, InterleavingFailure> {
        flow_functor(phi, &self.lg1, &self.lh1, &self.lh2).map_err(|e| InterleavingFailure::Functor(Side::H, e))
    }

    fn triangle(&self, side: Side, first: &ReebMorphism, lifted: &ReebMorphism) -> Result<(), InterleavingFailure> {
        let rho = match side {
            Side::G => &self.rho_g,
            Side::H => &self.rho_h,
        };
        let c = compose(first, lifted).map_err(|e| InterleavingFailure::Functor(side, e))?;
        match equal_maps(&c, rho) {
            Ok(true) => Ok(()),
            Ok(false) => Err(InterleavingFailure::DiagramFails {
                side,
                location: first_difference(&c, rho).expect("maps differ"),
            }),
            Err(e) => Err(InterleavingFailure::Functor(side, e)),
        }
    }

    /// Checks both triangles: `S[ψ] ∘ φ = ρ_G` and `S[φ] ∘ ψ = ρ_H`.
    pub fn check(&self, phi: &ReebMorphism, psi: &ReebMorphism) -> Result<(), InterleavingFailure> {
        let same = |a: &Arc<ReebGraph>, b: &Arc<ReebGraph>| Arc::ptr_eq(a, b) || **a == **b;
        if !same(phi.domain(), self.g()) || !same(phi.codomain(), self.lh1.graph()) {
            return Err(InterleavingFailure::WrongShape(Side::G));
        }
        if !same(psi.domain(), self.h()) || !same(psi.codomain(), self.lg1.graph()) {
            return Err(InterleavingFailure::WrongShape(Side::H));
        }
        for (side, m) in [(Side::G, phi), (Side::H, psi)] {
            let bad = m.verify();
            if !bad.is_empty() {
                return Err(InterleavingFailure::InvalidMap(side, bad));
            }
        }
        self.triangle(Side::G, phi, &self.lift_psi(psi)?)?;
        self.triangle(Side::H, psi, &self.lift_phi(phi)?)
    }
}

pub fn verify_interleaving(
    g: &Arc<ReebGraph>,
    h: &Arc<ReebGraph>,
    w: &InterleavingWitness,
) -> Result<(), InterleavingFailure> {
    Diagram::new(g.clone(), h.clone(), &w.eps, &w.m)?.check(&w.phi, &w.psi)
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(InterleavingWitness),
    NotFound,
    Exhausted,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&InterleavingWitness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Points of `g` at height `c`: vertices first, then edge interiors, in position order.
pub fn points_at(g: &ReebGraph, c: &Height) -> Vec<PointRef> {
    let mut out: Vec<PointRef> = g.vertices().iter().filter(|v| &v.height == c).map(|v| PointRef::Vertex(v.id)).collect();
    for (ei, e) in g.edges().iter().enumerate() {
        let (a, b) = g.span_at(ei);
        if a < c && c < b {
            out.push(PointRef::EdgeInterior(e.id, c.clone()));
        }
    }
    out
}

/// All monotone edge paths of `g` from `p` up to `q`.
pub fn monotone_paths(g: &ReebGraph, p: &PointRef, q: &PointRef) -> Vec<Vec<EdgeId>> {
    fn dfs(g: &ReebGraph, x: usize, q: &PointRef, b: &Height, path: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
        for &ei in g.incident_at(x) {
            let (lo, top) = g.ends_at(ei);
            if lo != x {
                continue;
            }
            let e = g.edges()[ei].id;
            path.push(e);
            match q {
                PointRef::EdgeInterior(t, _) if *t == e => out.push(path.clone()),
                PointRef::Vertex(v) if g.vertices()[top].id == *v => out.push(path.clone()),
                _ => {
                    if g.height_at(top) < b {
                        dfs(g, top, q, b, path, out);
                    }
                }
            }
            path.pop();
        }
    }
    let b = g.point_height(q);
    if g.point_height(p) >= b {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    match p {
        PointRef::EdgeInterior(s, _) => {
            let si = g.edge_index(*s);
            let top = g.ends_at(si).1;
            path.push(*s);
            match q {
                PointRef::EdgeInterior(t, _) if t == s => out.push(path),
                PointRef::Vertex(v) if g.vertices()[top].id == *v => out.push(path),
                _ => {
                    if g.height_at(top) < &b {
                        dfs(g, top, q, &b, &mut path, &mut out);
                    }
                }
            }
        }
        PointRef::Vertex(v) => dfs(g, g.vertex_index(*v), q, &b, &mut path, &mut out),
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Walk {
    Stopped,
    Done,
    Exhausted,
}

/// Enumerates the morphisms `dom → cod` with vertex images drawn from `cands` and edge paths
/// accepted by `edge_ok`, in lexicographic order of choices.
struct MapEnumerator<'a> {
    dom: &'a Arc<ReebGraph>,
    cod: &'a Arc<ReebGraph>,
    cands: Vec<Vec<PointRef>>,
    edge_ok: &'a dyn Fn(usize, &[EdgeId]) -> bool,
    // edges whose later endpoint (by position) is each vertex
    closing: Vec<Vec<usize>>,
    budget: u64,
    used: u64,
}

impl<'a> MapEnumerator<'a> {
    fn new(
        dom: &'a Arc<ReebGraph>,
        cod: &'a Arc<ReebGraph>,
        cands: Vec<Vec<PointRef>>,
        edge_ok: &'a dyn Fn(usize, &[EdgeId]) -> bool,
        budget: u64,
    ) -> Self {
        let mut closing = vec![Vec::new(); dom.vertex_count()];
        for ei in 0..dom.edge_count() {
            let (a, b) = dom.ends_at(ei);
            closing[a.max(b)].push(ei);
        }
        MapEnumerator { dom, cod, cands, edge_ok, closing, budget, used: 0 }
    }

    fn tick(&mut self) -> bool {
        if self.used >= self.budget {
            return false;
        }
        self.used += 1;
        true
    }

    fn run(&mut self, visit: &mut dyn FnMut(ReebMorphism) -> bool) -> Walk {
        let mut vmap = Vec::with_capacity(self.dom.vertex_count());
        let mut options: Vec<Vec<Vec<EdgeId>>> = vec![Vec::new(); self.dom.edge_count()];
        self.vertices(0, &mut vmap, &mut options, visit)
    }

    fn vertices(
        &mut self,
        k: usize,
        vmap: &mut Vec<PointRef>,
        options: &mut Vec<Vec<Vec<EdgeId>>>,
        visit: &mut dyn FnMut(ReebMorphism) -> bool,
    ) -> Walk {
        if k == self.dom.vertex_count() {
            let mut emap = Vec::with_capacity(self.dom.edge_count());
            return self.edges(0, vmap, options, &mut emap, visit);
        }
        for i in 0..self.cands[k].len() {
            if !self.tick() {
                return Walk::Exhausted;
            }
            vmap.push(self.cands[k][i].clone());
            let mut feasible = true;
            for j in 0..self.closing[k].len() {
                let ei = self.closing[k][j];
                let (a, b) = self.dom.ends_at(ei);
                let paths: Vec<Vec<EdgeId>> = monotone_paths(self.cod, &vmap[a], &vmap[b])
                    .into_iter()
                    .filter(|p| (self.edge_ok)(ei, p))
                    .collect();
                if paths.is_empty() {
                    feasible = false;
                    break;
                }
                options[ei] = paths;
            }
            if feasible {
                match self.vertices(k + 1, vmap, options, visit) {
                    Walk::Done => {}
                    w => return w,
                }
            }
            vmap.pop();
        }
        Walk::Done
    }

    fn edges(
        &mut self,
        j: usize,
        vmap: &[PointRef],
        options: &[Vec<Vec<EdgeId>>],
        emap: &mut Vec<Vec<EdgeId>>,
        visit: &mut dyn FnMut(ReebMorphism) -> bool,
    ) -> Walk {
        if j == options.len() {
            if !self.tick() {
                return Walk::Exhausted;
            }
            let m = ReebMorphism::from_parts(self.dom.clone(), self.cod.clone(), vmap.to_vec(), emap.clone());
            return if visit(m) { Walk::Stopped } else { Walk::Done };
        }
        for p in &options[j] {
            emap.push(p.clone());
            let w = self.edges(j + 1, vmap, options, emap, visit);
            emap.pop();
            if w != Walk::Done {
                return w;
            }
        }
        Walk::Done
    }
}

fn all_points(dom: &ReebGraph, cod: &ReebGraph) -> Vec<Vec<PointRef>> {
    dom.vertices().iter().map(|v| points_at(cod, &v.height)).collect()
}

enum Branch {
    Found(ReebMorphism),
    NotFound(u64),
    Exhausted,
}

// Given ψ, looks for φ with S[ψ] ∘ φ = ρ_G, then checks the other triangle.
fn complete_psi(d: &Diagram, psi: &ReebMorphism, budget: u64) -> Branch {
    let Ok(lifted) = d.lift_psi(psi) else {
        return Branch::NotFound(1);
    };
    let g = d.g();
    let target = d.h_level().graph();
    let cands: Vec<Vec<PointRef>> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(vi, v)| {
            let want = &d.rho_g.vertex_map()[vi];
            points_at(target, &v.height).into_iter().filter(|p| &lifted.eval(p) == want).collect()
        })
        .collect();
    let edge_ok = |ei: usize, path: &[EdgeId]| {
        let (a, b) = g.span_at(ei);
        lifted.image_of_path(path, a, b) == d.rho_g.edge_map()[ei]
    };
    let mut en = MapEnumerator::new(g, target, cands, &edge_ok, budget);
    let mut found = None;
    let walk = en.run(&mut |phi| {
        let ok = d.lift_phi(&phi).is_ok_and(|l| d.triangle(Side::H, psi, &l).is_ok());
        if ok {
            found = Some(phi);
        }
        ok
    });
    match (walk, found) {
        (_, Some(phi)) => Branch::Found(phi),
        (Walk::Exhausted, None) => Branch::Exhausted,
        _ => Branch::NotFound(en.used.max(1)),
    }
}

const CHUNK: usize = 64;

/// Exhaustive search for an `ε`-interleaving along the slope-`m` flow.
///
/// Candidate maps `ψ: H → S_ε^{mε}(G)` are enumerated in a fixed order; for each, the maps `φ`
/// making the first triangle commute are enumerated with per-vertex and per-edge pruning, and
/// the second triangle is checked. Branches run in parallel in fixed-size chunks; the least
/// successful branch wins, so the result does not depend on scheduling.
pub fn search_interleaving(
    g: &Arc<ReebGraph>,
    h: &Arc<ReebGraph>,
    eps: &Height,
    m: &Height,
    budget: u64,
) -> Result<SearchOutcome, InterleavingFailure> {
    let d = Diagram::new(g.clone(), h.clone(), eps, m)?;
    let psis = {
        let always = |_: usize, _: &[EdgeId]| true;
        let target = d.g_level().graph();
        let mut en = MapEnumerator::new(h, target, all_points(h, target), &always, budget);
        let mut psis = Vec::new();
        if en.run(&mut |psi| {
            psis.push(psi);
            false
        }) == Walk::Exhausted
        {
            return Ok(SearchOutcome::Exhausted);
        }
        psis
    };
    let mut spent = psis.len() as u64;
    for chunk in psis.chunks(CHUNK) {
        if spent >= budget {
            return Ok(SearchOutcome::Exhausted);
        }
        let left = budget - spent;
        let results: Vec<Branch> = chunk.par_iter().map(|psi| complete_psi(&d, psi, left)).collect();
        let mut exhausted = false;
        for (psi, r) in chunk.iter().zip(results) {
            match r {
                Branch::Found(phi) => {
                    return Ok(SearchOutcome::Found(InterleavingWitness {
                        eps: eps.clone(),
                        m: m.clone(),
                        phi,
                        psi: psi.clone(),
                    }))
                }
                Branch::NotFound(cost) => spent = spent.saturating_add(cost),
                Branch::Exhausted => exhausted = true,
            }
        }
        if exhausted {
            return Ok(SearchOutcome::Exhausted);
        }
    }
    Ok(SearchOutcome::NotFound)
}
