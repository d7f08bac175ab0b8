//! Tailedness and safety of Reeb graphs.

use serde::Serialize;

use crate::height::{Bound, Height};
use crate::reeb::{component_labels, component_count, longest_up_down, reach_extremes, ReebGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ForkKind {
    Up,
    Down,
}

/// A fork and the height of the tallest path leaving it in the opposite direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForkBudget {
    pub vertex: VertexId,
    pub kind: ForkKind,
    pub available: Height,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailReport {
    /// The graph is `t`-tailed exactly for `t ≤ max_tailed`; infinite when there are no forks.
    pub max_tailed: Bound,
    /// `None` for the empty graph, which is weakly safe for no `s`.
    pub max_weak_safe: Option<Height>,
    pub max_safe: Option<Height>,
    /// Forks sorted by vertex id, down-forks before up-forks at the same vertex.
    pub forks: Vec<ForkBudget>,
}

pub fn tail_report(g: &ReebGraph) -> TailReport {
    let ud = longest_up_down(g);
    let mut forks = Vec::new();
    for vi in 0..g.vertex_count() {
        let (up, down) = g.up_down_at(vi);
        let id = g.vertices()[vi].id;
        if down.len() >= 2 {
            forks.push(ForkBudget { vertex: id, kind: ForkKind::Down, available: ud[vi].0.clone() });
        }
        if up.len() >= 2 {
            forks.push(ForkBudget { vertex: id, kind: ForkKind::Up, available: ud[vi].1.clone() });
        }
    }
    forks.sort_by_key(|f| (f.vertex, f.kind == ForkKind::Up));
    let max_tailed = forks
        .iter()
        .map(|f| Bound::Finite(f.available.clone()))
        .min()
        .unwrap_or(Bound::Infinite);
    let max_weak_safe = max_weak_safe(g, &ud);
    let max_safe = max_weak_safe.as_ref().map(|w| match &max_tailed {
        Bound::Finite(t) => t.min_of(w).clone(),
        Bound::Infinite => w.clone(),
    });
    TailReport { max_tailed, max_weak_safe, max_safe, forks }
}

// Per component, the best min(up, down) over vertices and the balance point of each edge.
fn max_weak_safe(g: &ReebGraph, ud: &[(Height, Height)]) -> Option<Height> {
    if g.is_empty() {
        return None;
    }
    let labels = component_labels(g);
    let mut best: Vec<Option<Height>> = vec![None; component_count(g)];
    let mut offer = |c: usize, x: Height| {
        if best[c].as_ref().is_none_or(|b| &x > b) {
            best[c] = Some(x);
        }
    };
    for (vi, (up, down)) in ud.iter().enumerate() {
        offer(labels[vi], up.min_of(down).clone());
    }
    let (top, bottom) = reach_extremes(g);
    let two = Height::int(2);
    for ei in 0..g.edge_count() {
        let (u, w) = g.ends_at(ei);
        let (a, b) = g.span_at(ei);
        let t = g.height_at(top[w]);
        let s = g.height_at(bottom[u]);
        let mid = (t + s) / &two;
        let x = mid.max_of(a).min_of(b).clone();
        offer(labels[u], (t - &x).min_of(&(&x - s)).clone());
    }
    best.into_iter().map(|b| b.expect("component has a vertex")).min()
}

pub fn is_tailed(g: &ReebGraph, t: &Height) -> bool {
    Bound::Finite(t.clone()) <= tail_report(g).max_tailed
}

pub fn is_weakly_safe(g: &ReebGraph, s: &Height) -> bool {
    tail_report(g).max_weak_safe.is_some_and(|w| s <= &w)
}

pub fn is_safe(g: &ReebGraph, s: &Height) -> bool {
    tail_report(g).max_safe.is_some_and(|w| s <= &w)
}
