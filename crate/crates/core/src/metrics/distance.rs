//! Certified brackets for the truncated interleaving distances, and witness transfer between slopes.

use std::sync::Arc;

use serde::Serialize;

use crate::flowops::{FlowLevel, FlowParams};
use crate::height::{Bound, Height};
use crate::morphisms::{compose, flow_map_between, FlowMapKind, MorphismError, ReebMorphism};
use crate::reeb::{image, Interval, ReebGraph};

use super::interleave::{search_interleaving, InterleavingFailure, InterleavingWitness, SearchOutcome};

/// Why the lower end of a bracket holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// Nothing beyond `d ≥ 0`.
    Trivial,
    /// The graphs have different numbers of components.
    ComponentMismatch { g: usize, h: usize },
    /// At slope 1 the component images must agree exactly.
    ImageMismatch,
    /// Images cannot be nested before the flow has widened them by `gap`.
    ImageGap { gap: Height },
    /// An exhaustive search found no interleaving at `eps`.
    SearchExhaustion { eps: Height },
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::Trivial => write!(f, "trivial"),
            Certificate::ComponentMismatch { g, h } => write!(f, "component mismatch ({g} vs {h})"),
            Certificate::ImageMismatch => write!(f, "image mismatch"),
            Certificate::ImageGap { gap } => write!(f, "image gap {gap}"),
            Certificate::SearchExhaustion { eps } => write!(f, "no interleaving at eps = {eps}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: Bound,
    pub certificate: Certificate,
    /// A known upper bound, when one follows from the images alone.
    pub upper_hint: Option<Height>,
}

fn interval_ends(iv: &Interval) -> (&Height, &Height) {
    match iv {
        Interval::Closed(a, b) => (a, b),
        Interval::Empty => unreachable!("components are nonempty"),
    }
}

// How far `i` must be widened on both sides to fit inside `j`.
fn widening(i: &Interval, j: &Interval) -> Height {
    let (a, b) = interval_ends(i);
    let (c, d) = interval_ends(j);
    let z = Height::zero();
    (c - a).max_of(&(b - d)).max_of(&z).clone()
}

fn one_sided(a: &[Interval], b: &[Interval]) -> Height {
    a.iter()
        .map(|i| b.iter().map(|j| widening(i, j)).min().expect("same component count"))
        .max()
        .unwrap_or_else(Height::zero)
}

pub fn lower_bounds(g: &ReebGraph, h: &ReebGraph, m: &Height) -> LowerBound {
    let (ig, _) = image(g);
    let (ih, _) = image(h);
    if m >= &Height::one() {
        let mut a = ig.clone();
        let mut b = ih.clone();
        a.sort_by(cmp_interval);
        b.sort_by(cmp_interval);
        if a != b {
            return LowerBound { value: Bound::Infinite, certificate: Certificate::ImageMismatch, upper_hint: None };
        }
        let hint = a.iter().map(|i| i.length()).max().unwrap_or_else(Height::zero);
        return LowerBound {
            value: Bound::Finite(Height::zero()),
            certificate: Certificate::Trivial,
            upper_hint: Some(hint),
        };
    }
    if ig.len() != ih.len() {
        return LowerBound {
            value: Bound::Infinite,
            certificate: Certificate::ComponentMismatch { g: ig.len(), h: ih.len() },
            upper_hint: None,
        };
    }
    let gap = one_sided(&ig, &ih).max_of(&one_sided(&ih, &ig)).clone();
    if gap.is_zero() {
        return LowerBound { value: Bound::Finite(gap), certificate: Certificate::Trivial, upper_hint: None };
    }
    let value = &gap / &(Height::one() - m);
    LowerBound { value: Bound::Finite(value), certificate: Certificate::ImageGap { gap }, upper_hint: None }
}

fn cmp_interval(a: &Interval, b: &Interval) -> std::cmp::Ordering {
    let (x, y) = interval_ends(a);
    let (u, v) = interval_ends(b);
    (x, y).cmp(&(u, v))
}

#[derive(Clone, Debug)]
pub struct DistanceBracket {
    pub m: Height,
    pub lo: Bound,
    pub hi: Bound,
    pub certificate: Certificate,
    /// An interleaving at `hi`, when `hi` is finite.
    pub witness: Option<InterleavingWitness>,
    pub searches: usize,
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum DistanceError {
    #[error("slope must lie in [0, 1]")]
    BadSlope,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("search budget exhausted; certified bracket [{}, {}]", .0.lo, .0.hi)]
    BudgetExceeded(Box<DistanceBracket>),
    #[error(transparent)]
    Interleaving(#[from] InterleavingFailure),
}

const MAX_DOUBLINGS: usize = 64;

/// Brackets `d_I^m(g, h)` to within `tol`, or certifies it infinite.
///
/// The lower end starts at [`lower_bounds`] and rises with every exhaustive negative search;
/// the upper end is the smallest `ε` at which a witness was found. New probes are the
/// simplest rationals in the middle third of the bracket.
pub fn estimate_distance(
    g: &Arc<ReebGraph>,
    h: &Arc<ReebGraph>,
    m: &Height,
    tol: &Height,
    budget: u64,
) -> Result<DistanceBracket, DistanceError> {
    if m.is_negative() || m > &Height::one() {
        return Err(DistanceError::BadSlope);
    }
    if !tol.is_positive() {
        return Err(DistanceError::BadTolerance);
    }
    let lb = lower_bounds(g, h, m);
    let mut br = DistanceBracket {
        m: m.clone(),
        lo: lb.value.clone(),
        hi: Bound::Infinite,
        certificate: lb.certificate.clone(),
        witness: None,
        searches: 0,
    };
    let Bound::Finite(mut lo) = lb.value else {
        return Ok(br);
    };
    let probe = |br: &mut DistanceBracket, e: &Height| -> Result<Option<InterleavingWitness>, DistanceError> {
        br.searches += 1;
        match search_interleaving(g, h, e, m, budget)? {
            SearchOutcome::Found(w) => Ok(Some(w)),
            SearchOutcome::NotFound => Ok(None),
            SearchOutcome::Exhausted => Err(DistanceError::BudgetExceeded(Box::new(br.clone()))),
        }
    };

    let mut next = lo.clone();
    let mut hi = None;
    for step in 0..=MAX_DOUBLINGS {
        match probe(&mut br, &next)? {
            Some(w) => {
                hi = Some(next.clone());
                br.witness = Some(w);
                break;
            }
            None => {
                lo = next.clone();
                br.lo = Bound::Finite(lo.clone());
                br.certificate = Certificate::SearchExhaustion { eps: lo.clone() };
            }
        }
        next = if step == 0 {
            match &lb.upper_hint {
                Some(u) if u > &lo => u.clone(),
                _ if lo.is_positive() => &lo + &lo,
                _ => Height::one(),
            }
        } else {
            &next + &next
        };
    }
    let Some(mut hi) = hi else {
        return Err(DistanceError::BudgetExceeded(Box::new(br)));
    };
    br.hi = Bound::Finite(hi.clone());
    let three = Height::int(3);
    while &(&hi - &lo) > tol {
        let third = (&hi - &lo) / &three;
        let e = Height::simplest_between(&(&lo + &third), &(&hi - &third));
        match probe(&mut br, &e)? {
            Some(w) => {
                hi = e;
                br.hi = Bound::Finite(hi.clone());
                br.witness = Some(w);
            }
            None => {
                lo = e;
                br.lo = Bound::Finite(lo.clone());
                br.certificate = Certificate::SearchExhaustion { eps: lo.clone() };
            }
        }
    }
    Ok(br)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("slopes must satisfy 0 <= m' - m < 1 - m'")]
    SlopePairOutOfRange,
    #[error(transparent)]
    Map(#[from] MorphismError),
}

/// Moves an interleaving to another slope.
///
/// Downward (`m_target ≤ w.m`) the maps are followed by the inclusions `ν` at the same `ε`.
/// Upward they are followed by `ρ` into `ε' = δε` with `δ = (1 − w.m)/(1 − m_target)`, which
/// needs `m_target − w.m < 1 − m_target`.
pub fn transfer_interleaving(w: &InterleavingWitness, m_target: &Height) -> Result<InterleavingWitness, TransferError> {
    let one = Height::one();
    if m_target.is_negative() || m_target > &one {
        return Err(TransferError::SlopePairOutOfRange);
    }
    if m_target == &w.m {
        return Ok(w.clone());
    }
    let g = w.phi.domain().clone();
    let h = w.psi.domain().clone();
    let from = FlowParams::slope(w.eps.clone(), &w.m).map_err(|_| TransferError::SlopePairOutOfRange)?;
    let (kind, eps) = if m_target < &w.m {
        (FlowMapKind::Nu, w.eps.clone())
    } else {
        if m_target - &w.m >= &one - m_target {
            return Err(TransferError::SlopePairOutOfRange);
        }
        let delta = (&one - &w.m) / (&one - m_target);
        (FlowMapKind::Rho, &delta * &w.eps)
    };
    let to = FlowParams::slope(eps.clone(), m_target).map_err(|_| TransferError::SlopePairOutOfRange)?;
    let push = |x: &Arc<ReebGraph>, map: &ReebMorphism| -> Result<ReebMorphism, TransferError> {
        let a = FlowLevel::new(x.clone(), from.clone()).expect("valid parameters");
        let b = FlowLevel::new(x.clone(), to.clone()).expect("valid parameters");
        let f = flow_map_between(kind, &a, &b)?;
        Ok(compose(map, &f)?)
    };
    Ok(InterleavingWitness { eps, m: m_target.clone(), phi: push(&h, &w.phi)?, psi: push(&g, &w.psi)? })
}

/// One step `m → m'` of a slope chain, with `d^m ≤ d^{m'} ≤ upper · d^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceHop {
    pub m: Height,
    pub m_next: Height,
    pub upper: Height,
}

/// A chain of admissible slope pairs from `m` up to `m_target < 1`, and the product of the
/// per-hop upper constants. Each hop goes to `min(m_target, (1 + 2m)/3)`, which keeps
/// `m' − m < 1 − m'`. No claim is made that the chain is optimal.
pub fn equivalence_chain(m: &Height, m_target: &Height) -> Result<(Vec<EquivalenceHop>, Height), TransferError> {
    let one = Height::one();
    if m.is_negative() || m > m_target || m_target >= &one {
        return Err(TransferError::SlopePairOutOfRange);
    }
    let mut hops = Vec::new();
    let mut product = Height::one();
    let mut cur = m.clone();
    while &cur < m_target {
        let step = (&one + &(&cur + &cur)) / Height::int(3);
        let next = step.min_of(m_target).clone();
        let upper = (&one - &cur) / (&one - &next);
        product = &product * &upper;
        hops.push(EquivalenceHop { m: cur, m_next: next.clone(), upper });
        cur = next;
    }
    Ok((hops, product))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::h;

    fn seg(a: i64, b: i64) -> Arc<ReebGraph> {
        Arc::new(ReebGraph::from_heights(vec![Height::int(a), Height::int(b)], &[(0, 1)]).unwrap())
    }

    #[test]
    fn chain_constants_telescope() {
        let (hops, product) = equivalence_chain(&h(0, 1), &h(9, 10)).unwrap();
        assert!(hops.len() > 1);
        for hop in &hops {
            assert!(&hop.m_next - &hop.m < &Height::one() - &hop.m_next);
        }
        assert_eq!(product, h(10, 1));
        assert!(equivalence_chain(&h(1, 2), &h(1, 1)).is_err());
    }

    #[test]
    fn segment_gap() {
        let lb = lower_bounds(&seg(-1, 1), &seg(-2, 2), &Height::zero());
        assert_eq!(lb.value, Bound::Finite(h(1, 1)));
        let lb = lower_bounds(&seg(-1, 1), &seg(-2, 2), &h(1, 2));
        assert_eq!(lb.value, Bound::Finite(h(2, 1)));
        let lb = lower_bounds(&seg(0, 1), &seg(0, 2), &h(1, 1));
        assert_eq!(lb.value, Bound::Infinite);
    }

    #[test]
    fn self_distance_is_zero() {
        let g = seg(0, 3);
        let br = estimate_distance(&g, &g, &h(1, 4), &h(1, 10), 10_000).unwrap();
        assert_eq!(br.lo, Bound::Finite(Height::zero()));
        assert_eq!(br.hi, Bound::Finite(Height::zero()));
    }

    #[test]
    fn segment_distance_brackets_the_gap() {
        let br = estimate_distance(&seg(-1, 1), &seg(-2, 2), &h(1, 4), &h(1, 1000), 100_000).unwrap();
        let want = Bound::Finite(h(4, 3));
        assert!(br.lo <= want && want <= br.hi, "{:?} {:?}", br.lo, br.hi);
    }
}
