use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::flowops::{component_map, restrict, truncate_arc, FlowLevel, FlowParams};
use crate::height::Height;
use crate::reeb::{PointRef, ReebGraph};

use super::morphism::{from_point_fn, MorphismError, ReebMorphism};

/// The four families of maps between truncated smoothings of one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FlowMapKind {
    /// Inclusion of a deeper truncation at fixed `ε`.
    Nu,
    /// Smoothing map at fixed `τ`.
    Eta,
    /// `ε` grows while `τ` shrinks.
    Omega,
    /// `ε` and `τ` both grow, `τ` by at most as much as `ε`.
    Rho,
}

impl fmt::Display for FlowMapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlowMapKind {
    type Err = String;

    fn from_str(s: &str) -> Result<FlowMapKind, String> {
        match s {
            "nu" => Ok(FlowMapKind::Nu),
            "eta" => Ok(FlowMapKind::Eta),
            "omega" => Ok(FlowMapKind::Omega),
            "rho" => Ok(FlowMapKind::Rho),
            _ => Err(format!("unknown map kind `{s}`")),
        }
    }
}

/// Checks the parameter constraints of a map `S_{ε₁}^{τ₁} → S_{ε₂}^{τ₂}`.
pub fn check_flow_params(kind: FlowMapKind, from: &FlowParams, to: &FlowParams) -> Result<(), MorphismError> {
    let out = |constraint| Err(MorphismError::ParamsOutOfRange { kind: kind.name(), constraint });
    let (e1, t1, e2, t2) = (&from.eps, &from.tau, &to.eps, &to.tau);
    match kind {
        FlowMapKind::Nu => {
            if e1 != e2 {
                return out("eps1 = eps2");
            }
            if t1 < t2 {
                return out("tau1 >= tau2");
            }
        }
        FlowMapKind::Eta => {
            if e1 > e2 {
                return out("eps1 <= eps2");
            }
            if t1 != t2 {
                return out("tau1 = tau2");
            }
        }
        FlowMapKind::Omega => {
            if e1 > e2 {
                return out("eps1 <= eps2");
            }
            if t1 < t2 {
                return out("tau1 >= tau2");
            }
        }
        FlowMapKind::Rho => {
            if t1 > e1 || t2 > e2 {
                return out("tau <= eps at both ends");
            }
            let dt = t2 - t1;
            if dt.is_negative() {
                return out("tau1 <= tau2");
            }
            if dt > e2 - e1 {
                return out("tau2 - tau1 <= eps2 - eps1");
            }
        }
    }
    Ok(())
}

impl FlowMapKind {
    pub fn name(self) -> &'static str {
        match self {
            FlowMapKind::Nu => "nu",
            FlowMapKind::Eta => "eta",
            FlowMapKind::Omega => "omega",
            FlowMapKind::Rho => "rho",
        }
    }
}

/// The map of the given kind between two levels of the same graph.
pub fn flow_map_between(kind: FlowMapKind, from: &FlowLevel, to: &FlowLevel) -> Result<ReebMorphism, MorphismError> {
    check_flow_params(kind, &from.params, &to.params)?;
    match kind {
        FlowMapKind::Nu => {
            let parent = ReebMorphism::identity(from.parent().clone());
            restrict(&parent, &from.truncation.sub, &to.truncation.sub)
        }
        _ => component_map(from, to),
    }
}

pub fn make_flow_map(
    g: Arc<ReebGraph>,
    kind: FlowMapKind,
    from: &FlowParams,
    to: &FlowParams,
) -> Result<ReebMorphism, MorphismError> {
    check_flow_params(kind, from, to)?;
    let level = |p: &FlowParams| FlowLevel::new(g.clone(), p.clone()).expect("checked parameters");
    flow_map_between(kind, &level(from), &level(to))
}

/// `T^τ[φ]`: the restriction of `m` to the `τ`-truncations of its domain and codomain.
pub fn restrict_to_truncation(m: &ReebMorphism, tau: &Height) -> Result<ReebMorphism, MorphismError> {
    let d = truncate_arc(m.domain().clone(), tau).map_err(|_| MorphismError::ParamsOutOfRange {
        kind: "truncation",
        constraint: "tau >= 0",
    })?;
    if d.graph.is_empty() {
        return Err(MorphismError::EmptyTruncatedDomain);
    }
    let c = truncate_arc(m.codomain().clone(), tau).expect("tau checked");
    restrict(m, &d.sub, &c.sub)
}

/// The functor action `S_ε^τ[φ]` for `φ: X → S_{ε'}^{τ'}(Y)`, as a map
/// `S_ε^τ(X) → S_{ε+ε'}^{τ+τ'}(Y)`.
///
/// `src` is the level of `X` at `(ε, τ)`, `target` the level of `Y` that `φ` maps into, and
/// `dst` the level of `Y` at the summed parameters. A point of `src` stands for an interlevel
/// component of `X`; it is sent to the component of `Y` at the same height that contains the
/// image of any of its points.
pub fn flow_functor(
    phi: &ReebMorphism,
    src: &FlowLevel,
    target: &FlowLevel,
    dst: &FlowLevel,
) -> Result<ReebMorphism, MorphismError> {
    let same = |a: &Arc<ReebGraph>, b: &Arc<ReebGraph>| Arc::ptr_eq(a, b) || **a == **b;
    if !same(phi.domain(), src.base())
        || !same(phi.codomain(), target.graph())
        || !same(target.base(), dst.base())
        || dst.params.eps != &src.params.eps + &target.params.eps
        || dst.params.tau != &src.params.tau + &target.params.tau
    {
        return Err(MorphismError::DomainMismatch);
    }
    let image = |p: &PointRef| -> Result<PointRef, MorphismError> {
        let c = src.graph().point_height(p);
        let y = phi.eval(&src.witness_point(p));
        let z = target.representative(&y);
        dst.locate(&c, z).ok_or(MorphismError::LeavesTarget)
    };
    from_point_fn(src.graph().clone(), dst.graph().clone(), image, || MorphismError::LeavesTarget)
}
