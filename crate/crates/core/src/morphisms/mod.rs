//! Function-preserving maps between Reeb graphs and the maps of the truncated smoothing flow.

mod flowmaps;
mod morphism;

pub use flowmaps::{
    check_flow_params, flow_functor, flow_map_between, make_flow_map, restrict_to_truncation, FlowMapKind,
};

pub use morphism::{
    compose, equal_maps, first_difference, from_point_fn, Location, MorphismError, MorphismViolation, ReebMorphism,
};
