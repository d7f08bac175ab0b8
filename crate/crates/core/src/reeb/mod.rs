//! The Reeb graph data model and the basic path and fork computations.

mod graph;
mod ops;

pub use graph::{validate, Edge, EdgeId, Interval, PointRef, ReebGraph, ValidationError, Vertex, VertexId, Violation};
pub use ops::{
    component_count, component_labels, components, forks, image, is_connected, longest_up_down, overall_image,
    reach_extremes, subdivide_at, upward_order, EdgeChains,
};
