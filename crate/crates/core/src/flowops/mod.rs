//! Smoothing, truncation, and their composite, with the band and backward-view oracles.

mod bands;
mod level;
mod smooth;
mod subgraph;
mod truncate;

pub use bands::{backward_view, backward_view_sub, band_image, band_intersection, truncated_smooth};
pub use level::{component_map, FlowFamily, FlowLevel, FlowParams};
pub use smooth::{smooth, smooth_arc, Element, FlowError, SmoothResult};
pub use subgraph::{image_subgraph, restrict, Subgraph};
pub use truncate::{truncate, truncate_arc, RemovedSet, TruncationResult};
