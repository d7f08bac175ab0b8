//! Reeb graphs with exact rational heights, the smoothing and truncation operators,
//! the maps relating them, and bracketed truncated interleaving distances.

pub mod flowops;
pub mod height;
pub mod metrics;
pub mod morphisms;
pub mod properties;
pub mod reeb;
pub mod tooling;

pub use height::{h, Bound, Height};
pub use reeb::{Edge, EdgeId, Interval, PointRef, ReebGraph, Vertex, VertexId};
