//! Reading, writing, generating and drawing graphs.

mod format;
mod generate;
mod render;

pub use format::{parse, serialize, FormatError, FORMAT_VERSION};
pub use generate::{generate, Family, GenError, Generated};
pub use render::{to_dot, to_svg};
