//! SVG rendering for simultaneous drawings. The `sge` binary wires the
//! core modules to files; this library holds the parts worth testing
//! directly.

pub mod render;

pub use render::{render_svg, Colour, EdgeStyle, RenderError, RenderStyle};
