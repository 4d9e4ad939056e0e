//! Exact-arithmetic toolkit for geometric simultaneous embeddings of a
//! tree and a path.

pub mod analyzer;
pub mod counterexample;
pub mod depth2;
pub mod format;
pub mod geom;
pub mod model;
pub mod leveltree;
pub mod planarity;
mod search;

pub use geom::{orient, Orientation, Point, Scalar};
pub use model::{Drawing, Instance, PathGraph, RootedTree, VertexId};
