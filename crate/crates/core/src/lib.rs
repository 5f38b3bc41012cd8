//! Dual cube complexes of wallspaces, periodic planar arrangements and
//! half-plane patterns, and the chargeless condition for graph manifolds.

pub mod chargeless;
pub mod dual_complex;
pub mod exact;
pub mod generate;
pub mod graph_manifold;
pub mod halfplane;
pub mod planar;
pub mod smith;
pub mod wallspace;

/// Version tag written into every JSON document.
pub const SCHEMA: &str = "cubuland/1";
