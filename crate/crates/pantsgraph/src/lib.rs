//! Exact combinatorial models of pants graphs and curve complexes of
//! low-complexity nonorientable surfaces.
//!
//! The library realizes three small pants-graph models as exact oracles,
//! classifies their edges and circuits from first principles, contracts
//! loops through triangle and pentagon cells with verifiable certificates,
//! and recovers surface signatures from local graph structure alone.

pub mod autos;
pub mod circuits;
pub mod farey;
pub mod fixtures;
pub mod homotopy;
pub mod models;
pub mod structure;

pub use autos::{AutosError, SlopeMap};
pub use farey::{FareyError, FareyTriangle, Slope};
pub use homotopy::{ContractionCertificate, HomotopyError};
pub use models::{Ball, Curve, EdgeInfo, Model, MoveType, Vertex};
pub use structure::{EdgeClass, MarkedFGraph, SpanRep, StructureError};
