//! Explicit surface embeddings of sequence graphs and their verifiers.

pub mod bits;
pub mod chamanara;
pub mod geometry;
pub mod rotation;
pub mod verify;

pub use bits::{bits, psi, reverse_bits, split_b0_b1, BitString};
pub use chamanara::{
    chamanara_embed, route_case, segment_map, vdc_graph, Axis, ChamanaraEmbedding, Crossing, Route,
    RouteCase, SegmentId, SegmentMap, Square,
};
pub use geometry::{Dyadic, Point};
pub use rotation::{
    canonical_rotation, canonical_rotation_of, circulant_rotation_system, face_trace,
    torus_embedding, torus_rotation_system, FaceReport, RotationSystem, TorusEmbedding, TorusOrder,
};
pub use verify::{verify_embedding, verify_embedding_against, Verification, Violation};
