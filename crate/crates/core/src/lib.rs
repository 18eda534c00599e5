//! Sequence graphs: the 4-regular multigraph formed by the index-order and
//! sorted-order Hamiltonian cycles of a sequence prefix.
//!
//! The crate covers Kronecker, van der Corput and interval-exchange orbit
//! sequences, their gap structure, the minor reduction between graph sizes,
//! and the explicit torus and Chamanara-surface embeddings together with
//! exact combinatorial verifiers.

pub mod embedding;
pub mod error;
pub mod gaps;
pub mod graph;
pub mod iet;
pub mod real;
pub mod sequence;

pub use error::{Error, Result};
pub use gaps::{circulant_check, gap_profile, is_nice_n, nice_n_scan, verify_three_gap, GapProfile};
pub use graph::{build_graph, minor_reduce, Cycle, EdgeId, MultiGraph, SequenceGraph};
pub use sequence::{
    kronecker_prefix, sort_permutation, vdc_prefix, vdc_successor_bits, KroneckerParams, SeqValue,
    SortPermutation, SortedSequence, Theta,
};
