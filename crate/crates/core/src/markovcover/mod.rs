//! Markov covers of the circle: construction, exact validation, transition
//! matrices, overlap families and their signed transition matrices.
//!
//! Rectangles are indexed from 0 in the library and in JSON.

mod arcs;
mod coding;
mod cover;
mod index;
mod net;

pub use arcs::{Arc, ArcJson, ArcSet};
pub use coding::{code_point, pi_decode};
pub use cover::{
    equal_subdivision_cover, subdivision, transition_matrix, validate_cover, Check, CoverJson, MarkovCover, Rectangle,
    ValidationReport,
};
pub use index::{
    families_by, index_families, index_families_abstract, permutation_sign, signed_matrices, IndexFamily,
    SignedTransition,
};
pub use net::{net_cover, NetCover};
