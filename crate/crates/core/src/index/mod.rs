//! Maslov-type indices by crossing forms, triple and Hörmander indices.

pub mod boundary;
pub mod crossing;
pub mod triple;

pub use boundary::{nullities, nullity, BoundarySpec, Nullities};
pub use crossing::{end_nullities, index_suite, maslov, Crossing, IndexReport, IndexSuite, CONVENTION};
pub use triple::{hormander, triple_index, triple_index_bound, triple_signature};
