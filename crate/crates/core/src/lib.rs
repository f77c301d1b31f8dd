//! Decides hyperbolicity of generalized arborescent links.
//!
//! The pipeline: parse a bracelet-tree presentation, simplify it to a
//! reduced form (splitting connected sums), classify each summand as one of
//! the exceptional non-hyperbolic families or as a candidate, and for each
//! candidate build the block/tetrahedron decomposition of the link
//! complement, construct an exact angle assignment, and verify it
//! independently. All angle arithmetic is exact, in rational multiples
//! of π.

pub mod angles;
pub mod classifier;
pub mod decomposer;
pub mod dsl;
pub mod farey;
pub mod oracle;
pub mod presentation;
pub mod reducer;
pub mod report;
pub mod slope;
pub mod verifier;
