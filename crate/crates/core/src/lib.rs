//! Exact arithmetic for even integral lattices.
//!
//! The crate covers discriminant groups and forms, primitive sublattices and
//! orthogonal complements, the embedding criterion for even unimodular
//! targets, overlattices from isotropic glue, period vectors with
//! imaginary-quadratic coordinates together with their Néron–Severi and
//! transcendental splittings, and the finite computations behind Brauer-group
//! bounds. All arithmetic is exact: integers are arbitrary precision and
//! nothing goes through floating point.

#![allow(clippy::needless_range_loop)]

pub mod brauer;
pub mod discriminant;
pub mod embeddings;
pub mod error;
pub mod glue;
pub mod json;
pub mod lattice;
pub mod limits;
pub mod linalg;
pub mod matrix;
pub mod periods;
pub mod vectors;

pub use discriminant::{disc_form_isomorphic, DiscriminantForm, DiscriminantGroup, FiniteForm};
pub use embeddings::{NikulinVerdict, SublatticeEmbedding};
pub use error::{Error, Result};
pub use lattice::{Lattice, Signature, Standard};
pub use limits::Limits;
pub use matrix::{IntMatrix, Matrix, RatMatrix};
