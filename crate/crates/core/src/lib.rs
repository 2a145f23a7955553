//! Exact and approximate counting of subgraphs, induced subgraphs and
//! homomorphisms of a small pattern in a sparse host graph, exploiting the
//! host's degeneracy through dag tree decompositions.
//!
//! The crate is organized around the pipeline:
//! pattern structure ([`orient`], [`dtd`], [`params`]) feeds the exact
//! counting engine ([`hom`], [`basis`]), the reductions that transfer counts
//! between patterns live in [`gadget`], and the randomized estimators with
//! their colourful decision procedures live in [`approx`] and [`colourful`].
//! All exact counts are arbitrary-precision integers; basis coefficients are
//! exact rationals.

pub mod approx;
pub mod basis;
pub mod canon;
pub mod colourful;
pub mod dtd;
pub mod gadget;
pub mod graph;
pub mod hom;
pub mod io;
pub mod orient;
pub mod params;
pub mod parse_tree;
pub mod properties;

pub use canon::{canonical_form, CanonicalLabel};
pub use graph::{ColouredGraph, DegeneracyOrder, Graph, VertexPartition};
pub use hom::{CountConfig, HomCount};

/// Exact counts are arbitrary-precision unsigned integers.
pub type Count = num_bigint::BigUint;
/// Basis coefficients and estimates are exact rationals.
pub type Coefficient = num_rational::BigRational;
