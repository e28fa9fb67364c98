//! Enumeration and certification of compact hyperbolic Coxeter 4-polytopes
//! with eight facets.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`catalog`] builds the elliptic, parabolic, Lannér and square diagram
//!    catalogs used as obstructions.
//! 2. [`polytope`] reads vertex–facet incidences of simple 4-polytopes and
//!    derives the facet sets each obstruction applies to.
//! 3. [`pasting`] joins per-vertex blocks of elliptic labelings into
//!    potential Coxeter vectors, filtering by the obstructions as early as
//!    possible, and reduces them modulo the combinatorial symmetry group.
//! 4. [`gram`] turns each potential vector into a Gram matrix with unknown
//!    lengths and angles, solves for signature (4,1) and certifies the result.
//!
//! [`pipeline`] strings the stages together and writes reports.

pub mod algebraic;
pub mod catalog;
pub mod dataset;
pub mod diagram;
pub mod dot;
pub mod error;
pub mod gram;
pub mod label;
pub mod pasting;
pub mod pipeline;
pub mod polytope;

pub use algebraic::AlgebraicReal;
pub use catalog::{CatalogSet, VectorCatalog};
pub use diagram::{classify_diagram, cosine_entry, DiagramClass};
pub use error::{Error, Result};
pub use label::{CoxeterLabel, SmallCoxeterMatrix};
pub use polytope::{PairIndex, PolytopeData};
