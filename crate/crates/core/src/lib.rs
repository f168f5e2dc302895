//! Exact certificates for complex projective line arrangements.
//!
//! The crate is organized around a pipeline: exact cyclotomic arithmetic
//! ([`cyclo`]) feeds projective incidence combinatorics ([`arrangement`]),
//! which feeds the rational-LP feasibility check for non-negatively curved
//! polyhedral metrics ([`metric`]). Independent of the exact path, [`hopf`]
//! and [`extend`] provide floating-point CAT(1) and extendability predicates
//! for Hopf-circle configurations and doubled spherical triangles.
//! [`catalog`] holds the named arrangements used throughout.

pub mod arrangement;
pub mod catalog;
pub mod cyclo;
pub mod extend;
pub mod hopf;
pub mod metric;

pub use cyclo::{CycloElement, CycloError, Rational};
