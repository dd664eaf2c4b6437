//! Perfect tilings of uniform hypergraphs.
//!
//! The crate computes structural invariants of k-partite patterns, evaluates
//! the closed-form minimum codegree thresholds for tiling them, builds the
//! standard lower-bound constructions with checkable certificates, and
//! decides small tiling instances exactly. Fractional hom-tilings and the
//! index-vector lattices used to move tiling mass between parts are
//! available as exact-rational and exact-integer objects.

pub mod budget;
pub mod constructions;
pub mod error;
pub mod fractional;
pub mod hg;
pub mod hypergraph;
pub mod invariants;
pub mod lattice;
pub mod rational;
pub mod simplex;
pub mod solver;
pub mod thresholds;

pub use budget::Budget;
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, PartiteProfile};
