//! Mirror symmetry for Calabi–Yau double covers branched along nef-partitions:
//! polytope duality, Euler characteristics, GKZ data, Picard–Fuchs operators,
//! mirror maps and Yukawa couplings, all in exact arithmetic.

pub mod cohom;
pub mod error;
pub mod gkz;
pub mod json;
pub mod lattice;
pub mod mirror;
pub mod nef;
pub mod picard_fuchs;
pub mod rational;
pub mod series;
pub mod topology;

pub use error::{Error, Result};
pub use lattice::{IntegerMatrix, LatticePolytope};
pub use nef::NefPartitionData;
