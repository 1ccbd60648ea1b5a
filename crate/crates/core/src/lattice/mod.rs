//! Exact lattice and polytope kernel.

mod hull;
mod matrix;
mod points;
mod polytope;

pub use hull::{extreme_rays, facets_of_points, vertices_of_halfspaces};
pub use matrix::{
    smith_normal_form, smith_relations, unimodular_inverse, IntegerMatrix, SmithForm,
    SmithRelations,
};
pub use points::LatticePoints;
pub use polytope::{lattice_transform, Facet, LatticePolytope};
