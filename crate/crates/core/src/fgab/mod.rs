//! Finitely generated abelian groups, their elements, subgroups and homomorphisms.

pub mod group;
pub mod hom;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod snf;
pub mod subgroup;

#[cfg(test)]
mod props;

pub use group::{group_from_presentation, Element, FgAbGroup, Presentation};
pub use hom::{sum_map, DirectSum, Homomorphism};
pub use lattice::Lattice;
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, Snf};
pub use subgroup::{quotient, EmbeddedSubgroup, Quotient, Subgroup};
