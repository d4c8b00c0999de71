//! Simplicial complexes, their integral homology, and homology towers of
//! polyhedral inverse sequences read through the Milnor sequence.

mod complex;
mod homology;
mod models;
mod tower;

pub use complex::{ComplexDoc, SimplicialComplex, SimplicialMap};
pub use homology::{euler_from_homology, homology, induced, induced_between, Homology, MAX_DEGREE};
pub use models::{
    cycle, cycle_cover, disk_at, solenoid_tower, telescope, unbounded_colim_complex,
    unbounded_colim_cover, unbounded_colim_inclusion, MAX_SOLENOID_VERTICES, MAX_TELESCOPE_LENGTH,
    MAX_UNBOUNDED_INDEX,
};
pub use tower::{homology_tower, steenrod_report, PolyhedralTower, SteenrodReport};
