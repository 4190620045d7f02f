//! Holey Schröder designs: verification, cyclic development, algebraic
//! ingredients, recursive constructions, search and an existence prover.

pub mod algebra;
pub mod catalog;
pub mod constructions;
pub mod prover;
pub mod design;
pub mod development;
pub mod feasibility;
pub mod format;
pub mod point;
pub mod quasigroup;
pub mod search;
pub mod types;

pub use design::{verify_design, Design, HoleStructure, VerificationReport, Violation};
pub use development::{develop, difference_census, orbit_of, shift_block, StarterSet};
pub use feasibility::{is_feasible, FeasibilityReport};
pub use point::{block_pairs, Block, Color, ColoredPair, Point};
pub use types::{expected_block_count, parse_type, TypeSpec};
pub use catalog::{catalog_get, catalog_list, catalog_verify_all, Catalog, CatalogEntry};
