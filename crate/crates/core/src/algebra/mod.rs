//! Finite fields, MOLS, transversal designs and GDDs.

pub mod field;
pub mod gdd;
pub mod latin;
pub mod td;

pub use field::{gf, mols, mols_pair, mols_prime_power, FieldError, FiniteField};
pub use gdd::{verify_gdd, Gdd, GddReport, GddViolation};
pub use latin::{mols_kronecker, LatinError, LatinSquare, MolsSet};
pub use td::{td_exists, td_from_mols, TransversalDesign};
