//! Finite-scale duality and forcing toolkit for bounded distributive
//! lattices with operators.
//!
//! The crate builds prime spectra, dual sheaves and their section algebras
//! for finite bounded distributive lattices expanded by join-preserving
//! idempotent operators, diagnoses when the representation map into the
//! section algebra is an isomorphism, and runs two flavours of forcing over
//! finite structures: many-valued (MV-algebra valued) forcing on a bounded
//! cumulative hierarchy of names, and Kripke-Joyal forcing over finite
//! sites, including a monoidal conjunction clause.
//!
//! Everything is exhaustive and deterministic: all carriers are finite,
//! searches are budgeted, and enumeration orders are canonical so that
//! repeated runs produce identical output.

// table-driven math: index loops over operation tables are the house style
#![allow(clippy::needless_range_loop)]

pub mod blo;
pub mod budget;
pub mod congruence;
pub mod corpus;
pub mod dot;
pub mod format;
pub mod formula;
pub mod hom;
pub mod ideal;
pub mod kj;
pub mod lattice;
pub mod mv;
pub mod mvset;
pub mod poset;
pub mod priestley;
pub mod regularity;
pub mod sheaf;
pub mod site;

pub use blo::Blo;
pub use lattice::{Elem, FiniteLattice};
