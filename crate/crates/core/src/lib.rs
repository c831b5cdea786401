//! Workbench for promise constraint satisfaction problems `PCSP(1in3, B)`
//! with a symmetric ternary target `B`.
//!
//! - [`structure`] and [`catalog`]: relational structures and named templates.
//! - [`hom`] and [`lattice`]: homomorphism search and the homomorphism order.
//! - [`poly`]: Boolean-source polymorphism tables, minors, i-sets, enumeration.
//! - [`sym`]: symmetric and two-block block-symmetric polymorphism search.
//! - [`tract`]: polynomial-time solvers and the three-element classifier.
//! - [`lemma`]: bounded-arity verification of structural properties of
//!   polymorphisms, selector checks along chains of minors, Kneser graphs.

pub mod catalog;
pub mod error;
pub mod hom;
pub mod instance;
pub mod lattice;
pub mod lemma;
pub mod poly;
pub mod structure;
pub mod sym;
pub mod tract;

pub use catalog::{named_template, TemplateName};
pub use error::{Error, Result};
pub use hom::{check_coloring, find_homomorphism, hom_exists, hom_order_compare, HomMap, HomOrder, TemplatePair};
pub use instance::{generate_planted, Instance};
pub use lattice::{hom_lattice, HomLattice};
pub use poly::{CoordSet, MinorMap, PolyTable};
pub use structure::{associated_digraph, automorphisms, make_structure, plus_closure, symmetrize, Digraph, RelStructure};
