//! Engine for window-bounded representational systems.
//!
//! A finite grid universe is represented by two cooperating components:
//! an *analogical* one — patches of cell content that exactly fill a
//! bounded window of presence and display content by identity — and a
//! *symbolic* one — a web of units whose semantic entries attribute stored
//! or rule-generated patches to them. On top of the two sit the extension
//! machinery (projection, focusing, explicitation into symbol-free
//! unfolds, navigation along grounded links) and a logic layer (particular
//! implications with three outcomes, finite-domain laws, and classical
//! validity over valuations).
//!
//! Module map:
//!
//! - [`geom`]: coordinates, offsets, rectangles, extents.
//! - [`universe`]: attribute schemas, grid worlds, ground fragments.
//! - [`presence`]: the window, patches, anchors, analogical unification
//!   with world-tagged branches.
//! - [`web`]: symbolic units, the memory store, semantic entries, links,
//!   situations, objects, and the abstraction operations.
//! - [`extension`]: projection, focusing, explicitation with incoherence
//!   classification, path search, unifying representations.
//! - [`logic`]: contents, implications, laws, the propositional calculus,
//!   and the completeness / faithfulness / coherence checkers.
//!
//! Everything is deterministic: iteration runs over ordered maps, ties
//! break lexicographically, and reports serialize with stable ordering.

pub mod error;
pub mod extension;
pub mod fixtures;
pub mod geom;
pub mod logic;
pub mod presence;
pub mod universe;
pub mod web;

pub use error::{Error, Result};
