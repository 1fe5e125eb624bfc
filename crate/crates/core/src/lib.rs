//! Realizability workbench core.
//!
//! Builds Heyting-prealgebra truth values over three partial combinatory
//! algebra backends (a closed SK-term model, Scott's graph model over P(omega),
//! and Kleene's second model over Baire-space streams), a Boolean prealgebra
//! with a box operator obtained from the generalized double-negation operator,
//! a natural-deduction proof-to-combinator extractor, modal first-order
//! semantics with the Goedel translation and change of basis, and three
//! concrete model families with witness verification and refutation sweeps.

pub mod comb;
pub mod ehp;
pub mod formula_syntax;
pub mod heyting;
pub mod models;
pub mod modal;
pub mod report;
pub mod semantics;
pub mod suites;
pub mod wit;

pub use comb::{CombTerm, Fuel, Tri};

pub mod backend;
