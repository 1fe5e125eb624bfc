//! The concrete model families: arithmetic, the truncated hereditary-set
//! hierarchy, and the graph-model structure.

pub mod arith;
pub mod scottmodel;
pub mod setmodel;
