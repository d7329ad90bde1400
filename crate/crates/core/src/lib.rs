//! Bounded-ball tooling for UFOs (uniformly finite obstacles) in Cayley and
//! Schreier graphs, their transfer across quasi-isometries, and the mirror
//! shift pattern rules.

pub mod cli;
pub mod error;
pub mod graphs;
pub mod groups;
pub mod mirror;
pub mod qi;
pub mod ufo;

pub use error::{Error, Result};
pub use graphs::{BoundedGraph, NeighborOracle};
pub use groups::{Gen, GeneratorSet, GroupOracle, Key};
