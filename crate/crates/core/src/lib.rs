//! Conflict-free connection colorings of graphs.
//!
//! An edge coloring is conflict-free connected when every pair of vertices
//! is joined by a path on which some color occurs exactly once. This crate
//! computes the minimum number of colors (`cfc`) exactly on small graphs,
//! builds colorings constructively from structural decompositions, and runs
//! a battery of checks relating `cfc` to the independence number, the
//! maximum degree of trees and the cut-edge structure.

pub mod alpha;
pub mod coloring;
pub mod construct;
pub mod families;
pub mod graph;
pub mod harness;
pub mod solver;

pub use coloring::{EdgeColoring, Witness};
pub use graph::{EdgeRef, Graph, GraphError, Subgraph};
