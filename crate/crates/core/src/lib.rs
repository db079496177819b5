//! Multi-criteria traveling salesman approximation toolkit.
//!
//! Algorithms computing approximate Pareto curves for maximization TSP
//! (directed and undirected), a deterministic bi-criteria construction,
//! and an iterated-cycle-cover algorithm for minimization TSP under the
//! gamma-triangle inequality, together with the exact brute-force oracles
//! used to verify the achieved ratios at desk scale.

pub mod bicriteria;
pub mod decompose;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod matching;
pub mod maxtsp;
pub mod minatsp;
pub mod oracle;
pub mod pareto;
mod patch;
pub mod rat;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{EdgeSet, Instance, Orientation, WeightVector};
pub use pareto::{ParetoSet, Sense};
pub use rat::Rat;
