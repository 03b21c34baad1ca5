//! Newton-polyhedron invariants and bounds for the Łojasiewicz gradient
//! exponent of holomorphic and mixed polynomial germs at the origin.

pub mod arith;
pub mod bounds;
pub mod catalog;
pub mod curves;
pub mod dualfan;
pub mod error;
pub mod mixedpoly;
pub mod hull;
pub mod invariants;
pub mod newton;
pub mod nondeg;
pub mod sampler;
mod numeric;
mod parser;
pub mod report;

pub use error::{Error, Result};
pub use mixedpoly::{parse, ExponentPair, MixedFunction, MixedMonomial, VariableSubset};
