//! Linearly distributive circuits: boxing validity, rewriting, a compact
//! complex-matrix model, truncated free exponentials, and equation suites
//! for duals, linear monoids, comonoids, bialgebras and complementary
//! systems.

pub mod circuit;
pub mod cli;
pub mod exponential;
pub mod matrix;
pub mod model;
pub mod object;
pub mod rewrite;
pub mod structures;
pub mod validity;
