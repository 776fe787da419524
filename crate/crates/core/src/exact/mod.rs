//! Exact arithmetic over the rationals: numbers, polynomials, rational
//! functions, truncated power series, matrices and integer lattices.

pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rational::{factorial_valuation, padic_valuation, Height, Rational};
pub use series::TruncatedSeries;
