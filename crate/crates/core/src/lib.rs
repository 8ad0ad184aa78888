//! Anytime construction of Pareto fronts by iterated referent optimisation.
//!
//! The engine keeps lower and upper bound sets on the undiscovered part of
//! the front and repeatedly asks a Pareto oracle for a solution strictly
//! better than a chosen lower bound. Its error bound shrinks monotonically
//! and reaches zero once the front is complete.

pub mod engine;
pub mod geometry;
pub mod metrics;
pub mod momdp;
pub mod oracle;
