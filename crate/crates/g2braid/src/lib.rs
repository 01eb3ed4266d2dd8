//! Exact braid group representations on path spaces of the G2 Bratteli
//! diagram, built level by level and checked against their algebraic
//! invariants.

pub mod cli;
pub mod g2weights;
pub mod matrix;
pub mod pathlattice;
pub mod qscalar;
pub mod repbuilder;
pub mod verifier;
