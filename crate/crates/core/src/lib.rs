//! Numerical laboratory for weighted Bergman spaces, logarithmic Bloch spaces
//! and small Hankel operators on the upper half-plane.
//!
//! [`quadrature`] integrates over the unbounded half-plane and searches for
//! suprema; [`kernels`], [`model`] and [`operators`] supply the objects being
//! measured; [`harness`] turns each estimate into an experiment with a
//! pass/fail verdict, and [`cli`] is the `blab` front end.

// Negated comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod halfplane;
pub mod harness;
pub mod kernels;
pub mod model;
pub mod operators;
pub mod quadrature;

pub use error::{Error, Result};
