//! Numerical verification of weighted-product integral inequalities for
//! s-convex, convex, quasi-convex, P-class and Q(I)-class functions.
//!
//! The crate evaluates the closed-form Beta-function bounds, integrates the
//! left-hand sides adaptively, certifies class membership on grids, and runs
//! sweeps and seeded falsification searches over all of it.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod function_catalog;
pub mod quadrature;
pub mod special_fn;
pub mod verifier;
