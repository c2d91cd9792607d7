//! Validated numerics for periodic solutions of Wright's delay equation
//! `y'(t) = -alpha * y(t-1) * (1 + y(t))`.
//!
//! Periodic orbits are represented by their frequency and Fourier
//! coefficients. Regions of that space are enclosed in cubes, and a
//! Krawczyk-type operator combined with analytic tail estimates either proves
//! a unique zero per parameter value, excludes zeros, or shrinks the cube.

// Negated comparisons reject NaN inputs, index loops mirror the sums they
// evaluate, and interval division is fallible so it cannot be `Div`.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::should_implement_trait)]

pub mod error;
pub mod functional;
pub mod interval;
pub mod krawczyk;
pub mod oracle;
pub mod pipeline;
pub mod prune;
pub mod search;
pub mod seed_cover;
pub mod sequence;

pub use error::{Error, Result};
pub use interval::{ComplexInterval, Interval, IntervalMatrix};
