//! Chain metrization of finite quasi-metric spaces.
//!
//! A quasi-metric is a symmetric, positive-definite distance function that
//! satisfies `ρ(x,z) ≤ K·max(ρ(x,y), ρ(y,z))` for some `K ≥ 1`. The chain
//! construction replaces `ρ(x,z)` by the cheapest sum of `ρ` along any finite
//! sequence of points joining `x` to `z`. When `K ≤ 2` the result is a metric
//! within a factor `2K` of `ρ`; for larger `K` it can collapse distinct points
//! to distance zero.
//!
//! The crate is organised as follows:
//!
//! * [`qcore`] holds finite spaces, axiom validation, the quasi-metric
//!   constants and the snowflake transform.
//! * [`metrize`] computes the chain closure, checks the `(1/2K)ρ ≤ d ≤ ρ`
//!   bounds, and provides a brute-force chain oracle.
//! * [`dyadic`] builds, with exact rational arithmetic, the dyadic space on
//!   `[0,1]` whose chain closure tends to zero while every triangle stays
//!   within a factor `(1−a)/a` of the triangle inequality.
//! * [`harness`] drives the experiments and generates random test spaces.
//! * [`cli`] is the command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod dyadic;
pub mod harness;
pub mod metrize;
pub mod qcore;

pub use qcore::{AnySpace, Mode, QuasiMetricSpace, Rational, Scalar, SpaceError};
