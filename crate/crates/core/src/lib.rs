//! Geodesics on cones in Euclidean 3-space.
//!
//! The crate constructs space curves on cones `C(t, u) = u·y(t)` over
//! unit-speed spherical base curves, classifies them (rectifying curves,
//! origin-centered spherical curves, slant helices, planar curves) and
//! verifies geodesy with independent numerical oracles: geodesic curvature,
//! the Clairaut invariant `u²·dt/ds`, the cone's isometric development into
//! the plane, and direct integration of the geodesic equations.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cone;
pub mod curve;
pub mod error;
pub mod geodesic;
pub mod io;
pub mod jet;
pub mod tolerance;

pub use error::{GeomError, Result};
pub use jet::{CurveJet, Jet, Vec3};
