//! Exact computation of intermediate sums over rational polytopes.
//!
//! An intermediate sum interpolates between counting lattice points of a
//! polytope and integrating over it: a rational subspace `L` is fixed, the
//! polytope is sliced along affine translates of `L` through points of the
//! projected lattice, and each slice is integrated exactly. This crate
//! computes the associated meromorphic generating functions of simplicial
//! affine cones and polytopes (`genfun`), the signed cone decompositions they
//! are built from (`conedecomp`), and the closed-form quasi-polynomials in
//! `t` — with fractional-part "step" coefficients valid for *real* dilation
//! `t > 0` — that the dilated sums obey (`ehrhart`). Everything is exact
//! arbitrary-precision rational arithmetic; a deliberately naive `oracle`
//! module recomputes small instances from the definition for cross-checking.

pub mod conedecomp;
pub mod ehrhart;
pub mod error;
pub mod exactlin;
pub mod genfun;
pub mod oracle;

pub use error::{Error, Result};
pub use exactlin::{Int, IntMat, IntVec, LatticeBasis, Rat, RatMat, RatVec};
