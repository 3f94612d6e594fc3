//! Sequential-explicit solvers on structured Cartesian grids.
//!
//! The crate implements a family of "update one half of the variables, then
//! the other half with the fresh values" schemes for Maxwell's equations,
//! linear acoustics and the compressible Euler equations, together with the
//! discrete Fourier (von Neumann) machinery needed to find their exact
//! stability limits, the mimetic invariants they conserve, and a set of
//! standard flow cases for end-to-end validation.
//!
//! Module map:
//!
//! * [`seqexp`]: the two-variable ODE picture of sequential-explicit
//!   stepping, amplification matrices, conserved quadratic form.
//! * [`grid`], [`bracket`]: structured grids with ghost layers, staggered
//!   field storage, and the jump/average stencil algebra.
//! * [`poly`], [`cmat`]: complex polynomials and small complex matrices
//!   (characteristic polynomials, root finding, unit-disk tests).
//! * [`stability`]: Fourier symbols and amplification matrices per scheme,
//!   spectral radii, exact step-size limits in 2D and 3D.
//! * [`maxwell`], [`maxwell3d`]: field steppers for the transverse-magnetic
//!   2D system and the full 3D system, with conserved divergences and the
//!   two-level energy.
//! * [`acoustics`]: the same steppers read as linear acoustics, with the
//!   conserved discrete vorticity and stationary kernel fields.
//! * [`euler`], [`euler_lin`]: the all-speed Euler scheme with extended
//!   fluxes, and its frozen-coefficient linearization for stability maps.
//! * [`riemann`]: exact Riemann solutions for shock-tube references.
//! * [`compression`]: one-dimensional flux-form transport variants under a
//!   prescribed compressive velocity field.
//! * [`cases`]: initial data and diagnostics for the standard test flows.
//! * [`output`], [`config`], [`cli`]: text output (tables, grid files, plot
//!   scripts), key=value run configuration, and the command-line front end.

pub mod acoustics;
pub mod bracket;
pub mod cases;
pub mod cli;
pub mod config;
pub mod cmat;
pub mod compression;
pub mod euler;
pub mod euler_lin;
pub mod grid;
pub mod maxwell;
pub mod maxwell3d;
pub mod output;
pub mod poly;
pub mod riemann;
pub mod scheme;
pub mod seqexp;
pub mod stability;
