//! A first-order finite-volume solver for the one-dimensional compressible
//! Euler equations built around a Lagrange-flux interface construction:
//! interface pressures carry a pseudo-viscosity term that switches on under
//! compression and guarantees non-negative entropy production at every cell
//! interface, in closed form (no iterative Riemann solves in the flux).
//!
//! The crate is organized by role:
//!
//! * [`euler`] — state vectors, ideal-gas thermodynamics, entropy pair,
//!   physical flux;
//! * [`flux`] — the interface resolution (`u*`, `p̃₊`, `p̃₋`, `p*`, `q*`,
//!   `π₊`, `π₋`) and the numerical flux assembled from it;
//! * [`solver`] — uniform grid, boundary conditions, CFL time step, forward
//!   Euler update loop and per-step diagnostics (conservation totals,
//!   entropy residuals);
//! * [`riemann`] — an exact Riemann solver used as the reference solution
//!   for shock-tube runs and convergence studies;
//! * [`config`] — run configuration, defaults, and the flat `key = value`
//!   config-file format;
//! * [`output`] — CSV snapshot/convergence writers and the matching reader;
//! * [`plot`] — deterministic SVG line plots of snapshot columns.
//!
//! The `lagflux` binary wires these together behind `run` and `convergence`
//! subcommands.

pub mod config;
pub mod euler;
pub mod flux;
pub mod output;
pub mod plot;
pub mod riemann;
pub mod solver;
