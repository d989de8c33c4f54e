//! Staggered-time (leapfrog) discretizations of wave-type systems together
//! with their modified discrete conserved quantities.
//!
//! The crate covers, from the bottom up:
//!
//! - [`oscillator`]: the scalar harmonic oscillator (leapfrog, direct
//!   second-order recursion, Crank–Nicolson).
//! - [`ode_system`]: the skew system `f' = A g`, `g' = -Aᵀ f` for a dense,
//!   possibly rectangular and singular `A`.
//! - [`wave1d`]: the 1D space-time staggered wave equation on a periodic grid.
//! - [`mimetic3d`]: the primal/dual grid operator calculus (`G`, `R`, `D`,
//!   their starred duals, material multiplications, weighted inner products).
//! - [`scalarwave3d`] and [`maxwell3d`]: leapfrog schemes built on that calculus.
//! - [`positivity1d`]: mass- and positivity-preserving transport and diffusion.
//! - [`diagnostics`]: conserved-quantity ledgers, drift statistics,
//!   convergence orders and stability probes.
//! - [`config`] and [`runner`]: JSON scenario configuration and the scenario
//!   runner behind the `mimetic` binary.
//!
//! Every leapfrog module exposes a pair of conserved quantities evaluated on a
//! [window](oscillator::OscWindow) of consecutive states: for states at steps
//! `n` and `n + 1`, `CHalf` is evaluated at level `n + 1/2` and `Cn` at level
//! `n + 1`.

pub mod config;
pub mod diagnostics;
mod error;
pub mod linalg;
pub mod maxwell3d;
pub mod mimetic3d;
pub mod ode_system;
pub mod oscillator;
pub mod positivity1d;
pub mod runner;
pub mod scalarwave3d;
pub mod wave1d;

pub use error::{Error, Result};
