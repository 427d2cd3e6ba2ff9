//! Stochastic-electrodynamics model of a bound electron.
//!
//! The electron is a radiation-damped harmonic oscillator driven by a
//! random-phase realization of the zero-point electromagnetic field. On top
//! of that sit the stochastic-mechanics tools (action fields, current and
//! osmotic velocities, walker ensembles, Madelung residuals), the dispersion
//! algebra of the uncertainty relations, and the uncertainty-based ground
//! state of an H-like atom.
//!
//! Module map:
//!
//! - [`vacuum_field`]: mode synthesis and field evaluation.
//! - [`oscillator`]: susceptibility, closed-form and time-domain trajectories,
//!   commutator mode sum, zero-point dispersions.
//! - [`nelson`]: wavefunction/action decomposition, walker SDE, residuals.
//! - [`uncertainty`]: mean/fluctuation split and angular-momentum algebra.
//! - [`hydrogen`]: uncertainty energy functional and its minimum.
//! - [`config`] and [`experiments`]: the `sedsim` harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod config;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod hydrogen;
pub mod nelson;
pub mod oscillator;
pub mod output;
pub mod rng;
pub mod uncertainty;
pub mod units;
pub mod vacuum_field;
pub mod vec3;

pub use error::{Error, Result};
pub use vec3::Vec3;
