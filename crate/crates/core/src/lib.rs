//! Simulation of non-local optical vortices in the two-photon phase space of
//! spontaneous parametric down-conversion.
//!
//! The pipeline: a Hermite-Gaussian pump `HG_nm` is transferred to the
//! biphoton amplitude, which factorizes into two diagonal HG modes living in
//! non-local planes `(q_x1, q_x2)` and `(q_y1, q_y2)`. A Fourier transform on
//! photon 2 acts as a distributed HG to LG mode converter, leaving vortices of
//! charge `n` and `m` in the `(q_x1, x_2)` and `(q_y1, y_2)` planes. The
//! vortices are verified by winding numbers, doughnut-shaped coincidence maps
//! and a simulated double-slit fringe-shift measurement.

pub mod algebra;
pub mod biphoton;
pub mod checks;
pub mod config;
pub mod error;
pub mod experiment;
pub mod export;
pub mod fourier;
pub mod grid;
pub mod modes;
pub mod special;
pub mod vortex;

pub use error::{Error, Result};
pub use grid::{Axis, AxisKind, Field2D};
pub use modes::{BeamParams, LGIndex, Mode, ModeIndex};
