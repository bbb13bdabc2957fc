//! Parametric reduced-order modeling with dynamic mode decomposition.
//!
//! The crate learns linear surrogate dynamics from time-series snapshots of
//! parametric PDEs and predicts full-state transients at unseen parameter
//! values through three schemes: stacked DMD, reduced eigen-pair
//! interpolation (rEPI), and reduced Koopman operator interpolation (rKOI).
//! Full-order finite-volume solvers for three benchmark problems generate
//! the snapshot data, and a binary snapshot format plus manifest files make
//! long runs resumable and bit-reproducible.

pub mod dmd;
pub mod error;
pub mod linalg;
pub mod parametric;
mod par;
pub mod snapshot;

pub use error::{Diagnostic, Error, Result};
pub use par::configure_threads;
