//! Values of finite deterministic zero-sum dynamic games, and certificates
//! that long-run-average guarantees transfer to discounted play (and back)
//! uniformly in the starting state.
//!
//! The crate has three layers:
//!
//! - **Arena and play** ([`game`], [`mod@format`], [`catalog`]): game specs, pure
//!   feedback policies switched at integer steps, exact simulation, and the
//!   embedding of discrete plays into continuous time.
//! - **Values and means** ([`value`], [`kernel`], [`scalar`]): Bellman
//!   recursions and fixed points for the n-step average and the discounted
//!   family, best responses against published schedules, exact Cesàro and
//!   Abel integrators over embedded plays, and a standalone scalar oracle for
//!   classical sequence means.
//! - **Certificates** ([`certificate`], [`experiment`]): near-optimal
//!   concatenated schedules built from value families, verified against exact
//!   best-response opponents, plus the CSV-producing experiment drivers.
//!
//! Start with the runnable examples (`cargo run --example convergence`) or
//! the thin `tauber` binary.

// `!(x > 0.0)` rejects NaN along with nonpositives; state-indexed loops
// mirror the Bellman recursions they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalog;
pub mod certificate;
pub mod error;
pub mod experiment;
mod fmt;
pub mod format;
pub mod game;
pub mod kernel;
pub mod scalar;
pub mod value;

pub use error::{Error, Result};
