//! Quantum guessing games where part of the answer space is ruled out by
//! classical information arriving after the measurement.
//!
//! The crate computes exact success probabilities for measurements that
//! ignore the side information ("standard") and for measurements optimized
//! in anticipation of it ("anticipative"), derives and certifies the optimal
//! anticipative measurement of a four-state qubit task through an auxiliary
//! discrimination problem, and simulates the corresponding experiment shot
//! by shot.
//!
//! Modules, bottom-up:
//! - [`bloch`]: qubit operators, measurements and Born tables.
//! - [`game`]: success functionals on probability tables.
//! - [`task`]: the four-state task and its closed forms.
//! - [`solver`]: auxiliary ensemble, enumeration oracle and certificates.
//! - [`sim`]: seeded Monte Carlo with noise.
//! - [`curves`] and [`verify`]: CSV output and the self-check suite.

pub mod bloch;
pub mod curves;
pub mod error;
pub mod game;
pub mod sim;
pub mod solver;
pub mod task;
pub mod verify;

pub use error::{Error, Result};

/// Bounds shared by every label type (inputs, answers, outcomes).
pub trait Label: Clone + PartialEq + std::fmt::Debug {}

impl<T: Clone + PartialEq + std::fmt::Debug> Label for T {}
