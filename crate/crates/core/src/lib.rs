//! Coherent quantum guessing game.
//!
//! Bob prepares a probe state of dimension `B` and sends it to Alice. Alice
//! holds a control register of dimension `A` whose amplitudes select, through
//! a controlled unitary, which of her `A` projective measurements is applied.
//! She measures, obtains an outcome `a`, and forwards the control register to
//! Bob, who measures it and guesses `a`.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: small dense complex vectors and matrices.
//! - [`measurements`]: projective measurements, the qubit parameterisation and
//!   mutually unbiased bases in prime dimension.
//! - [`game`]: joint state, post-selected ensemble, guessing probabilities and
//!   a seeded Monte-Carlo round simulator.
//! - [`qubit_solver`]: closed-form perfect probe for any set of qubit
//!   measurements, uniform or weighted.
//! - [`explorer`]: higher-dimensional experiments (probe optimisation, the
//!   qutrit three-basis impossibility, special constructions).

pub mod error;
pub mod explorer;
pub mod game;
pub mod linalg;
pub mod measurements;
pub mod qubit_solver;
pub mod tol;

pub use error::{Error, Result};
pub use game::{GameInstance, GuessBasis, PostSelectedEnsemble};
pub use linalg::{GramMatrix, StateVector, UnitaryMatrix, C64};
pub use measurements::{MeasurementSet, ProjectiveMeasurement, QubitMeasurementParams};
pub use qubit_solver::QubitSolution;
