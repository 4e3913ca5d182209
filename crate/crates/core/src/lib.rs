//! Coherent control of a single qubit and numerical analysis of its control
//! landscape.
//!
//! The crate propagates `i dU/dt = (H0 + f(t)V) U` exactly for piecewise
//! constant controls, evaluates state-transfer, observable and gate
//! objectives with exact gradients, and provides the tools to certify that
//! such landscapes are trap-free: critical-point classification, analysis of
//! the exceptional constant control `f0`, rank profiles of the generating
//! matrix family and seeded Monte-Carlo sweeps of gradient ascent.
//!
//! ```
//! use qubit_landscape::dynamics::{min_time, ControlGrid, HamiltonianPair};
//! use qubit_landscape::landscape::{ascend, classify, Direction, OptimizerConfig, PointKind, Tolerances};
//! use qubit_landscape::objectives::gates;
//! use qubit_landscape::Objective;
//!
//! let pair = HamiltonianPair::from_pauli([0., 0., 0., 1.], [0., 1., 0., 0.])?;
//! let obj = Objective::gate(gates::hadamard())?;
//! let init = ControlGrid::constant(2.0 * min_time(&pair)?, 64, 0.3)?;
//! let run = ascend(&obj, &pair, &init, &OptimizerConfig::default())?;
//! let point = classify(&obj, &pair, &run.final_control, &Tolerances::default(), Direction::Ascend)?;
//! assert_eq!(point.kind, PointKind::GlobalMax);
//! # Ok::<(), qubit_landscape::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod landscape;
pub mod mat2;
pub mod objectives;

pub use dynamics::{ControlGrid, HamiltonianPair, Trajectory};
pub use error::{Error, Hypothesis, Result};
pub use mat2::CMat2;
pub use objectives::{DensityMatrix, Objective, QuantumState};
