//! Error budgeting for SNAIL-coupled qubit modules.
//!
//! The crate turns device parameters into three things:
//!
//! * worst-case spectator-limited two-qubit gate fidelity under amplitude
//!   damping ([`dynamics`]),
//! * fidelity surfaces over pump amplitude and conversion separation and the
//!   minimum separation meeting a fidelity target ([`sweep`]),
//! * a qubit frequency allocation that maximizes the minimum separation of
//!   the conversion frequencies inside a bandwidth ([`allocation`]).
//!
//! The linear algebra and dynamics are generic over [`Real`] (`f32`/`f64`);
//! the aliases below fix the `f64` instantiation used everywhere else.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod budget;
pub mod dynamics;
mod error;
pub mod operators;
pub mod params;
mod scalar;
pub mod sweep;

pub use error::{ConfigError, Error, Result};
pub use params::{
    to_angular, Band, Config, DeviceParams, GateKind, GateSpec, SeparationConstraints,
    SpectatorModel, SweepSettings,
};
pub use scalar::{Cx, Real};

/// Dense complex matrix in double precision.
pub type ComplexMatrix = operators::CMatrix<f64>;
/// Single-precision complex matrix.
pub type ComplexMatrix32 = operators::CMatrix<f32>;
/// Double-precision gate simulation result.
pub type GateResult = dynamics::GateResult<f64>;
/// Double-precision Lindblad problem.
pub type LindbladModel = dynamics::LindbladModel<f64>;
