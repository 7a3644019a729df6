//! Dynamics of the emotional states of two communicating partners.
//!
//! The model couples two scalar moods `x` and `y` through saturating
//! influence functions:
//!
//! ```text
//! dx/dt = -m1*x + b1 + c1*f1(y)
//! dy/dt = -m2*y + b2 + c2*f2(x)
//! ```
//!
//! Each person relaxes toward an uninfluenced mood `b_i/m_i` at rate `m_i`
//! and is pushed by the partner's mood through `c_i*f_i`. The crate provides
//!
//! - the admissible influence-function family and axiom checks ([`influence`]),
//! - the vector field, Jacobian and invariant box ([`model`]),
//! - fixed-step and adaptive integrators with piecewise-constant parameter
//!   schedules ([`integrate`]),
//! - exhaustive steady-state enumeration and stability classification
//!   ([`equilibria`]),
//! - global-stability certificates, Lyapunov descent checks, separatrix
//!   tracing, basin maps and one-parameter scans ([`analysis`]),
//! - the discrete conversation-round precursor model ([`discrete`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm`
//! feature instead of `std` for that configuration.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("dyad-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod analysis;
pub mod discrete;
pub mod equilibria;
pub mod error;
pub mod influence;
pub mod integrate;
mod math;
pub mod model;

pub use equilibria::{StabilityClass, SteadyState};
pub use error::Error;
pub use influence::{Influence, InfluenceFunction};
pub use integrate::{IntegratorConfig, Method, Trajectory};
pub use model::{ParameterSchedule, Parameters, State};
