//! Constructive approximation in the disc algebra.
//!
//! Starting from an analytic polynomial `f`, the pipeline in [`constructor`]
//! produces a function `h` whose boundary real part is piecewise linear with
//! steep slopes everywhere, so that every angle admits a steep forward
//! difference quotient. Every step carries an `ℓ¹` certificate bounding the
//! sup-norm distance `‖f − h‖∞`.
//!
//! * [`trig_series`]: sparse two-sided Fourier series on the circle.
//! * [`boundary_pl`]: periodic piecewise-linear functions, the sawtooth and
//!   closed-form Fourier coefficients.
//! * [`conjugator`]: the harmonic conjugate as the multiplier `−i·sign(k)`.
//! * [`nd_verifier`]: difference-quotient witnesses and margins.
//! * [`constructor`]: the density construction, its rotated variant and the
//!   multi-level chain.

pub mod boundary_pl;
pub mod conjugator;
pub mod constants;
pub mod constructor;
mod error;
pub mod nd_verifier;
pub mod trig_series;

pub use boundary_pl::{LayeredPl, PiecewiseLinearPeriodic, PlFunction, SawtoothParams, SmoothPeriodicFn};
pub use conjugator::ConjugatePair;
pub use constants::Constants;
pub use constructor::{ConstructOptions, ConstructionReport, LevelSchedule, NodePolicy};
pub use error::{DiscError, Result};
pub use nd_verifier::{MembershipCertificate, Witness};
pub use num_complex::Complex64;
pub use trig_series::{DiscPoint, TrigSeries};
