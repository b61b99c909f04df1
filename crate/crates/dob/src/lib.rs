//! Design and verification toolkit for disturbance-observer (DOB) based
//! robust control.
//!
//! The toolkit covers the full workflow around an inner-loop disturbance
//! observer wrapped around a stabilizing baseline controller:
//!
//! * [`poly`], [`tf`], [`ss`]: the small linear-systems algebra everything
//!   else stands on (polynomials with reliable root finding, transfer
//!   functions that never cancel common factors, state-space realizations
//!   and the observer loop interconnection).
//! * [`qfilter`]: Q-filter synthesis, the gain-robust Hurwitz condition on
//!   the fast dynamics, and the Nyquist disk test that certifies it over a
//!   whole gain interval.
//! * [`family`], [`analysis`]: interval plant families, minimum-phase
//!   certificates, robust-stability verification, eigenvalue sweeps over
//!   the family, and the two-time-scale pole asymptotics as the filter
//!   constant tau shrinks.
//! * [`signal`], [`trace`], [`linsim`]: time-domain simulation of the
//!   linear loop and frequency-domain checks of nominal-performance
//!   recovery.
//! * [`nonlin`]: the saturated nonlinear disturbance observer for plants in
//!   normal form, its co-simulation against the nominal loop, and the
//!   transient-deviation metrics.
//! * [`benchmarks`]: the frozen fixtures the regression suite runs on.
//! * [`cli`]: the `dob` command-line front end.

pub mod analysis;
pub mod benchmarks;
pub mod cli;
pub mod error;
pub mod family;
pub mod linsim;
pub mod nonlin;
pub mod poly;
pub mod qfilter;
pub mod signal;
pub mod ss;
pub mod tf;
pub mod trace;

pub use error::{Error, Result};
