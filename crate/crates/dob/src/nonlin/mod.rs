//! Saturated disturbance observer for nonlinear plants in normal form,
//! with closed-loop simulation against the nominal design and the
//! transient-recovery metrics.

pub mod dob;
pub mod field;
pub mod plant;
pub mod sat;
pub mod sim;
pub mod sphi;

pub use dob::{dob_derivatives, DobDerivatives, DobParams};
pub use field::{Coefficient, PolynomialField, Term};
pub use plant::{BaselineController, Envelope, NominalModel, NormalFormPlant};
pub use sat::smooth_sat;
pub use sim::{
    extract_nominal_trace, nonlinear_loop_rhs, run_transient_metrics, simulate_nonlinear,
    transient_deviation, transient_tau_sweep, u_desired_oracle, LoopSignals, TransientDeviation,
    TransientMetrics,
};
pub use sphi::{estimate_s_phi, SPhiEstimate};
