//! Time-domain simulation of the linear loop and frequency-domain
//! verification of nominal-performance recovery.

use crate::error::{Error, Result};
use crate::qfilter::{q_transfer, QFilterSpec};
use crate::signal::SignalSpec;
use crate::ss::{closed_loop_statespace, StateSpace};
use crate::tf::TransferFunction;
use crate::trace::SimulationTrace;
use nalgebra::DVector;
use serde::Serialize;

const DIVERGENCE_LIMIT: f64 = 1e9;

/// Fixed-step RK4 integration of the loop state space driven by (r, d, n),
/// from zero initial state. Rejects unstable loops and steps the fastest
/// mode cannot tolerate instead of producing a silently wrong trace.
pub fn simulate_linear(
    loop_ss: &StateSpace,
    r: &SignalSpec,
    d: &SignalSpec,
    n: &SignalSpec,
    t_end: f64,
    dt: f64,
) -> Result<SimulationTrace> {
    r.validate()?;
    d.validate()?;
    n.validate()?;
    if dt <= 0.0 || t_end <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "dt".into(),
            reason: "dt and t_end must be positive".into(),
        });
    }
    if loop_ss.n_inputs() != 3 {
        return Err(Error::InvalidParameter {
            field: "loop".into(),
            reason: format!("expected 3 inputs (r, d, n), got {}", loop_ss.n_inputs()),
        });
    }
    let eigs = loop_ss.eigenvalues();
    let lambda_max = eigs.iter().map(|l| l.norm()).fold(0.0, f64::max);
    if lambda_max * dt > 0.5 {
        return Err(Error::StepTooLarge { dt, lambda_max });
    }
    let max_re = eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    if max_re > 1e-9 * lambda_max.max(1.0) {
        return Err(Error::UnstableLoop { real_part: max_re });
    }

    let steps = (t_end / dt).round() as usize;
    let k = loop_ss.order();
    let n_out = loop_ss.n_outputs();

    let inputs_at = |t: f64| DVector::from_vec(vec![r.eval(t), d.eval(t), n.eval(t)]);
    let deriv = |x: &DVector<f64>, u: &DVector<f64>| &loop_ss.a * x + &loop_ss.b * u;

    let mut t_axis = Vec::with_capacity(steps + 1);
    let mut outputs: Vec<Vec<f64>> = vec![Vec::with_capacity(steps + 1); n_out];
    let mut r_col = Vec::with_capacity(steps + 1);
    let mut d_col = Vec::with_capacity(steps + 1);
    let mut n_col = Vec::with_capacity(steps + 1);
    let mut states: Vec<Vec<f64>> = vec![Vec::with_capacity(steps + 1); k];
    let mut max_abs_u: f64 = 0.0;

    let mut x = DVector::<f64>::zeros(k);
    for i in 0..=steps {
        let t = i as f64 * dt;
        let u_now = inputs_at(t);
        let y = &loop_ss.c * &x + &loop_ss.d * &u_now;
        t_axis.push(t);
        for (j, col) in outputs.iter_mut().enumerate() {
            col.push(y[j]);
        }
        if n_out >= 2 {
            max_abs_u = max_abs_u.max(y[1].abs());
        }
        r_col.push(u_now[0]);
        d_col.push(u_now[1]);
        n_col.push(u_now[2]);
        for (j, col) in states.iter_mut().enumerate() {
            col.push(x[j]);
        }

        if x.norm() > DIVERGENCE_LIMIT {
            return Err(Error::Divergence {
                t,
                state_norm: x.norm(),
                max_abs_u,
            });
        }
        if i == steps {
            break;
        }

        let u_half = inputs_at(t + 0.5 * dt);
        let u_full = inputs_at(t + dt);
        let k1 = deriv(&x, &u_now);
        let k2 = deriv(&(&x + &k1 * (0.5 * dt)), &u_half);
        let k3 = deriv(&(&x + &k2 * (0.5 * dt)), &u_half);
        let k4 = deriv(&(&x + &k3 * dt), &u_full);
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }

    let mut trace = SimulationTrace::new(t_axis);
    let out_names = ["y", "u"];
    for (j, col) in outputs.into_iter().enumerate() {
        let name = out_names
            .get(j)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("y{}", j + 1));
        trace.push_column(name, col)?;
    }
    trace.push_column("r", r_col)?;
    trace.push_column("d", d_col)?;
    trace.push_column("n", n_col)?;
    for (j, col) in states.into_iter().enumerate() {
        trace.push_column(format!("x{}", j + 1), col)?;
    }
    Ok(trace)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RecoveryRow {
    pub omega: f64,
    /// |Pn C / (1 + Pn C)|, the reference response the loop should recover.
    pub nominal_mag: f64,
    /// |T_yr - Pn C / (1 + Pn C)|.
    pub yr_deviation: f64,
    /// |T_yd|, the residual disturbance-to-output gain.
    pub yd_mag: f64,
    /// |Pn / (1 + Pn C)|, the scale against which yd_mag should vanish.
    pub nominal_sensitivity_mag: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveryReport {
    pub tau: f64,
    pub rows: Vec<RecoveryRow>,
}

/// Evaluates the exact closed-loop transfer functions
///
/// ```text
/// T_yr = Pn P C / Delta      T_yd = Pn P (1 - Q) / Delta
/// Delta = Pn (1 + P C) + Q (P - Pn)
/// ```
///
/// against the nominal target Pn C / (1 + Pn C) at each probe frequency.
/// Everything is computed by polynomial algebra over one common
/// denominator, so common factors never cancel incorrectly.
pub fn recovery_report(
    p: &TransferFunction,
    pn: &TransferFunction,
    c: &TransferFunction,
    qspec: &QFilterSpec,
    omega_probe: &[f64],
) -> Result<RecoveryReport> {
    let q = q_transfer(qspec)?;
    let loop_ss = closed_loop_statespace(p, pn, c, &q)?;
    let worst = loop_ss.max_eigenvalue_real_part();
    if worst >= 0.0 {
        return Err(Error::UnstableLoop { real_part: worst });
    }

    let (np, dp) = (&p.num, &p.den);
    let (nn, dn) = (&pn.num, &pn.den);
    let (nc, dc) = (&c.num, &c.den);
    let (nq, dq) = (&q.num, &q.den);

    // Delta scaled by dn dp dc dq; the same scale divides every numerator.
    let delta_num = nn
        .mul(&dp.mul(dc).add(&np.mul(nc)))
        .mul(dq)
        .add(&nq.mul(&np.mul(dn).sub(&nn.mul(dp))).mul(dc));
    let yr_num = nn.mul(np).mul(nc).mul(dq);
    let yd_num = nn.mul(np).mul(&dq.sub(nq)).mul(dc);
    // nominal loop: Pn C / (1 + Pn C) and Pn / (1 + Pn C)
    let nom_den = dn.mul(dc).add(&nn.mul(nc));
    let nom_num = nn.mul(nc);
    let sens_num = nn.mul(dc);

    let mut rows = Vec::with_capacity(omega_probe.len());
    for &omega in omega_probe {
        if omega < 0.0 {
            return Err(Error::InvalidParameter {
                field: "omega_probe".into(),
                reason: "frequencies must be nonnegative".into(),
            });
        }
        let s = num_complex::Complex64::new(0.0, omega);
        let delta = delta_num.eval(s);
        let nom_d = nom_den.eval(s);
        let t_yr = yr_num.eval(s) / delta;
        let t_yd = yd_num.eval(s) / delta;
        let t_nom = nom_num.eval(s) / nom_d;
        let sens = sens_num.eval(s) / nom_d;
        rows.push(RecoveryRow {
            omega,
            nominal_mag: t_nom.norm(),
            yr_deviation: (t_yr - t_nom).norm(),
            yd_mag: t_yd.norm(),
            nominal_sensitivity_mag: sens.norm(),
        });
    }
    Ok(RecoveryReport {
        tau: qspec.tau,
        rows,
    })
}
