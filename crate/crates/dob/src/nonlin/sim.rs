//! Closed-loop simulation of plant, baseline controller and observer,
//! co-simulated against the nominal loop, plus the transient metrics.
//!
//! Augmented state layout, frozen across the module:
//!
//! ```text
//! [ x (nu) | z (n-nu) | eta (m) | z_bar (n-nu) | q (nu) | p (nu) ]
//! ```
//!
//! The nominal co-simulation runs [ x | z_bar | eta ] started from the
//! same (x, z_bar, eta) values, which is exactly the comparison system of
//! the transient-recovery statement.

use crate::error::{Error, Result};
use crate::nonlin::dob::{dob_derivatives, DobParams};
use crate::nonlin::plant::{BaselineController, Envelope, NominalModel, NormalFormPlant};
use crate::trace::SimulationTrace;
use serde::Serialize;
use std::collections::BTreeMap;

const DIVERGENCE_NORM: f64 = 1e6;
/// Metrics that should ignore the initial peaking layer start after this
/// many time constants.
const SETTLE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy)]
struct Layout {
    nu: usize,
    nz: usize,
    m: usize,
}

impl Layout {
    fn total(&self) -> usize {
        3 * self.nu + 2 * self.nz + self.m
    }
    fn x(&self) -> std::ops::Range<usize> {
        0..self.nu
    }
    fn z(&self) -> std::ops::Range<usize> {
        self.nu..self.nu + self.nz
    }
    fn eta(&self) -> std::ops::Range<usize> {
        let o = self.nu + self.nz;
        o..o + self.m
    }
    fn z_bar(&self) -> std::ops::Range<usize> {
        let o = self.nu + self.nz + self.m;
        o..o + self.nz
    }
    fn q(&self) -> std::ops::Range<usize> {
        let o = self.nu + 2 * self.nz + self.m;
        o..o + self.nu
    }
    fn p(&self) -> std::ops::Range<usize> {
        let o = 2 * self.nu + 2 * self.nz + self.m;
        o..o + self.nu
    }
    fn nom_total(&self) -> usize {
        self.nu + self.nz + self.m
    }
    fn nom_z_bar(&self) -> std::ops::Range<usize> {
        self.nu..self.nu + self.nz
    }
    fn nom_eta(&self) -> std::ops::Range<usize> {
        let o = self.nu + self.nz;
        o..o + self.m
    }
}

/// Signals produced alongside the state derivative at one evaluation point.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoopSignals {
    pub y: f64,
    pub u: f64,
    pub u_bar: f64,
    pub phi: f64,
    pub w: f64,
    pub u_desired: f64,
    pub d: f64,
}

/// The control the plant would need for exact nominal behavior, computed
/// from the true fields and disturbance. Test-side oracle; the controller
/// itself never sees these quantities.
pub fn u_desired_oracle(
    x: &[f64],
    z: &[f64],
    z_bar: &[f64],
    u_bar: f64,
    plant: &NormalFormPlant,
    nominal: &NominalModel,
    t: f64,
) -> Result<f64> {
    let mut xz = Vec::with_capacity(x.len() + z.len());
    xz.extend_from_slice(x);
    xz.extend_from_slice(z);
    let g = plant.g_value(&xz, &plant.theta);
    if g <= 0.0 {
        return Err(Error::NonPositiveGain { g });
    }
    let f = plant.f_value(&xz, &plant.theta);
    let mut x_zbar = Vec::with_capacity(x.len() + z_bar.len());
    x_zbar.extend_from_slice(x);
    x_zbar.extend_from_slice(z_bar);
    let f_n = nominal.f_n_value(&x_zbar);
    let g_n = nominal.g_n_value(&x_zbar);
    Ok(-plant.d.eval(t) + (-f + f_n + g_n * u_bar) / g)
}

/// Derivative of the full augmented state, exposed so tests can probe the
/// loop as a vector field (the linear-consistency oracle linearizes it by
/// evaluating at basis vectors).
pub fn nonlinear_loop_rhs(
    plant: &NormalFormPlant,
    nominal: &NominalModel,
    controller: &BaselineController,
    params: &DobParams,
    state: &[f64],
    t: f64,
) -> Result<(Vec<f64>, LoopSignals)> {
    let layout = Layout {
        nu: plant.nu,
        nz: plant.n - plant.nu,
        m: controller.order(),
    };
    if state.len() != layout.total() {
        return Err(Error::InvalidParameter {
            field: "state".into(),
            reason: format!("expected {} states, got {}", layout.total(), state.len()),
        });
    }
    let x = &state[layout.x()];
    let z = &state[layout.z()];
    let eta = &state[layout.eta()];
    let z_bar = &state[layout.z_bar()];
    let q = &state[layout.q()];
    let p = &state[layout.p()];

    let y = x[0];
    let u_bar = controller.output(eta, y);
    let dob = dob_derivatives(z_bar, q, p, y, u_bar, params, nominal)?;

    let d = plant.d.eval(t);
    let d_z = plant.d_z.eval(t);
    let xz = &state[..plant.n];
    let f = plant.f_value(xz, &plant.theta);
    let g = plant.g_value(xz, &plant.theta);

    let mut deriv = vec![0.0; layout.total()];
    for i in 0..layout.nu - 1 {
        deriv[i] = x[i + 1];
    }
    deriv[layout.nu - 1] = f + g * (dob.u + d);
    if layout.nz > 0 {
        let mut xzd = Vec::with_capacity(plant.n + 1);
        xzd.extend_from_slice(xz);
        xzd.push(d_z);
        for (slot, h) in deriv[layout.z()].iter_mut().zip(&plant.h) {
            *slot = h.eval(&xzd, &plant.theta);
        }
    }
    let deta = controller.derivatives(eta, y);
    deriv[layout.eta()].copy_from_slice(&deta);
    deriv[layout.z_bar()].copy_from_slice(&dob.dz_bar);
    deriv[layout.q()].copy_from_slice(&dob.dq);
    deriv[layout.p()].copy_from_slice(&dob.dp);

    let u_desired = u_desired_oracle(x, z, z_bar, u_bar, plant, nominal, t)?;
    Ok((
        deriv,
        LoopSignals {
            y,
            u: dob.u,
            u_bar,
            phi: dob.phi,
            w: dob.w,
            u_desired,
            d,
        },
    ))
}

fn nominal_loop_rhs(
    nominal: &NominalModel,
    controller: &BaselineController,
    layout: &Layout,
    state: &[f64],
) -> Vec<f64> {
    let x = &state[..layout.nu];
    let eta = &state[layout.nom_eta()];
    let y = x[0];
    let u_bar = controller.output(eta, y);
    let x_zbar = &state[..layout.nu + layout.nz];

    let mut deriv = vec![0.0; layout.nom_total()];
    for i in 0..layout.nu - 1 {
        deriv[i] = x[i + 1];
    }
    deriv[layout.nu - 1] = nominal.f_n_value(x_zbar) + nominal.g_n_value(x_zbar) * u_bar;
    for (slot, h) in deriv[layout.nom_z_bar()].iter_mut().zip(&nominal.h_n) {
        *slot = h.eval(x_zbar, &nominal.theta);
    }
    let deta = controller.derivatives(eta, y);
    deriv[layout.nom_eta()].copy_from_slice(&deta);
    deriv
}

struct Frame<'a> {
    i: usize,
    t: f64,
    state: &'a [f64],
    nom: &'a [f64],
    signals: LoopSignals,
    dev: f64,
}

#[allow(clippy::too_many_arguments)]
fn integrate(
    plant: &NormalFormPlant,
    nominal: &NominalModel,
    controller: &BaselineController,
    params: &DobParams,
    envelope: &Envelope,
    x0zeta: &[f64],
    dob0: &[f64],
    t_end: f64,
    dt: f64,
    mut on_sample: impl FnMut(&Frame),
) -> Result<()> {
    plant.validate()?;
    nominal.validate_for(plant)?;
    controller.validate()?;
    params.validate()?;
    envelope.validate()?;
    let layout = Layout {
        nu: plant.nu,
        nz: plant.n - plant.nu,
        m: controller.order(),
    };
    if params.qspec.nu != plant.nu {
        return Err(Error::InvalidParameter {
            field: "qspec.nu".into(),
            reason: "filter relative degree must match the plant".into(),
        });
    }
    let tau = params.qspec.tau;
    if dt <= 0.0 || t_end <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "dt".into(),
            reason: "dt and t_end must be positive".into(),
        });
    }
    if dt > tau / 20.0 * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge {
            dt,
            lambda_max: 1.0 / tau,
        });
    }
    if x0zeta.len() != plant.n + layout.m {
        return Err(Error::InvalidParameter {
            field: "x0z0eta0".into(),
            reason: format!("expected {} values", plant.n + layout.m),
        });
    }
    if envelope.s0.len() == x0zeta.len() {
        for (i, (&v, b)) in x0zeta.iter().zip(&envelope.s0).enumerate() {
            if v < b[0] || v > b[1] {
                return Err(Error::InvalidParameter {
                    field: format!("x0z0eta0[{i}]"),
                    reason: format!("{v} outside the initial-condition box"),
                });
            }
        }
    }
    let dob_len = layout.nz + 2 * layout.nu;
    let dob0_full: Vec<f64> = if dob0.is_empty() {
        vec![0.0; dob_len]
    } else if dob0.len() == dob_len {
        dob0.to_vec()
    } else {
        return Err(Error::InvalidParameter {
            field: "dob0".into(),
            reason: format!("expected {dob_len} observer states (z_bar, q, p)"),
        });
    };

    let mut state = vec![0.0; layout.total()];
    state[..plant.n].copy_from_slice(&x0zeta[..plant.n]);
    state[layout.eta()].copy_from_slice(&x0zeta[plant.n..]);
    state[layout.z_bar().start..].copy_from_slice(&dob0_full);

    let mut nom = vec![0.0; layout.nom_total()];
    nom[..layout.nu].copy_from_slice(&state[layout.x()]);
    let zb = layout.z_bar();
    let (zb_s, zb_e) = (zb.start, zb.end);
    nom[layout.nom_z_bar()].copy_from_slice(&state[zb_s..zb_e]);
    let eta_r = layout.eta();
    let (eta_s, eta_e) = (eta_r.start, eta_r.end);
    nom[layout.nom_eta()].copy_from_slice(&state[eta_s..eta_e]);

    let steps = (t_end / dt).round() as usize;
    let mut max_abs_u: f64 = 0.0;

    let axpy = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, v)| b + s * v).collect()
    };

    for i in 0..=steps {
        let t = i as f64 * dt;
        let (k1, signals) = nonlinear_loop_rhs(plant, nominal, controller, params, &state, t)?;
        max_abs_u = max_abs_u.max(signals.u.abs());

        let dev = {
            let mut acc = 0.0;
            for (j, jn) in layout
                .x()
                .zip(0..layout.nu)
                .chain(layout.z_bar().zip(layout.nom_z_bar()))
                .chain(layout.eta().zip(layout.nom_eta()))
            {
                let e = state[j] - nom[jn];
                acc += e * e;
            }
            acc.sqrt()
        };
        on_sample(&Frame {
            i,
            t,
            state: &state,
            nom: &nom,
            signals,
            dev,
        });

        let norm = state.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > DIVERGENCE_NORM {
            return Err(Error::Divergence {
                t,
                state_norm: norm,
                max_abs_u,
            });
        }
        if i == steps {
            break;
        }

        let th = t + 0.5 * dt;
        let tf = t + dt;
        let (k2, _) =
            nonlinear_loop_rhs(plant, nominal, controller, params, &axpy(&state, &k1, 0.5 * dt), th)?;
        let (k3, _) =
            nonlinear_loop_rhs(plant, nominal, controller, params, &axpy(&state, &k2, 0.5 * dt), th)?;
        let (k4, _) =
            nonlinear_loop_rhs(plant, nominal, controller, params, &axpy(&state, &k3, dt), tf)?;
        for j in 0..state.len() {
            state[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }

        let l1 = nominal_loop_rhs(nominal, controller, &layout, &nom);
        let l2 = nominal_loop_rhs(nominal, controller, &layout, &axpy(&nom, &l1, 0.5 * dt));
        let l3 = nominal_loop_rhs(nominal, controller, &layout, &axpy(&nom, &l2, 0.5 * dt));
        let l4 = nominal_loop_rhs(nominal, controller, &layout, &axpy(&nom, &l3, dt));
        for j in 0..nom.len() {
            nom[j] += dt / 6.0 * (l1[j] + 2.0 * l2[j] + 2.0 * l3[j] + l4[j]);
        }
    }
    Ok(())
}

/// Full closed-loop simulation with an embedded nominal co-simulation.
///
/// `x0z0eta0` packs (x, z, eta); `dob0` packs (z_bar, q, p) and may be
/// empty for an observer started at rest. The trace carries the loop
/// signals, every state, the nominal co-simulation states under `nom_`
/// prefixes, and the pointwise (x, z_bar, eta) deviation in `dev`.
#[allow(clippy::too_many_arguments)]
pub fn simulate_nonlinear(
    plant: &NormalFormPlant,
    nominal: &NominalModel,
    controller: &BaselineController,
    params: &DobParams,
    envelope: &Envelope,
    x0z0eta0: &[f64],
    dob0: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<SimulationTrace> {
    let layout = Layout {
        nu: plant.nu,
        nz: plant.n - plant.nu,
        m: controller.order(),
    };
    let steps = (t_end / dt).round() as usize + 1;
    let mut t_axis = Vec::with_capacity(steps);
    let n_sig = 7;
    let mut sig_cols: Vec<Vec<f64>> = vec![Vec::with_capacity(steps); n_sig];
    let mut state_cols: Vec<Vec<f64>> = vec![Vec::with_capacity(steps); layout.total()];
    let mut nom_cols: Vec<Vec<f64>> = vec![Vec::with_capacity(steps); layout.nom_total()];
    let mut dev_col = Vec::with_capacity(steps);

    integrate(
        plant, nominal, controller, params, envelope, x0z0eta0, dob0, t_end, dt,
        |frame| {
            t_axis.push(frame.t);
            let s = &frame.signals;
            for (col, v) in sig_cols
                .iter_mut()
                .zip([s.y, s.u, s.u_bar, s.phi, s.w, s.u_desired, s.d])
            {
                col.push(v);
            }
            for (col, &v) in state_cols.iter_mut().zip(frame.state) {
                col.push(v);
            }
            for (col, &v) in nom_cols.iter_mut().zip(frame.nom) {
                col.push(v);
            }
            dev_col.push(frame.dev);
        },
    )?;

    let mut trace = SimulationTrace::new(t_axis);
    for (name, col) in ["y", "u", "u_bar", "phi", "w", "u_desired", "d"]
        .into_iter()
        .zip(sig_cols)
    {
        trace.push_column(name, col)?;
    }
    let mut names: Vec<String> = Vec::with_capacity(layout.total());
    for i in 0..layout.nu {
        names.push(format!("x{}", i + 1));
    }
    for i in 0..layout.nz {
        names.push(format!("z{}", i + 1));
    }
    for i in 0..layout.m {
        names.push(format!("eta{}", i + 1));
    }
    for i in 0..layout.nz {
        names.push(format!("z_bar{}", i + 1));
    }
    for i in 0..layout.nu {
        names.push(format!("q{}", i + 1));
    }
    for i in 0..layout.nu {
        names.push(format!("p{}", i + 1));
    }
    for (name, col) in names.into_iter().zip(state_cols) {
        trace.push_column(name, col)?;
    }
    let mut nom_names: Vec<String> = Vec::with_capacity(layout.nom_total());
    for i in 0..layout.nu {
        nom_names.push(format!("nom_x{}", i + 1));
    }
    for i in 0..layout.nz {
        nom_names.push(format!("nom_z_bar{}", i + 1));
    }
    for i in 0..layout.m {
        nom_names.push(format!("nom_eta{}", i + 1));
    }
    for (name, col) in nom_names.into_iter().zip(nom_cols) {
        trace.push_column(name, col)?;
    }
    trace.push_column("dev", dev_col)?;
    Ok(trace)
}

/// Streaming transient metrics for one run; nothing is retained, so this
/// is the path for fine-tau sweeps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransientMetrics {
    pub tau: f64,
    /// sup over t of the (x, z_bar, eta) deviation from the nominal loop.
    pub sup_dev: f64,
    /// sup of |u - u_desired| after the peaking layer (t > 10 tau).
    pub sup_u_err: f64,
    pub max_abs_u: f64,
    pub z_max: f64,
    /// Range phi visited after the peaking layer; containment inside the
    /// identity region of sat_phi means the dead zone went inactive.
    pub phi_min_settled: f64,
    pub phi_max_settled: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn run_transient_metrics(
    plant: &NormalFormPlant,
    nominal: &NominalModel,
    controller: &BaselineController,
    params: &DobParams,
    envelope: &Envelope,
    x0z0eta0: &[f64],
    dob0: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<TransientMetrics> {
    let tau = params.qspec.tau;
    let settle = SETTLE_FACTOR * tau;
    let z_range = {
        let nu = plant.nu;
        nu..plant.n
    };
    let mut m = TransientMetrics {
        tau,
        sup_dev: 0.0,
        sup_u_err: 0.0,
        max_abs_u: 0.0,
        z_max: 0.0,
        phi_min_settled: f64::INFINITY,
        phi_max_settled: f64::NEG_INFINITY,
    };
    integrate(
        plant, nominal, controller, params, envelope, x0z0eta0, dob0, t_end, dt,
        |frame| {
            m.sup_dev = m.sup_dev.max(frame.dev);
            m.max_abs_u = m.max_abs_u.max(frame.signals.u.abs());
            for &z in &frame.state[z_range.clone()] {
                m.z_max = m.z_max.max(z.abs());
            }
            if frame.t > settle && frame.i > 0 {
                m.sup_u_err = m
                    .sup_u_err
                    .max((frame.signals.u - frame.signals.u_desired).abs());
                m.phi_min_settled = m.phi_min_settled.min(frame.signals.phi);
                m.phi_max_settled = m.phi_max_settled.max(frame.signals.phi);
            }
        },
    )?;
    Ok(m)
}

/// Runs the benchmark at each tau with dt = min(tau/20, 1e-3) and collects
/// the transient metrics in sweep order.
#[allow(clippy::too_many_arguments)]
pub fn transient_tau_sweep(
    plant: &NormalFormPlant,
    nominal: &NominalModel,
    controller: &BaselineController,
    params: &DobParams,
    envelope: &Envelope,
    x0z0eta0: &[f64],
    dob0: &[f64],
    t_end: f64,
    taus: &[f64],
) -> Result<Vec<TransientMetrics>> {
    use rayon::prelude::*;
    taus.par_iter()
        .map(|&tau| {
            let mut p = params.clone();
            p.qspec.tau = tau;
            let dt = (tau / 20.0).min(1e-3);
            run_transient_metrics(
                plant, nominal, controller, &p, envelope, x0z0eta0, dob0, t_end, dt,
            )
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TransientDeviation {
    pub sup_dev: f64,
    pub per_signal: BTreeMap<String, f64>,
}

fn is_recovery_column(name: &str) -> bool {
    for prefix in ["z_bar", "eta", "x"] {
        if let Some(rest) = name.strip_prefix(prefix) {
            return !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit());
        }
    }
    false
}

/// Deviation of (x, z_bar, eta) between a closed-loop trace and a nominal
/// trace on the same time grid. The zero-dynamics state z is deliberately
/// not part of the norm: the recovery statement bounds it but promises no
/// tracking for it.
pub fn transient_deviation(
    trace: &SimulationTrace,
    nominal_trace: &SimulationTrace,
) -> Result<TransientDeviation> {
    if trace.len() != nominal_trace.len() {
        return Err(Error::GridMismatch {
            reason: format!(
                "trace has {} samples, nominal has {}",
                trace.len(),
                nominal_trace.len()
            ),
        });
    }
    for (a, b) in trace.times().iter().zip(nominal_trace.times()) {
        if (a - b).abs() > 1e-12 * (1.0 + a.abs()) {
            return Err(Error::GridMismatch {
                reason: format!("time grids differ at t = {a} vs {b}"),
            });
        }
    }
    let names: Vec<&str> = trace
        .column_names()
        .filter(|n| is_recovery_column(n))
        .collect();
    if names.is_empty() {
        return Err(Error::GridMismatch {
            reason: "trace has no x / z_bar / eta columns".into(),
        });
    }
    let mut pairs = Vec::with_capacity(names.len());
    for name in &names {
        let a = trace.column(name).unwrap();
        let b = nominal_trace.column(name).ok_or_else(|| Error::GridMismatch {
            reason: format!("nominal trace is missing column {name}"),
        })?;
        pairs.push((*name, a, b));
    }
    let mut per_signal: BTreeMap<String, f64> = BTreeMap::new();
    for (name, a, b) in &pairs {
        let sup = a
            .iter()
            .zip(*b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        per_signal.insert((*name).to_string(), sup);
    }
    let mut sup_dev: f64 = 0.0;
    for i in 0..trace.len() {
        let mut acc = 0.0;
        for (_, a, b) in &pairs {
            let e = a[i] - b[i];
            acc += e * e;
        }
        sup_dev = sup_dev.max(acc.sqrt());
    }
    Ok(TransientDeviation {
        sup_dev,
        per_signal,
    })
}

/// Repackages the embedded nominal co-simulation columns (`nom_*`) as a
/// standalone trace comparable with [`transient_deviation`].
pub fn extract_nominal_trace(trace: &SimulationTrace) -> Result<SimulationTrace> {
    let mut out = SimulationTrace::new(trace.times().to_vec());
    let mut found = false;
    let names: Vec<String> = trace.column_names().map(str::to_string).collect();
    for name in names {
        if let Some(plain) = name.strip_prefix("nom_") {
            out.push_column(plain, trace.column(&name).unwrap().to_vec())?;
            found = true;
        }
    }
    if !found {
        return Err(Error::GridMismatch {
            reason: "trace has no nom_ columns to extract".into(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviation_ignores_z() {
        let mut a = SimulationTrace::new(vec![0.0, 1.0]);
        a.push_column("x1", vec![1.0, 2.0]).unwrap();
        a.push_column("z1", vec![5.0, 9.0]).unwrap();
        let mut b = SimulationTrace::new(vec![0.0, 1.0]);
        b.push_column("x1", vec![1.0, 2.0]).unwrap();
        b.push_column("z1", vec![-5.0, 0.0]).unwrap();
        let dev = transient_deviation(&a, &b).unwrap();
        assert_eq!(dev.sup_dev, 0.0);
        assert!(!dev.per_signal.contains_key("z1"));
    }

    #[test]
    fn identical_traces_have_zero_deviation() {
        let mut a = SimulationTrace::new(vec![0.0, 1.0]);
        a.push_column("x1", vec![1.0, 2.0]).unwrap();
        a.push_column("eta1", vec![0.5, 0.25]).unwrap();
        let dev = transient_deviation(&a, &a.clone()).unwrap();
        assert_eq!(dev.sup_dev, 0.0);
    }

    #[test]
    fn grid_mismatch_detected() {
        let mut a = SimulationTrace::new(vec![0.0, 1.0]);
        a.push_column("x1", vec![1.0, 2.0]).unwrap();
        let mut b = SimulationTrace::new(vec![0.0, 0.5]);
        b.push_column("x1", vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            transient_deviation(&a, &b),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn recovery_column_name_filter() {
        assert!(is_recovery_column("x1"));
        assert!(is_recovery_column("z_bar2"));
        assert!(is_recovery_column("eta10"));
        assert!(!is_recovery_column("z1"));
        assert!(!is_recovery_column("x"));
        assert!(!is_recovery_column("nom_x1"));
        assert!(!is_recovery_column("q1"));
    }
}
