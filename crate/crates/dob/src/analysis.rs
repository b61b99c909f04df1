//! Family-wide stability verification and pole asymptotics.
//!
//! The closed loop realized by [`crate::ss::closed_loop_statespace`] has
//! 2n+m+nu states: the extra nu states beyond the transfer-function order
//! come from realizing Q and Pn^{-1}Q separately, and they converge (after
//! scaling by tau) to the roots of the fast characteristic polynomial at
//! the nominal gain. The asymptotics matcher therefore expects 2*nu fast
//! eigenvalues: nu from the loop and nu from that internal realization.

use crate::error::{Error, Result};
use crate::family::{check_minimum_phase, MinimumPhaseReport, PlantFamily, PlantSample};
use crate::qfilter::{fast_char_poly, nyquist_disk_test_auto, q_transfer, DiskTestReport, QFilterSpec};
use crate::ss::closed_loop_statespace;
use crate::tf::TransferFunction;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Stability cutoff used by the grid sweeps. Eigenvalues this close to the
/// imaginary axis count as unstable rather than as numerical luck.
pub const SWEEP_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct NominalLoopCheck {
    pub stable: bool,
    pub poles: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub sample_id: usize,
    pub tau: f64,
    pub max_real_part: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustStabilityReport {
    /// The baseline controller internally stabilizes the nominal plant.
    pub nominal_loop: NominalLoopCheck,
    /// Every family member is minimum phase.
    pub minimum_phase: MinimumPhaseReport,
    /// The fast dynamics stay Hurwitz over the whole gain interval.
    pub disk: DiskTestReport,
    pub sweep: Vec<SweepRow>,
    /// Largest grid tau below which every sampled loop was stable; present
    /// only when all three conditions hold. Certified on the grid, not a
    /// proof.
    pub tau_star_estimate: Option<f64>,
}

impl RobustStabilityReport {
    pub fn conditions_hold(&self) -> bool {
        self.nominal_loop.stable
            && self.minimum_phase.pass
            && self.minimum_phase.kharitonov_pass.unwrap_or(true)
            && self.disk.pass
    }

    /// No sampled loop went unstable anywhere on the tau grid.
    pub fn sweep_clean(&self) -> bool {
        self.sweep.iter().all(|r| r.max_real_part < 0.0)
    }
}

fn sorted_eigs(mut eigs: Vec<Complex64>) -> Vec<Complex64> {
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    eigs
}

/// Poles of the plain (Pn, C) feedback loop, the Q = 0 configuration.
pub fn nominal_loop_poles(pn: &TransferFunction, c: &TransferFunction) -> Result<Vec<Complex64>> {
    let loop_ss = closed_loop_statespace(pn, pn, c, &TransferFunction::zero())?;
    Ok(sorted_eigs(loop_ss.eigenvalues()))
}

fn loop_max_real_part(
    p: &TransferFunction,
    pn: &TransferFunction,
    c: &TransferFunction,
    q: &TransferFunction,
) -> Result<f64> {
    let ss = closed_loop_statespace(p, pn, c, q)?;
    Ok(ss.max_eigenvalue_real_part())
}

/// Checks the three robust-stability conditions and sweeps closed-loop
/// eigenvalues over the sampled family and the tau grid.
///
/// `tau_grid` must be positive and strictly descending; `pn` must lie
/// inside the family bounds.
pub fn verify_robust_stability(
    family: &PlantFamily,
    pn: &PlantSample,
    c: &TransferFunction,
    qspec: &QFilterSpec,
    tau_grid: &[f64],
    samples: &[PlantSample],
) -> Result<RobustStabilityReport> {
    family.validate()?;
    qspec.validate()?;
    family.check_contains(pn)?;
    if tau_grid.is_empty() {
        return Err(Error::InvalidParameter {
            field: "tau_grid".into(),
            reason: "must hold at least one tau".into(),
        });
    }
    if tau_grid[0] <= 0.0 || tau_grid.windows(2).any(|w| w[1] >= w[0] || w[1] <= 0.0) {
        return Err(Error::InvalidParameter {
            field: "tau_grid".into(),
            reason: "must be positive and strictly descending".into(),
        });
    }

    let pn_tf = pn.transfer_function()?;
    let nominal_poles = nominal_loop_poles(&pn_tf, c)?;
    let nominal_stable = nominal_poles.iter().all(|p| p.re < 0.0);

    let minimum_phase = check_minimum_phase(family, samples)?;
    let disk = nyquist_disk_test_auto(qspec.nu, &qspec.a, &family.gain)?;

    let sweep: Vec<SweepRow> = samples
        .par_iter()
        .enumerate()
        .map(|(sample_id, sample)| -> Result<Vec<SweepRow>> {
            let p_tf = sample.transfer_function()?;
            let mut rows = Vec::with_capacity(tau_grid.len());
            for &tau in tau_grid {
                let q = q_transfer(&QFilterSpec {
                    nu: qspec.nu,
                    a: qspec.a.clone(),
                    tau,
                })?;
                rows.push(SweepRow {
                    sample_id,
                    tau,
                    max_real_part: loop_max_real_part(&p_tf, &pn_tf, c, &q)?,
                });
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let tau_star_estimate = if nominal_stable
        && minimum_phase.pass
        && minimum_phase.kharitonov_pass.unwrap_or(true)
        && disk.pass
    {
        // Grid taus are descending, so scanning from the large end finds
        // the largest tau whose whole tail is stable for every sample.
        let mut tau_star = None;
        for (i, &tau) in tau_grid.iter().enumerate() {
            let tail_stable = sweep
                .iter()
                .filter(|row| tau_grid[i..].contains(&row.tau))
                .all(|row| row.max_real_part < -SWEEP_MARGIN);
            if tail_stable {
                tau_star = Some(tau);
                break;
            }
        }
        tau_star
    } else {
        None
    };

    Ok(RobustStabilityReport {
        nominal_loop: NominalLoopCheck {
            stable: nominal_stable,
            poles: nominal_poles,
        },
        minimum_phase,
        disk,
        sweep,
        tau_star_estimate,
    })
}

/// Raw per-sample stability margins at a single tau, ordered by sample id.
pub fn stability_margin_sweep(
    pn: &PlantSample,
    c: &TransferFunction,
    qspec: &QFilterSpec,
    tau: f64,
    samples: &[PlantSample],
) -> Result<Vec<(usize, f64)>> {
    let pn_tf = pn.transfer_function()?;
    let q = q_transfer(&QFilterSpec {
        nu: qspec.nu,
        a: qspec.a.clone(),
        tau,
    })?;
    samples
        .par_iter()
        .enumerate()
        .map(|(id, sample)| {
            let p_tf = sample.transfer_function()?;
            Ok((id, loop_max_real_part(&p_tf, &pn_tf, c, &q)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleClass {
    Fast,
    Slow,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PoleMatchRow {
    pub tau: f64,
    pub eigenvalue: Complex64,
    pub class: PoleClass,
    /// For fast poles: the limit of tau * lambda. For slow poles: the limit
    /// of lambda itself.
    pub target: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TauErrorSummary {
    pub tau: f64,
    pub fast_error: f64,
    pub slow_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsTable {
    pub rows: Vec<PoleMatchRow>,
    pub per_tau: Vec<TauErrorSummary>,
    pub fast_targets: Vec<Complex64>,
    pub slow_targets: Vec<Complex64>,
}

fn nearest(targets: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let mut best = (Complex64::new(f64::NAN, f64::NAN), f64::INFINITY);
    for &t in targets {
        let d = (z - t).norm();
        if d < best.1 {
            best = (t, d);
        }
    }
    best
}

/// Tracks closed-loop eigenvalues along a shrinking tau sequence and
/// matches them against their theoretical limits: fast eigenvalues, scaled
/// by tau, against the roots of the fast characteristic polynomial (at the
/// sample's gain and, for the internal filter modes, at the nominal gain);
/// slow eigenvalues against the plant zeros and the nominal loop poles.
///
/// Classification uses |lambda| > 0.5 / tau. Matching is plain nearest
/// neighbor without removal, so classifier mistakes show up as error
/// blow-ups instead of being silently absorbed.
pub fn pole_asymptotics(
    p: &PlantSample,
    pn: &PlantSample,
    c: &TransferFunction,
    qspec: &QFilterSpec,
    tau_seq: &[f64],
) -> Result<AsymptoticsTable> {
    qspec.validate()?;
    if tau_seq.len() < 3 || tau_seq.windows(2).any(|w| w[1] >= w[0]) || tau_seq[0] <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "tau_seq".into(),
            reason: "need at least 3 strictly decreasing positive values".into(),
        });
    }

    let p_tf = p.transfer_function()?;
    let pn_tf = pn.transfer_function()?;
    let n = p.alpha.len();
    let m_c = c.den.degree().ok_or(Error::ZeroPolynomial)?;
    let expected = 2 * n + m_c + qspec.nu;

    let mut fast_targets = fast_char_poly(qspec, p.g, pn.g)?.roots()?;
    fast_targets.extend(fast_char_poly(qspec, pn.g, pn.g)?.roots()?);
    let fast_targets = sorted_eigs(fast_targets);

    let mut slow_targets = if p_tf.num.degree().unwrap_or(0) > 0 {
        p_tf.num.roots()?
    } else {
        Vec::new()
    };
    slow_targets.extend(nominal_loop_poles(&pn_tf, c)?);
    let slow_targets = sorted_eigs(slow_targets);

    let mut rows = Vec::new();
    let mut per_tau = Vec::new();
    for &tau in tau_seq {
        let q = q_transfer(&QFilterSpec {
            nu: qspec.nu,
            a: qspec.a.clone(),
            tau,
        })?;
        let ss = closed_loop_statespace(&p_tf, &pn_tf, c, &q)?;
        let eigs = sorted_eigs(ss.eigenvalues());
        if eigs.len() != expected {
            return Err(Error::EigenvalueCountMismatch {
                expected,
                got: eigs.len(),
            });
        }
        let mut fast_error: f64 = 0.0;
        let mut slow_error: f64 = 0.0;
        for lambda in eigs {
            if lambda.norm() > 0.5 / tau {
                let (target, error) = nearest(&fast_targets, lambda * tau);
                fast_error = fast_error.max(error);
                rows.push(PoleMatchRow {
                    tau,
                    eigenvalue: lambda,
                    class: PoleClass::Fast,
                    target,
                    error,
                });
            } else {
                let (target, error) = nearest(&slow_targets, lambda);
                slow_error = slow_error.max(error);
                rows.push(PoleMatchRow {
                    tau,
                    eigenvalue: lambda,
                    class: PoleClass::Slow,
                    target,
                    error,
                });
            }
        }
        per_tau.push(TauErrorSummary {
            tau,
            fast_error,
            slow_error,
        });
    }

    Ok(AsymptoticsTable {
        rows,
        per_tau,
        fast_targets,
        slow_targets,
    })
}
