//! The saturated disturbance observer for normal-form plants.

use crate::error::{Error, Result};
use crate::nonlin::plant::NominalModel;
use crate::nonlin::sat::smooth_sat;
use crate::qfilter::{nyquist_disk_test_auto, GainInterval, QFilterSpec};
use serde::{Deserialize, Serialize};

/// Observer configuration. `qspec` supplies the filter coefficients
/// a_0..a_{nu-1} and the time constant tau; `g_star` is the nominal gain
/// the observer assumes; the two saturation descriptions bound the state
/// estimate and the disturbance estimate channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DobParams {
    pub qspec: QFilterSpec,
    pub g_star: f64,
    /// Identity region of sat_x, one interval per chain coordinate.
    pub sat_x_levels: Vec<[f64; 2]>,
    /// Identity region of sat_phi.
    pub sat_phi_interval: [f64; 2],
    /// Hermite blend width; `None` gives each saturation 10% of its span.
    pub smoothing_width: Option<f64>,
}

impl DobParams {
    pub fn validate(&self) -> Result<()> {
        self.qspec.validate()?;
        if self.g_star <= 0.0 {
            return Err(Error::NonPositiveGain { g: self.g_star });
        }
        if self.sat_x_levels.len() != self.qspec.nu {
            return Err(Error::InvalidParameter {
                field: "sat_x_levels".into(),
                reason: format!(
                    "expected {} intervals, got {}",
                    self.qspec.nu,
                    self.sat_x_levels.len()
                ),
            });
        }
        for b in self
            .sat_x_levels
            .iter()
            .chain(std::iter::once(&self.sat_phi_interval))
        {
            if b[0] >= b[1] {
                return Err(Error::InvalidParameter {
                    field: "saturation".into(),
                    reason: format!("empty identity region [{}, {}]", b[0], b[1]),
                });
            }
        }
        if let Some(w) = self.smoothing_width {
            if w <= 0.0 {
                return Err(Error::InvalidParameter {
                    field: "smoothing_width".into(),
                    reason: "must be positive".into(),
                });
            }
        }
        Ok(())
    }

    /// Full consistency check against the plant's gain interval: g_star
    /// must be admissible and the coefficient tail must pass the disk
    /// test, otherwise no small tau makes the fast dynamics robustly
    /// Hurwitz.
    pub fn validate_against(&self, gain: &GainInterval) -> Result<()> {
        self.validate()?;
        if self.g_star < gain.g_lower || self.g_star > gain.g_upper {
            return Err(Error::InvalidParameter {
                field: "g_star".into(),
                reason: format!(
                    "{} outside the gain interval [{}, {}]",
                    self.g_star, gain.g_lower, gain.g_upper
                ),
            });
        }
        let report = nyquist_disk_test_auto(self.qspec.nu, &self.qspec.a, gain)?;
        if !report.pass {
            return Err(Error::InvalidParameter {
                field: "a".into(),
                reason: format!(
                    "coefficients fail the disk test (min distance {:.4}, {} encirclements)",
                    report.min_distance, report.encirclements
                ),
            });
        }
        Ok(())
    }

    pub fn width_for(&self, interval: [f64; 2]) -> f64 {
        self.smoothing_width
            .unwrap_or(0.1 * (interval[1] - interval[0]))
    }

    pub fn sat_x(&self, i: usize, v: f64) -> f64 {
        let b = self.sat_x_levels[i];
        smooth_sat(v, b[0], b[1], self.width_for(b))
    }

    pub fn sat_phi(&self, v: f64) -> f64 {
        let b = self.sat_phi_interval;
        smooth_sat(v, b[0], b[1], self.width_for(b))
    }

    /// Plateau value of sat_phi, the largest magnitude it can emit.
    pub fn sat_phi_plateau(&self) -> f64 {
        let b = self.sat_phi_interval;
        let w = self.width_for(b);
        (b[1] + 0.5 * w).abs().max((b[0] - 0.5 * w).abs())
    }
}

#[derive(Debug, Clone)]
pub struct DobDerivatives {
    pub dz_bar: Vec<f64>,
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
    pub u: f64,
    pub phi: f64,
    pub w: f64,
}

/// One evaluation of the observer equations.
///
/// The internal layout mirrors the block diagram exactly:
///
/// ```text
/// z_bar' = h_n(sat_x(q), z_bar)
/// q'     = A(tau) q + (a0 / tau^nu) B y
/// p'     = A(tau) p + (a0 / tau^nu) B (phi - (phi - sat_phi(phi))/g* + w/g*)
/// phi    = p_1 + (1/g*) sum_i (a_i / tau^(nu-i)) q_{i+1} - (a0 / tau^nu) y / g*
/// w      = f_n(sat_x(q), z_bar) + g_n(sat_x(q), z_bar) u_bar
/// u      = sat_phi(phi) + w / g*
/// ```
///
/// A(tau) is the companion matrix with last row
/// [-a0/tau^nu, -a1/tau^(nu-1), ..., -a_{nu-1}/tau] and B the last unit
/// vector. The dead-zone term (phi - sat_phi(phi)) confines peaking to the
/// observer internals. With every field linear and the saturations wide
/// open this block is state-space-equal to the linear Q-filter loop.
pub fn dob_derivatives(
    z_bar: &[f64],
    q: &[f64],
    p: &[f64],
    y: f64,
    u_bar: f64,
    params: &DobParams,
    nominal: &NominalModel,
) -> Result<DobDerivatives> {
    let nu = params.qspec.nu;
    let tau = params.qspec.tau;
    if tau <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "tau".into(),
            reason: "time constant must be positive".into(),
        });
    }
    if q.len() != nu || p.len() != nu {
        return Err(Error::InvalidParameter {
            field: "q".into(),
            reason: format!("filter states must have length {nu}"),
        });
    }
    let a = &params.qspec.a;
    let g_star = params.g_star;

    // a_i / tau^(nu - i), the row shared by phi, A(tau) and the drive gain
    let mut scaled = vec![0.0; nu];
    let mut pw = tau;
    for i in (0..nu).rev() {
        scaled[i] = a[i] / pw;
        pw *= tau;
    }
    // after the loop pw = tau^(nu+1); recompute the drive directly
    let drive = a[0] / tau.powi(nu as i32);
    debug_assert!((scaled[0] - drive).abs() <= 1e-9 * drive.abs().max(1.0));

    let mut sat_q = vec![0.0; nu + z_bar.len()];
    for i in 0..nu {
        sat_q[i] = params.sat_x(i, q[i]);
    }
    sat_q[nu..].copy_from_slice(z_bar);

    let phi = p[0] + (scaled.iter().zip(q).map(|(s, qi)| s * qi).sum::<f64>() - drive * y) / g_star;
    let w = nominal.f_n_value(&sat_q) + nominal.g_n_value(&sat_q) * u_bar;
    let sat_phi = params.sat_phi(phi);
    let u = sat_phi + w / g_star;

    let dz_bar: Vec<f64> = nominal.h_n.iter().map(|h| h.eval(&sat_q, &nominal.theta)).collect();

    let companion = |state: &[f64], input: f64| -> Vec<f64> {
        let mut d = vec![0.0; nu];
        for i in 0..nu - 1 {
            d[i] = state[i + 1];
        }
        d[nu - 1] = -scaled.iter().zip(state).map(|(s, v)| s * v).sum::<f64>() + drive * input;
        d
    };
    let dq = companion(q, y);
    let p_in = phi - (phi - sat_phi) / g_star + w / g_star;
    let dp = companion(p, p_in);

    Ok(DobDerivatives {
        dz_bar,
        dq,
        dp,
        u,
        phi,
        w,
    })
}
