//! Q-filter construction and the closed-disk frequency test that certifies
//! the fast boundary-layer dynamics stay Hurwitz over a whole gain interval.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::tf::TransferFunction;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Low-pass filter Q(s) = a0 / ((tau s)^nu + a_{nu-1} (tau s)^{nu-1} + ...
/// + a_1 (tau s) + a0). Unity dc gain by construction; `tau` sets the
/// cut-off frequency and `nu` the relative degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QFilterSpec {
    pub nu: usize,
    pub a: Vec<f64>,
    pub tau: f64,
}

impl QFilterSpec {
    pub fn new(nu: usize, a: Vec<f64>, tau: f64) -> Result<Self> {
        let spec = QFilterSpec { nu, a, tau };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 {
            return Err(Error::InvalidParameter {
                field: "nu".into(),
                reason: "relative degree must be at least 1".into(),
            });
        }
        if self.a.len() != self.nu {
            return Err(Error::InvalidParameter {
                field: "a".into(),
                reason: format!("expected {} coefficients, got {}", self.nu, self.a.len()),
            });
        }
        if self.a[0] <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "a".into(),
                reason: "a0 must be positive".into(),
            });
        }
        if self.tau <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "tau".into(),
                reason: "time constant must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Plant gain interval with its nominal value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainInterval {
    pub g_lower: f64,
    pub g_upper: f64,
    pub g_star: f64,
}

impl GainInterval {
    pub fn new(g_lower: f64, g_upper: f64, g_star: f64) -> Result<Self> {
        let g = GainInterval {
            g_lower,
            g_upper,
            g_star,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_lower > 0.0 && self.g_lower <= self.g_star && self.g_star <= self.g_upper) {
            return Err(Error::InvalidParameter {
                field: "gains".into(),
                reason: format!(
                    "need 0 < g_lower <= g_star <= g_upper, got ({}, {}, {})",
                    self.g_lower, self.g_star, self.g_upper
                ),
            });
        }
        Ok(())
    }
}

pub fn q_transfer(spec: &QFilterSpec) -> Result<TransferFunction> {
    spec.validate()?;
    let mut den = Vec::with_capacity(spec.nu + 1);
    let mut tau_pow = 1.0;
    for k in 0..spec.nu {
        den.push(spec.a[k] * tau_pow);
        tau_pow *= spec.tau;
    }
    den.push(tau_pow);
    TransferFunction::from_coeffs(vec![spec.a[0]], den)
}

/// Characteristic polynomial of the boundary-layer (time-scaled fast)
/// dynamics: s^nu + a_{nu-1} s^{nu-1} + ... + a_1 s + (g/g_star) a0.
/// Independent of tau; the coefficients alone decide stability of the fast
/// modes for every sufficiently small tau.
pub fn fast_char_poly(spec: &QFilterSpec, g: f64, g_star: f64) -> Result<Polynomial> {
    spec.validate()?;
    if g <= 0.0 || g_star <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "g".into(),
            reason: "gains must be positive".into(),
        });
    }
    let mut c = vec![0.0; spec.nu + 1];
    c[0] = (g / g_star) * spec.a[0];
    for k in 1..spec.nu {
        c[k] = spec.a[k];
    }
    c[spec.nu] = 1.0;
    Ok(Polynomial::new(c))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiskTestReport {
    pub pass: bool,
    pub min_distance: f64,
    pub encirclements: i32,
}

/// The forbidden region: the closed disk whose diameter connects
/// -g_star/g_lower and -g_star/g_upper on the real axis.
pub fn forbidden_disk(gains: &GainInterval) -> (f64, f64) {
    let lo = -gains.g_star / gains.g_lower;
    let hi = -gains.g_star / gains.g_upper;
    let center = 0.5 * (lo + hi);
    let radius = 0.5 * (hi - lo);
    (center, radius)
}

fn g_denominator(nu: usize, a: &[f64]) -> Polynomial {
    // s * (s^{nu-1} + a_{nu-1} s^{nu-2} + ... + a_1)
    let mut c = vec![0.0; nu + 1];
    for k in 1..nu {
        c[k] = a[k];
    }
    c[nu] = 1.0;
    Polynomial::new(c)
}

fn reduced_tail_poly(nu: usize, a: &[f64]) -> Polynomial {
    // s^{nu-1} + a_{nu-1} s^{nu-2} + ... + a_1
    let mut c = vec![0.0; nu];
    for k in 1..nu {
        c[k - 1] = a[k];
    }
    c[nu - 1] = 1.0;
    Polynomial::new(c)
}

fn g_eval(a0: f64, den: &Polynomial, s: Complex64) -> Complex64 {
    Complex64::new(a0, 0.0) / den.eval(s)
}

/// Frequency test for the gain-robust Hurwitz property of the fast
/// dynamics: the locus of G(s) = a0 / (s^nu + a_{nu-1} s^{nu-1} + ... +
/// a_1 s) along the standard D-contour must neither enter nor encircle the
/// forbidden disk.
///
/// The contour is sampled in four pieces: up the imaginary axis over the
/// supplied positive grid, around a large closing arc at |s| = omega_max
/// through the right half-plane, down the mirrored negative axis, and
/// around the small indentation arc at |s| = omega_min that detours the
/// origin pole into the right half-plane. Winding is accumulated from
/// argument increments of G(s) - center; any single increment above pi/2
/// means the grid undersamples the locus and the test rejects the grid
/// rather than report a silently wrong winding number.
pub fn nyquist_disk_test(
    nu: usize,
    a: &[f64],
    gains: &GainInterval,
    omega_grid: &[f64],
) -> Result<DiskTestReport> {
    gains.validate()?;
    if nu == 0 || a.len() != nu || a[0] <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "a".into(),
            reason: "need a0 > 0 and one coefficient per degree".into(),
        });
    }
    if omega_grid.len() < 2 || omega_grid.windows(2).any(|w| w[1] <= w[0]) || omega_grid[0] <= 0.0
    {
        return Err(Error::InvalidParameter {
            field: "omega_grid".into(),
            reason: "need an ascending grid of positive frequencies".into(),
        });
    }
    if nu >= 2 {
        let tail = reduced_tail_poly(nu, a);
        if !tail.is_hurwitz(0.0)? {
            let worst = tail
                .roots()?
                .iter()
                .map(|r| r.re)
                .fold(f64::NEG_INFINITY, f64::max);
            return Err(Error::NonHurwitzTail {
                worst_real_part: worst,
            });
        }
    }

    let (center, radius) = forbidden_disk(gains);
    let center_c = Complex64::new(center, 0.0);
    let den = g_denominator(nu, a);
    let a0 = a[0];
    let w_min = omega_grid[0];
    let w_max = *omega_grid.last().unwrap();

    let mut contour: Vec<Complex64> = Vec::with_capacity(2 * omega_grid.len() + 960);
    for &w in omega_grid {
        contour.push(Complex64::new(0.0, w));
    }
    let n_arc = 480;
    for k in 1..n_arc {
        let theta = std::f64::consts::FRAC_PI_2 * (1.0 - 2.0 * k as f64 / n_arc as f64);
        contour.push(Complex64::from_polar(w_max, theta));
    }
    for &w in omega_grid.iter().rev() {
        contour.push(Complex64::new(0.0, -w));
    }
    for k in 1..n_arc {
        let theta = -std::f64::consts::FRAC_PI_2 * (1.0 - 2.0 * k as f64 / n_arc as f64);
        contour.push(Complex64::from_polar(w_min, theta));
    }
    contour.push(contour[0]);

    let mut min_distance = f64::INFINITY;
    for &w in omega_grid {
        let g = g_eval(a0, &den, Complex64::new(0.0, w));
        min_distance = min_distance.min((g - center_c).norm() - radius);
    }

    let mut winding = 0.0;
    let mut prev = g_eval(a0, &den, contour[0]) - center_c;
    for &s in &contour[1..] {
        let cur = g_eval(a0, &den, s) - center_c;
        let step = (cur / prev).arg();
        if step.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::CoarseGrid {
                omega: s.im.abs().max(s.norm()),
                step: step.abs(),
            });
        }
        winding += step;
        prev = cur;
    }
    let turns = winding / (2.0 * std::f64::consts::PI);
    let encirclements = turns.round() as i32;

    Ok(DiskTestReport {
        pass: min_distance > 0.0 && encirclements == 0,
        min_distance,
        encirclements,
    })
}

/// Disk test on an automatically constructed grid: the low end extends
/// until |G| dwarfs the disk (the locus is leaving along the indentation),
/// the high end until |G| is far inside the resolution of the disk scale,
/// and the density doubles until the winding sum is well sampled.
pub fn nyquist_disk_test_auto(
    nu: usize,
    a: &[f64],
    gains: &GainInterval,
) -> Result<DiskTestReport> {
    gains.validate()?;
    if nu == 0 || a.len() != nu || a[0] <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "a".into(),
            reason: "need a0 > 0 and one coefficient per degree".into(),
        });
    }
    let (center, radius) = forbidden_disk(gains);
    let den = g_denominator(nu, a);
    let a0 = a[0];
    let far = 10.0 * (center.abs() + radius);
    let near = 0.01 * (gains.g_star / gains.g_upper);

    let mut w_min = 1e-3;
    while g_eval(a0, &den, Complex64::new(0.0, w_min)).norm() < far && w_min > 1e-12 {
        w_min *= 0.5;
    }
    let mut w_max = 1.0;
    while g_eval(a0, &den, Complex64::new(0.0, w_max)).norm() > near && w_max < 1e12 {
        w_max *= 2.0;
    }

    let mut per_decade = 2000usize;
    for _ in 0..4 {
        let decades = (w_max / w_min).log10();
        let n = ((decades * per_decade as f64).ceil() as usize).max(2);
        let grid: Vec<f64> = (0..=n)
            .map(|k| w_min * (w_max / w_min).powf(k as f64 / n as f64))
            .collect();
        match nyquist_disk_test(nu, a, gains, &grid) {
            Err(Error::CoarseGrid { .. }) => per_decade *= 4,
            other => return other,
        }
    }
    Err(Error::CoarseGrid {
        omega: w_max,
        step: std::f64::consts::PI,
    })
}

/// Shrink a0 by halving until the disk test passes with a safety margin of
/// 5% of the disk scale. Returns the largest passing a0_initial * 2^-k.
pub fn design_a0(nu: usize, a_tail: &[f64], gains: &GainInterval, a0_initial: f64) -> Result<f64> {
    if a0_initial <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "a0_initial".into(),
            reason: "must be positive".into(),
        });
    }
    if a_tail.len() + 1 != nu {
        return Err(Error::InvalidParameter {
            field: "a_tail".into(),
            reason: format!("expected {} tail coefficients, got {}", nu - 1, a_tail.len()),
        });
    }
    let (center, radius) = forbidden_disk(gains);
    let threshold = 0.05 * (center.abs() + radius);
    let mut a = Vec::with_capacity(nu);
    a.push(a0_initial);
    a.extend_from_slice(a_tail);
    let mut a0 = a0_initial;
    for _ in 0..=60 {
        a[0] = a0;
        let report = nyquist_disk_test_auto(nu, &a, gains)?;
        if report.pass && report.min_distance >= threshold {
            return Ok(a0);
        }
        a0 *= 0.5;
    }
    Err(Error::NoFeasibleA0 { a0_initial })
}
