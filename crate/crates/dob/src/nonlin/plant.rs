//! Normal-form plants, nominal models, baseline controllers and envelopes.

use crate::error::{Error, Result};
use crate::nonlin::field::PolynomialField;
use crate::qfilter::GainInterval;
use crate::signal::SignalSpec;
use crate::tf::TransferFunction;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Uncertain SISO plant in Byrnes-Isidori normal form:
///
/// ```text
/// x_i' = x_{i+1}                      (i = 1 .. nu-1)
/// x_nu' = f(x, z) + g(x, z) (u + d)
/// z'   = h(x, z, d_z)
/// y    = x_1
/// ```
///
/// The chain structure is fixed; only f, g, h are configurable. `theta`
/// holds the true parameter values, `theta_bounds` the admissible class
/// box. Field coordinate layout: f and g read (x_1..x_nu, z_1..z_{n-nu});
/// each h component additionally reads d_z as the last coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormPlant {
    pub nu: usize,
    pub n: usize,
    pub f: PolynomialField,
    pub g: PolynomialField,
    /// Hard clip applied to g after evaluation, keeping it inside the
    /// declared gain interval on the whole state space.
    pub g_clip: Option<[f64; 2]>,
    pub h: Vec<PolynomialField>,
    pub theta: Vec<f64>,
    pub theta_bounds: Vec<[f64; 2]>,
    pub gain: GainInterval,
    pub d: SignalSpec,
    pub d_z: SignalSpec,
}

impl NormalFormPlant {
    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 || self.nu > self.n {
            return Err(Error::InvalidParameter {
                field: "nu".into(),
                reason: format!("need 1 <= nu <= n, got nu={} n={}", self.nu, self.n),
            });
        }
        if self.h.len() != self.n - self.nu {
            return Err(Error::InvalidParameter {
                field: "h".into(),
                reason: format!(
                    "expected {} zero-dynamics components, got {}",
                    self.n - self.nu,
                    self.h.len()
                ),
            });
        }
        if self.theta.len() != self.theta_bounds.len() {
            return Err(Error::InvalidParameter {
                field: "theta".into(),
                reason: "one bound interval per parameter".into(),
            });
        }
        for (i, (&v, b)) in self.theta.iter().zip(&self.theta_bounds).enumerate() {
            if b[0] > b[1] || v < b[0] || v > b[1] {
                return Err(Error::InvalidParameter {
                    field: format!("theta[{i}]"),
                    reason: format!("value {v} outside class box [{}, {}]", b[0], b[1]),
                });
            }
        }
        let k = self.theta.len();
        self.f.validate(self.n, k)?;
        self.g.validate(self.n, k)?;
        for (i, hi) in self.h.iter().enumerate() {
            hi.validate(self.n + 1, k).map_err(|_| Error::InvalidParameter {
                field: format!("h[{i}]"),
                reason: "exponent vector longer than (x, z, d_z)".into(),
            })?;
        }
        if let Some([lo, hi]) = self.g_clip {
            if lo > hi {
                return Err(Error::InvalidParameter {
                    field: "g_clip".into(),
                    reason: "empty clip interval".into(),
                });
            }
        }
        self.gain.validate()?;
        self.d.validate()?;
        self.d_z.validate()
    }

    pub fn f_value(&self, xz: &[f64], theta: &[f64]) -> f64 {
        self.f.eval(xz, theta)
    }

    pub fn g_value(&self, xz: &[f64], theta: &[f64]) -> f64 {
        let mut v = self.g.eval(xz, theta);
        if let Some([lo, hi]) = self.g_clip {
            v = v.clamp(lo, hi);
        }
        v
    }

    /// Samples g over the envelope and the class box; errors if any draw
    /// leaves the declared gain interval.
    pub fn check_gain_bounds(
        &self,
        envelope: &Envelope,
        n_samples: usize,
        seed: u64,
    ) -> Result<()> {
        self.validate()?;
        envelope.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xz = vec![0.0; self.n];
        let mut theta = vec![0.0; self.theta.len()];
        for _ in 0..n_samples {
            for (v, b) in xz.iter_mut().zip(envelope.u_x.iter().chain(&envelope.z)) {
                *v = sample_interval(&mut rng, *b);
            }
            for (v, b) in theta.iter_mut().zip(&self.theta_bounds) {
                *v = sample_interval(&mut rng, *b);
            }
            let g = self.g_value(&xz, &theta);
            if g < self.gain.g_lower || g > self.gain.g_upper {
                return Err(Error::NonPositiveGain { g });
            }
        }
        Ok(())
    }
}

fn sample_interval<R: Rng>(rng: &mut R, b: [f64; 2]) -> f64 {
    if b[0] == b[1] {
        b[0]
    } else {
        rng.gen_range(b[0]..=b[1])
    }
}

/// The model the outer controller is designed for; same coordinate layout
/// as the plant but with the estimate z_bar in place of z and its own
/// (known) parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NominalModel {
    pub f_n: PolynomialField,
    pub g_n: PolynomialField,
    pub h_n: Vec<PolynomialField>,
    pub theta: Vec<f64>,
}

impl NominalModel {
    pub fn validate_for(&self, plant: &NormalFormPlant) -> Result<()> {
        if self.h_n.len() != plant.n - plant.nu {
            return Err(Error::InvalidParameter {
                field: "h_n".into(),
                reason: format!(
                    "expected {} components, got {}",
                    plant.n - plant.nu,
                    self.h_n.len()
                ),
            });
        }
        let k = self.theta.len();
        self.f_n.validate(plant.n, k)?;
        self.g_n.validate(plant.n, k)?;
        for h in &self.h_n {
            h.validate(plant.n, k)?;
        }
        Ok(())
    }

    pub fn f_n_value(&self, x_zbar: &[f64]) -> f64 {
        self.f_n.eval(x_zbar, &self.theta)
    }

    pub fn g_n_value(&self, x_zbar: &[f64]) -> f64 {
        self.g_n.eval(x_zbar, &self.theta)
    }
}

/// Linear output-feedback controller eta' = A eta + B y, u_bar = C eta + D y.
/// The toolkit restricts the baseline controller to linear maps; every
/// stabilizing design used by the fixtures is of this form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineController {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
}

impl BaselineController {
    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.a.len();
        if self.a.iter().any(|row| row.len() != m) || self.b.len() != m || self.c.len() != m {
            return Err(Error::InvalidParameter {
                field: "controller".into(),
                reason: "A must be square with matching B and C lengths".into(),
            });
        }
        Ok(())
    }

    pub fn derivatives(&self, eta: &[f64], y: f64) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, &bi)| row.iter().zip(eta).map(|(aij, ej)| aij * ej).sum::<f64>() + bi * y)
            .collect()
    }

    pub fn output(&self, eta: &[f64], y: f64) -> f64 {
        self.c.iter().zip(eta).map(|(ci, ei)| ci * ei).sum::<f64>() + self.d * y
    }

    /// The transfer function this controller realizes in the linear loop
    /// convention u_bar = C(s) (r - y - n): with the state equations driven
    /// by +y, that is -(C (sI - A)^-1 B + D). Resolvent numerator via the
    /// Faddeev-LeVerrier recursion, exact up to round-off.
    pub fn loop_transfer_function(&self) -> Result<TransferFunction> {
        self.validate()?;
        let m = self.order();
        if m == 0 {
            return TransferFunction::from_coeffs(vec![-self.d], vec![1.0]);
        }
        let a = DMatrix::from_fn(m, m, |i, j| self.a[i][j]);
        let mut basis = DMatrix::<f64>::identity(m, m);
        let mut char_poly = vec![0.0; m + 1];
        char_poly[m] = 1.0;
        // num_k collects C * B_k * B for the resolvent power s^{m-1-k}
        let mut num = vec![0.0; m + 1];
        for k in 0..m {
            let mut cb = 0.0;
            for i in 0..m {
                for j in 0..m {
                    cb += self.c[i] * basis[(i, j)] * self.b[j];
                }
            }
            num[m - 1 - k] = cb;
            let ab = &a * &basis;
            let coeff = -ab.trace() / (k as f64 + 1.0);
            char_poly[m - 1 - k] = coeff;
            basis = ab + DMatrix::identity(m, m) * coeff;
        }
        for i in 0..=m {
            num[i] += self.d * char_poly[i];
            num[i] = -num[i];
        }
        TransferFunction::from_coeffs(num, char_poly)
    }
}

/// Operating envelope: per-coordinate boxes for the plant and controller
/// states, disturbance bounds, and the initial-condition box over
/// (x, z, eta).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub u_x: Vec<[f64; 2]>,
    pub z: Vec<[f64; 2]>,
    pub z_bar: Vec<[f64; 2]>,
    pub eta: Vec<[f64; 2]>,
    pub m_d: f64,
    pub m_dz: f64,
    pub s0: Vec<[f64; 2]>,
}

impl Envelope {
    pub fn validate(&self) -> Result<()> {
        let boxes = self
            .u_x
            .iter()
            .chain(&self.z)
            .chain(&self.z_bar)
            .chain(&self.eta)
            .chain(&self.s0);
        for b in boxes {
            if b[0] > b[1] {
                return Err(Error::InvalidParameter {
                    field: "envelope".into(),
                    reason: format!("empty box [{}, {}]", b[0], b[1]),
                });
            }
        }
        if self.m_d < 0.0 || self.m_dz < 0.0 {
            return Err(Error::InvalidParameter {
                field: "m_d".into(),
                reason: "disturbance bounds must be nonnegative".into(),
            });
        }
        Ok(())
    }
}
