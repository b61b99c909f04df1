//! Interval plant families and their sampling.
//!
//! A family collects every transfer function
//!
//! ```text
//!          s^(n-nu) + beta_{n-nu-1} s^(n-nu-1) + ... + beta_0
//! P(s) = g ---------------------------------------------------
//!          s^n     + alpha_{n-1} s^(n-1)      + ... + alpha_0
//! ```
//!
//! with each coefficient confined to an interval and the gain g confined to
//! a positive interval holding the nominal value g_star. Coefficient
//! indices follow powers of s: `alpha_bounds[i]` bounds the coefficient of
//! s^i.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::qfilter::GainInterval;
use crate::tf::TransferFunction;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantFamily {
    pub n: usize,
    pub nu: usize,
    pub alpha_bounds: Vec<[f64; 2]>,
    pub beta_bounds: Vec<[f64; 2]>,
    pub gain: GainInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Vertex,
    Random,
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSample {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub g: f64,
    pub provenance: Provenance,
}

impl PlantFamily {
    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 || self.nu > self.n {
            return Err(Error::InvalidParameter {
                field: "nu".into(),
                reason: format!("need 1 <= nu <= n, got nu={} n={}", self.nu, self.n),
            });
        }
        if self.alpha_bounds.len() != self.n {
            return Err(Error::InvalidParameter {
                field: "alpha_bounds".into(),
                reason: format!("expected {} intervals, got {}", self.n, self.alpha_bounds.len()),
            });
        }
        if self.beta_bounds.len() != self.n - self.nu {
            return Err(Error::InvalidParameter {
                field: "beta_bounds".into(),
                reason: format!(
                    "expected {} intervals, got {}",
                    self.n - self.nu,
                    self.beta_bounds.len()
                ),
            });
        }
        for (i, b) in self.alpha_bounds.iter().enumerate() {
            if b[0] > b[1] {
                return Err(Error::InvalidParameter {
                    field: format!("alpha_bounds[{i}]"),
                    reason: "lower bound above upper bound".into(),
                });
            }
        }
        for (i, b) in self.beta_bounds.iter().enumerate() {
            if b[0] > b[1] {
                return Err(Error::InvalidParameter {
                    field: format!("beta_bounds[{i}]"),
                    reason: "lower bound above upper bound".into(),
                });
            }
        }
        self.gain.validate()
    }

    /// Midpoint of every coefficient interval with g = g_star.
    pub fn nominal(&self) -> PlantSample {
        PlantSample {
            alpha: self.alpha_bounds.iter().map(|b| 0.5 * (b[0] + b[1])).collect(),
            beta: self.beta_bounds.iter().map(|b| 0.5 * (b[0] + b[1])).collect(),
            g: self.gain.g_star,
            provenance: Provenance::Nominal,
        }
    }

    /// Checks membership, naming the first out-of-range parameter.
    pub fn check_contains(&self, sample: &PlantSample) -> Result<()> {
        if sample.alpha.len() != self.n || sample.beta.len() != self.n - self.nu {
            return Err(Error::NominalOutsideFamily {
                field: "dimensions".into(),
            });
        }
        for (i, (&v, b)) in sample.alpha.iter().zip(&self.alpha_bounds).enumerate() {
            if v < b[0] || v > b[1] {
                return Err(Error::NominalOutsideFamily {
                    field: format!("alpha[{i}]"),
                });
            }
        }
        for (i, (&v, b)) in sample.beta.iter().zip(&self.beta_bounds).enumerate() {
            if v < b[0] || v > b[1] {
                return Err(Error::NominalOutsideFamily {
                    field: format!("beta[{i}]"),
                });
            }
        }
        if sample.g < self.gain.g_lower || sample.g > self.gain.g_upper {
            return Err(Error::NominalOutsideFamily { field: "g".into() });
        }
        Ok(())
    }
}

impl PlantSample {
    /// Plant order and relative degree are carried implicitly by the
    /// coefficient vector lengths.
    pub fn transfer_function(&self) -> Result<TransferFunction> {
        let n = self.alpha.len();
        let m = self.beta.len();
        if m >= n {
            return Err(Error::InvalidParameter {
                field: "beta".into(),
                reason: "numerator degree must be below denominator degree".into(),
            });
        }
        if self.g <= 0.0 {
            return Err(Error::NonPositiveGain { g: self.g });
        }
        let mut num = vec![0.0; m + 1];
        num[..m].copy_from_slice(&self.beta);
        num[m] = 1.0;
        for c in &mut num {
            *c *= self.g;
        }
        let mut den = vec![0.0; n + 1];
        den[..n].copy_from_slice(&self.alpha);
        den[n] = 1.0;
        TransferFunction::from_coeffs(num, den)
    }

    fn param_key(&self) -> Vec<u64> {
        self.alpha
            .iter()
            .chain(&self.beta)
            .chain(std::iter::once(&self.g))
            .map(|v| v.to_bits())
            .collect()
    }
}

/// Deterministic family sampling: the nominal point, every distinct vertex
/// of the parameter box (capped at 4096 random vertices when the box has
/// more than 12 dimensions), and `n_random` uniform interior points.
/// Degenerate intervals collapse coinciding samples, so a fully degenerate
/// family yields the single nominal sample.
pub fn sample_family(
    family: &PlantFamily,
    n_random: usize,
    seed: u64,
) -> Result<Vec<PlantSample>> {
    family.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds: Vec<[f64; 2]> = family
        .alpha_bounds
        .iter()
        .chain(&family.beta_bounds)
        .copied()
        .chain(std::iter::once([family.gain.g_lower, family.gain.g_upper]))
        .collect();
    let k = bounds.len();

    let mut samples = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let push = |s: PlantSample, samples: &mut Vec<PlantSample>, seen: &mut HashSet<Vec<u64>>| {
        if seen.insert(s.param_key()) {
            samples.push(s);
        }
    };

    push(family.nominal(), &mut samples, &mut seen);

    let from_params = |p: &[f64], provenance: Provenance| PlantSample {
        alpha: p[..family.n].to_vec(),
        beta: p[family.n..k - 1].to_vec(),
        g: p[k - 1],
        provenance,
    };

    if k <= 12 {
        for mask in 0..(1usize << k) {
            let p: Vec<f64> = (0..k).map(|j| bounds[j][(mask >> j) & 1]).collect();
            push(from_params(&p, Provenance::Vertex), &mut samples, &mut seen);
        }
    } else {
        for _ in 0..4096 {
            let p: Vec<f64> = bounds
                .iter()
                .map(|b| b[usize::from(rng.gen_bool(0.5))])
                .collect();
            push(from_params(&p, Provenance::Vertex), &mut samples, &mut seen);
        }
    }

    for _ in 0..n_random {
        let p: Vec<f64> = bounds
            .iter()
            .map(|b| {
                if b[0] == b[1] {
                    b[0]
                } else {
                    rng.gen_range(b[0]..=b[1])
                }
            })
            .collect();
        push(from_params(&p, Provenance::Random), &mut samples, &mut seen);
    }

    Ok(samples)
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimumPhaseReport {
    pub pass: bool,
    /// Kharitonov corner certificate over the whole interval numerator;
    /// `None` when the family has no zeros.
    pub kharitonov_pass: Option<bool>,
    pub worst_zero_real_part: f64,
}

/// Minimum-phase check for the family numerator, combining sampled zeros
/// with the four-corner Kharitonov certificate (complete for an interval
/// polynomial family).
pub fn check_minimum_phase(
    family: &PlantFamily,
    samples: &[PlantSample],
) -> Result<MinimumPhaseReport> {
    family.validate()?;
    let m = family.n - family.nu;
    if m == 0 {
        return Ok(MinimumPhaseReport {
            pass: true,
            kharitonov_pass: None,
            worst_zero_real_part: f64::NEG_INFINITY,
        });
    }

    let mut pass = true;
    let mut worst = f64::NEG_INFINITY;
    for s in samples {
        let mut num = vec![0.0; m + 1];
        num[..m].copy_from_slice(&s.beta);
        num[m] = 1.0;
        for z in Polynomial::new(num).roots()? {
            worst = worst.max(z.re);
            if z.re >= 0.0 {
                pass = false;
            }
        }
    }

    let mut kharitonov = true;
    for pattern in KHARITONOV_PATTERNS {
        let mut c = vec![0.0; m + 1];
        for i in 0..m {
            let side = pattern[i % 4];
            c[i] = family.beta_bounds[i][side];
        }
        c[m] = 1.0;
        if !Polynomial::new(c).is_hurwitz(0.0)? {
            kharitonov = false;
        }
    }

    Ok(MinimumPhaseReport {
        pass,
        kharitonov_pass: Some(kharitonov),
        worst_zero_real_part: worst,
    })
}

/// Corner selection patterns by coefficient index mod 4 (0 = lower bound,
/// 1 = upper bound), one row per Kharitonov polynomial.
const KHARITONOV_PATTERNS: [[usize; 4]; 4] = [
    [0, 0, 1, 1],
    [1, 1, 0, 0],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
];

/// Largest real part among the zeros of a single sample, `None` when the
/// plant has no zeros.
pub fn sample_worst_zero(sample: &PlantSample) -> Result<Option<Complex64>> {
    if sample.beta.is_empty() {
        return Ok(None);
    }
    let m = sample.beta.len();
    let mut num = vec![0.0; m + 1];
    num[..m].copy_from_slice(&sample.beta);
    num[m] = 1.0;
    let roots = Polynomial::new(num).roots()?;
    Ok(roots.into_iter().max_by(|a, b| a.re.total_cmp(&b.re)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_param_family() -> PlantFamily {
        PlantFamily {
            n: 1,
            nu: 1,
            alpha_bounds: vec![[1.0, 2.0]],
            beta_bounds: vec![],
            gain: GainInterval::new(1.0, 3.0, 2.0).unwrap(),
        }
    }

    #[test]
    fn vertex_count_two_parameters() {
        let family = two_param_family();
        let samples = sample_family(&family, 3, 42).unwrap();
        let vertices = samples
            .iter()
            .filter(|s| s.provenance == Provenance::Vertex)
            .count();
        assert_eq!(vertices, 4);
        assert_eq!(samples.len(), 1 + 4 + 3);
    }

    #[test]
    fn degenerate_interval_merges_vertices() {
        let family = PlantFamily {
            n: 2,
            nu: 1,
            alpha_bounds: vec![[1.0, 2.0], [2.0, 4.0]],
            beta_bounds: vec![[1.0, 1.0]],
            gain: GainInterval::new(0.5, 2.0, 1.0).unwrap(),
        };
        let samples = sample_family(&family, 0, 0).unwrap();
        let vertices = samples
            .iter()
            .filter(|s| s.provenance == Provenance::Vertex)
            .count();
        assert_eq!(vertices, 8);
    }

    #[test]
    fn fully_degenerate_family_is_one_point() {
        let family = PlantFamily {
            n: 1,
            nu: 1,
            alpha_bounds: vec![[2.0, 2.0]],
            beta_bounds: vec![],
            gain: GainInterval::new(1.0, 1.0, 1.0).unwrap(),
        };
        let samples = sample_family(&family, 5, 9).unwrap();
        assert_eq!(samples.len(), 1);
        assert_eq!(samples[0].provenance, Provenance::Nominal);
    }

    #[test]
    fn sampling_is_deterministic() {
        let family = two_param_family();
        let a = sample_family(&family, 10, 7).unwrap();
        let b = sample_family(&family, 10, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn first_order_zero_interval() {
        let family = PlantFamily {
            n: 2,
            nu: 1,
            alpha_bounds: vec![[1.0, 3.0], [2.0, 4.0]],
            beta_bounds: vec![[1.0, 2.0]],
            gain: GainInterval::new(0.8, 1.25, 1.0).unwrap(),
        };
        let samples = sample_family(&family, 20, 3).unwrap();
        let report = check_minimum_phase(&family, &samples).unwrap();
        assert!(report.pass);
        assert_eq!(report.kharitonov_pass, Some(true));
        assert!(report.worst_zero_real_part <= -1.0);
    }

    #[test]
    fn sign_indefinite_zero_fails() {
        let family = PlantFamily {
            n: 2,
            nu: 1,
            alpha_bounds: vec![[1.0, 3.0], [2.0, 4.0]],
            beta_bounds: vec![[-1.0, 1.0]],
            gain: GainInterval::new(0.8, 1.25, 1.0).unwrap(),
        };
        let samples = sample_family(&family, 0, 3).unwrap();
        let report = check_minimum_phase(&family, &samples).unwrap();
        assert!(!report.pass);
        assert_eq!(report.kharitonov_pass, Some(false));
    }

    #[test]
    fn no_zero_family_passes_trivially() {
        let family = two_param_family();
        let samples = sample_family(&family, 0, 0).unwrap();
        let report = check_minimum_phase(&family, &samples).unwrap();
        assert!(report.pass);
        assert_eq!(report.kharitonov_pass, None);
    }

    #[test]
    fn sample_to_transfer_function() {
        let s = PlantSample {
            alpha: vec![1.0, 2.0],
            beta: vec![2.0],
            g: 1.25,
            provenance: Provenance::Nominal,
        };
        let p = s.transfer_function().unwrap();
        assert_eq!(p.num.coeffs(), &[2.5, 1.25]);
        assert_eq!(p.den.coeffs(), &[1.0, 2.0, 1.0]);
    }
}
