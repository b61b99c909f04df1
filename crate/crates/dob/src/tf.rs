//! Rational transfer functions over real polynomials.
//!
//! Arithmetic here is exact polynomial arithmetic and never cancels common
//! factors. Internal-stability questions are answered downstream from
//! state-space realizations of the individual blocks, and a silent
//! cancellation in the algebra would hide exactly the modes those checks
//! exist to find.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferFunction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl TransferFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter {
                field: "den".into(),
                reason: "denominator must not be the zero polynomial".into(),
            });
        }
        Ok(TransferFunction { num, den })
    }

    /// Convenience constructor from ascending coefficient lists.
    pub fn from_coeffs(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        TransferFunction::new(Polynomial::new(num), Polynomial::new(den))
    }

    pub fn zero() -> Self {
        TransferFunction {
            num: Polynomial::zero(),
            den: Polynomial::constant(1.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// deg(den) - deg(num); the zero transfer function reports the
    /// denominator degree so that it counts as proper everywhere.
    pub fn relative_degree(&self) -> i64 {
        let dd = self.den.degree().expect("den nonzero") as i64;
        match self.num.degree() {
            Some(dn) => dd - dn as i64,
            None => dd,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.relative_degree() >= 0
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.relative_degree() >= 1
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    pub fn add(&self, other: &TransferFunction) -> TransferFunction {
        TransferFunction {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &TransferFunction) -> TransferFunction {
        TransferFunction {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn neg(&self) -> TransferFunction {
        TransferFunction {
            num: self.num.scale(-1.0),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &TransferFunction) -> TransferFunction {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<TransferFunction> {
        if self.num.is_zero() {
            return Err(Error::InvertZero);
        }
        Ok(TransferFunction {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    /// Pointwise evaluation at s = j*omega. Rejects requests sitting on a
    /// denominator root instead of returning an overflow.
    pub fn freq_response(&self, omegas: &[f64]) -> Result<Vec<Complex64>> {
        let den_scale: f64 = self.den.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()));
        omegas
            .iter()
            .map(|&w| {
                let s = Complex64::new(0.0, w);
                let d = self.den.eval(s);
                if d.norm() <= 1e-12 * (1.0 + den_scale) {
                    return Err(Error::PoleAtFrequency { omega: w });
                }
                Ok(self.num.eval(s) / d)
            })
            .collect()
    }

    pub fn dc_gain(&self) -> f64 {
        self.num.eval_real(0.0) / self.den.eval_real(0.0)
    }
}
