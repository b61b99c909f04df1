//! Multivariate polynomial fields with interval-bounded parameters.
//!
//! Uncertainty classes are expressed as polynomial expressions whose
//! coefficients are either fixed constants or references into a parameter
//! vector theta; the admissible class is then the box of theta values.
//! Membership of a concrete plant in its class reduces to a box check.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Const(f64),
    Param { param: usize },
}

/// One monomial: coeff * prod_j coords[j]^powers[j].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: Coefficient,
    pub powers: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolynomialField {
    pub terms: Vec<Term>,
}

impl PolynomialField {
    pub fn zero() -> Self {
        PolynomialField { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        PolynomialField {
            terms: vec![Term {
                coeff: Coefficient::Const(c),
                powers: Vec::new(),
            }],
        }
    }

    /// A single monomial with unit constant coefficient.
    pub fn monomial(powers: Vec<u32>) -> Self {
        PolynomialField {
            terms: vec![Term {
                coeff: Coefficient::Const(1.0),
                powers,
            }],
        }
    }

    pub fn validate(&self, arity: usize, n_params: usize) -> Result<()> {
        for (i, term) in self.terms.iter().enumerate() {
            if term.powers.len() > arity {
                return Err(Error::InvalidParameter {
                    field: format!("terms[{i}].powers"),
                    reason: format!(
                        "{} exponents for a field of {} coordinates",
                        term.powers.len(),
                        arity
                    ),
                });
            }
            if let Coefficient::Param { param } = term.coeff {
                if param >= n_params {
                    return Err(Error::InvalidParameter {
                        field: format!("terms[{i}].coeff"),
                        reason: format!("parameter index {param} out of range {n_params}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Missing trailing exponents count as zero, so low-order terms can
    /// leave `powers` short.
    pub fn eval(&self, coords: &[f64], theta: &[f64]) -> f64 {
        let mut total = 0.0;
        for term in &self.terms {
            let c = match term.coeff {
                Coefficient::Const(v) => v,
                Coefficient::Param { param } => theta[param],
            };
            let mut prod = c;
            for (j, &pw) in term.powers.iter().enumerate() {
                if pw > 0 {
                    prod *= coords[j].powi(pw as i32);
                }
            }
            total += prod;
        }
        total
    }
}
