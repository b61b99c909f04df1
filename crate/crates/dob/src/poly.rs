//! Real-coefficient polynomial algebra: the substrate for every transfer
//! function, stability test and pole computation in this crate.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Polynomial with real coefficients stored in ascending degree:
/// `coeffs[k]` multiplies `s^k`.
///
/// Trailing zeros are trimmed on construction, so the leading coefficient
/// of a nonzero polynomial is always nonzero. The zero polynomial is kept
/// as the single entry `[0]` and reports no degree.
///
/// ```
/// use dob::poly::Polynomial;
/// let p = Polynomial::new(vec![2.0, 3.0, 1.0]); // s^2 + 3s + 2
/// assert_eq!(p.degree(), Some(2));
/// assert_eq!(p.eval_real(-1.0), 0.0);
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// Monic polynomial with the given real roots, built by repeated
    /// multiplication with (s - r).
    pub fn from_real_roots(roots: &[f64]) -> Self {
        let mut p = Polynomial::constant(1.0);
        for &r in roots {
            p = p.mul(&Polynomial::new(vec![-r, 1.0]));
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().expect("coeffs never empty")
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k + 1) as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Divide by the leading coefficient. Gains entered by the user are
    /// preserved everywhere else; this is used only at comparison
    /// boundaries such as root finding.
    pub fn monic(&self) -> Polynomial {
        let lead = self.leading();
        if lead == 0.0 || lead == 1.0 {
            self.clone()
        } else {
            self.scale(1.0 / lead)
        }
    }

    /// Taylor shift: returns q with q(s) = p(s + c).
    pub fn shift(&self, c: f64) -> Polynomial {
        // Synthetic division by (s - (-c)) applied repeatedly rewrites the
        // coefficients in the shifted basis.
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let (next, cur) = (a[j + 1], a[j]);
                a[j] = cur + c * next;
            }
        }
        Polynomial::new(a)
    }

    /// All `deg(p)` roots with multiplicity, via the eigenvalues of the
    /// companion matrix of the monic normalization, polished with one
    /// Newton step each.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let deg = self.degree().ok_or(Error::NoRootsDefined)?;
        if deg == 0 {
            return Err(Error::NoRootsDefined);
        }
        let monic = self.monic();
        let c = monic.coeffs();
        let mut m = DMatrix::<f64>::zeros(deg, deg);
        for i in 0..deg - 1 {
            m[(i + 1, i)] = 1.0;
        }
        for i in 0..deg {
            m[(i, deg - 1)] = -c[i];
        }
        let dp = self.derivative();
        let mut roots: Vec<Complex64> = m
            .complex_eigenvalues()
            .iter()
            .map(|&r| {
                let fr = self.eval(r);
                let dfr = dp.eval(r);
                if dfr.norm() > 1e-300 {
                    let polished = r - fr / dfr;
                    if self.eval(polished).norm() < fr.norm() {
                        return polished;
                    }
                }
                r
            })
            .collect();
        roots.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        Ok(roots)
    }

    /// Strict Hurwitz test through the roots: every root must satisfy
    /// Re(root) < -margin.
    pub fn is_hurwitz(&self, margin: f64) -> Result<bool> {
        let p = self.positive_leading()?;
        let roots = p.roots()?;
        // Roots within round-off of the test line count as failures; a
        // certificate must not hinge on the sign of a 1e-17 residue.
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        let guard = 1e-12 * scale;
        Ok(roots.iter().all(|r| r.re < -margin - guard))
    }

    /// Strict Hurwitz test through the Routh array, independent of the
    /// root finder. A margin shifts the test line: p(s - margin) is fed to
    /// the array so acceptance means Re(root) < -margin.
    pub fn is_hurwitz_routh(&self, margin: f64) -> Result<bool> {
        let p = self.positive_leading()?;
        let shifted = if margin != 0.0 { p.shift(-margin) } else { p };
        Ok(routh_first_column_positive(shifted.coeffs()))
    }

    fn positive_leading(&self) -> Result<Polynomial> {
        if self.degree().is_none() {
            return Err(Error::ZeroPolynomial);
        }
        if self.leading() < 0.0 {
            Ok(self.scale(-1.0))
        } else {
            Ok(self.clone())
        }
    }
}

/// Routh array acceptance: all first-column entries strictly positive.
/// A vanishing pivot means roots on or right of the imaginary axis, which
/// strict Hurwitzness rejects, so it is reported as failure rather than
/// patched with the classical epsilon trick.
fn routh_first_column_positive(ascending: &[f64]) -> bool {
    let n = ascending.len() - 1; // degree
    if n == 0 {
        return true;
    }
    let scale = ascending.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let tiny = 1e-14 * (1.0 + scale);
    // rows indexed by descending powers
    let width = n / 2 + 1;
    let mut prev = vec![0.0; width + 1];
    let mut cur = vec![0.0; width + 1];
    for (i, k) in (0..=n).rev().enumerate() {
        let v = ascending[k];
        if i % 2 == 0 {
            prev[i / 2] = v;
        } else {
            cur[i / 2] = v;
        }
    }
    if prev[0] <= tiny {
        return false;
    }
    for _ in 0..n {
        if cur[0].abs() <= tiny {
            return false;
        }
        if cur[0] < 0.0 {
            return false;
        }
        let mut next = vec![0.0; width + 1];
        for j in 0..width {
            next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
        }
        prev = std::mem::take(&mut cur);
        cur = next;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.coeffs(), &[1.0, 2.0]);
        assert_eq!(p.degree(), Some(1));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(Polynomial::new(vec![0.0, 0.0]).degree(), None);
    }

    #[test]
    fn shift_moves_roots() {
        // p(s) = (s+1)(s+2); p(s-1) has roots at 0 and -1
        let p = Polynomial::from_real_roots(&[-1.0, -2.0]);
        let q = p.shift(-1.0);
        assert!(q.eval_real(0.0).abs() < 1e-12);
        assert!(q.eval_real(-1.0).abs() < 1e-12);
    }

    #[test]
    fn difference_of_squares_roots() {
        let p = Polynomial::new(vec![-1.0, 0.0, 1.0]);
        let mut roots: Vec<f64> = p.roots().unwrap().iter().map(|r| r.re).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((roots[0] + 1.0).abs() < 1e-10);
        assert!((roots[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn repeated_root() {
        let p = Polynomial::new(vec![1.0, 2.0, 1.0]);
        for r in p.roots().unwrap() {
            assert!((r + Complex64::new(1.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn cubic_with_integer_roots() {
        let p = Polynomial::new(vec![6.0, 11.0, 6.0, 1.0]);
        let roots = p.roots().unwrap();
        for target in [-1.0, -2.0, -3.0] {
            assert!(
                roots.iter().any(|r| (r - target).norm() < 1e-8),
                "missing root {target}"
            );
        }
    }

    #[test]
    fn hurwitz_examples() {
        assert!(Polynomial::new(vec![1.0, 1.0]).is_hurwitz(0.0).unwrap());
        assert!(!Polynomial::new(vec![1.0, 0.0, 1.0]).is_hurwitz(0.0).unwrap());
        // (s+1)(s^2+1) has imaginary-axis roots
        let p = Polynomial::new(vec![1.0, 1.0, 1.0, 1.0]);
        assert!(!p.is_hurwitz(0.0).unwrap());
        assert!(!p.is_hurwitz_routh(0.0).unwrap());
    }

    #[test]
    fn routh_margin_shift() {
        // roots at -1 and -2: Hurwitz with margin 0.5, not with margin 1.5
        let p = Polynomial::from_real_roots(&[-1.0, -2.0]);
        assert!(p.is_hurwitz_routh(0.5).unwrap());
        assert!(!p.is_hurwitz_routh(1.5).unwrap());
    }
}
