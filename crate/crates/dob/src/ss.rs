//! State-space realizations and the full observer-loop interconnection.

use crate::error::{Error, Result};
use crate::tf::TransferFunction;
use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "A must be square");
        assert_eq!(b.nrows(), a.nrows(), "B row count must match A");
        assert_eq!(c.ncols(), a.ncols(), "C column count must match A");
        assert_eq!(d.nrows(), c.nrows(), "D rows must match outputs");
        assert_eq!(d.ncols(), b.ncols(), "D columns must match inputs");
        StateSpace { a, b, c, d }
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn n_outputs(&self) -> usize {
        self.c.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        if self.order() == 0 {
            return Vec::new();
        }
        self.a.complex_eigenvalues().iter().copied().collect()
    }

    pub fn max_eigenvalue_real_part(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|e| e.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Transfer from one input to one output at s = j*omega:
    /// C (sI - A)^{-1} B + D.
    pub fn freq_response_siso(&self, omega: f64, input: usize, output: usize) -> Complex64 {
        let n = self.order();
        let d = Complex64::new(self.d[(output, input)], 0.0);
        if n == 0 {
            return d;
        }
        let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex::new(-self.a[(i, j)], 0.0);
            }
            m[(i, i)] += Complex::new(0.0, omega);
        }
        let mut rhs = DMatrix::<Complex<f64>>::zeros(n, 1);
        for i in 0..n {
            rhs[(i, 0)] = Complex::new(self.b[(i, input)], 0.0);
        }
        let x = m
            .lu()
            .solve(&rhs)
            .expect("jwI - A singular: pole on the imaginary axis at the probe");
        let mut acc = d;
        for j in 0..n {
            acc += Complex64::new(self.c[(output, j)], 0.0) * x[(j, 0)];
        }
        acc
    }
}

/// Controllable canonical realization of a proper SISO transfer function.
/// Biproper inputs are split into a feedthrough D plus a strictly proper
/// remainder.
pub fn tf_to_statespace(tf: &TransferFunction) -> Result<StateSpace> {
    let rel = tf.relative_degree();
    if rel < 0 {
        return Err(Error::ImproperTransferFunction(rel));
    }
    let den = tf.den.coeffs().to_vec();
    let n = den.len() - 1;
    let lead = den[n];
    let den_monic: Vec<f64> = den.iter().map(|c| c / lead).collect();
    let mut num: Vec<f64> = tf.num.coeffs().iter().map(|c| c / lead).collect();
    num.resize(n + 1, 0.0);

    let mut d_term = 0.0;
    if n == 0 {
        d_term = num[0];
    } else if num[n] != 0.0 {
        d_term = num[n];
        for k in 0..=n {
            num[k] -= d_term * den_monic[k];
        }
    }

    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    if n > 0 {
        for j in 0..n {
            a[(n - 1, j)] = -den_monic[j];
        }
    }
    let mut b = DMatrix::<f64>::zeros(n, 1);
    if n > 0 {
        b[(n - 1, 0)] = 1.0;
    }
    let mut c = DMatrix::<f64>::zeros(1, n);
    for j in 0..n {
        c[(0, j)] = num[j];
    }
    let d = DMatrix::<f64>::from_element(1, 1, d_term);
    Ok(StateSpace::new(a, b, c, d))
}

/// State-space model of the entire observer loop with inputs (r, d, n) and
/// outputs (y, u).
///
/// The interconnection realizes four blocks separately so that no pole-zero
/// cancellation can hide internal modes:
///
///   plant        x_p' = A_p x_p + B_p (u + d),          y  = C_p x_p
///   controller   x_c' = A_c x_c + B_c (r - y - n),      ub = C_c x_c + D_c (r - y - n)
///   filter Q     x_q' = A_q x_q + B_q u,                q  = C_q x_q
///   Pn^{-1} Q    x_i' = A_i x_i + B_i (y + n),          v  = C_i x_i + D_i (y + n)
///
/// with the disturbance estimate dhat = v - q and u = ub - dhat. The
/// Pn^{-1} Q block is realized from the product (den_Pn * num_Q) over
/// (num_Pn * den_Q), which is proper whenever the relative degree of Q is
/// at least that of Pn. The plant and Q are strictly proper (D = 0), so u
/// depends only on states and the exogenous inputs and there is no
/// algebraic loop.
pub fn closed_loop_statespace(
    p: &TransferFunction,
    pn: &TransferFunction,
    c: &TransferFunction,
    q: &TransferFunction,
) -> Result<StateSpace> {
    if !p.is_strictly_proper() {
        return Err(Error::InvalidParameter {
            field: "P".into(),
            reason: "plant must be strictly proper".into(),
        });
    }
    if !pn.is_strictly_proper() {
        return Err(Error::InvalidParameter {
            field: "Pn".into(),
            reason: "nominal model must be strictly proper".into(),
        });
    }
    if pn.num.is_zero() {
        return Err(Error::InvalidParameter {
            field: "Pn".into(),
            reason: "nominal model numerator must be nonzero (its inverse is realized)".into(),
        });
    }
    if !c.is_proper() {
        return Err(Error::InvalidParameter {
            field: "C".into(),
            reason: "controller must be proper".into(),
        });
    }
    let has_q = !q.is_zero();
    if has_q {
        if !q.is_strictly_proper() {
            return Err(Error::InvalidParameter {
                field: "Q".into(),
                reason: "Q must be strictly proper".into(),
            });
        }
        if q.relative_degree() < pn.relative_degree() {
            return Err(Error::InvalidParameter {
                field: "Q".into(),
                reason: "relative degree of Q must be at least that of Pn".into(),
            });
        }
    }

    let sp = tf_to_statespace(p)?;
    let sc = tf_to_statespace(c)?;
    let (sq, si) = if has_q {
        let pn_inv_q = TransferFunction::new(pn.den.mul(&q.num), pn.num.mul(&q.den))?;
        (Some(tf_to_statespace(q)?), Some(tf_to_statespace(&pn_inv_q)?))
    } else {
        (None, None)
    };

    let dims: Vec<usize> = {
        let mut v = vec![sp.order(), sc.order()];
        if let (Some(sq), Some(si)) = (&sq, &si) {
            v.push(sq.order());
            v.push(si.order());
        }
        v
    };
    let total: usize = dims.iter().sum();
    let ofs: Vec<usize> = dims
        .iter()
        .scan(0usize, |acc, &d| {
            let start = *acc;
            *acc += d;
            Some(start)
        })
        .collect();

    // output row for y over the stacked state (D_p = 0)
    let mut y_row = vec![0.0; total];
    for j in 0..sp.order() {
        y_row[ofs[0] + j] = sp.c[(0, j)];
    }

    let dc0 = sc.d[(0, 0)];
    // ub = C_c x_c + D_c (r - y - n), split into state part and input gains
    let mut ub_sv = vec![0.0; total];
    for j in 0..sc.order() {
        ub_sv[ofs[1] + j] = sc.c[(0, j)];
    }
    for j in 0..total {
        ub_sv[j] -= dc0 * y_row[j];
    }
    let (ub_r, ub_n) = (dc0, -dc0);

    // dhat = (Pn^{-1}Q)(y + n) - Q(u)
    let mut dhat_sv = vec![0.0; total];
    let mut dhat_n = 0.0;
    if let (Some(sq), Some(si)) = (&sq, &si) {
        for j in 0..si.order() {
            dhat_sv[ofs[3] + j] = si.c[(0, j)];
        }
        let di0 = si.d[(0, 0)];
        for j in 0..total {
            dhat_sv[j] += di0 * y_row[j];
        }
        dhat_n = di0;
        for j in 0..sq.order() {
            dhat_sv[ofs[2] + j] -= sq.c[(0, j)];
        }
    }

    let u_sv: Vec<f64> = ub_sv
        .iter()
        .zip(dhat_sv.iter())
        .map(|(a, b)| a - b)
        .collect();
    let u_r = ub_r;
    let u_d = 0.0;
    let u_n = ub_n - dhat_n;

    let mut a = DMatrix::<f64>::zeros(total, total);
    let mut b = DMatrix::<f64>::zeros(total, 3);

    // plant: x_p' = A_p x_p + B_p (u + d)
    for i in 0..sp.order() {
        for j in 0..sp.order() {
            a[(ofs[0] + i, ofs[0] + j)] = sp.a[(i, j)];
        }
        let bi = sp.b[(i, 0)];
        for j in 0..total {
            a[(ofs[0] + i, j)] += bi * u_sv[j];
        }
        b[(ofs[0] + i, 0)] += bi * u_r;
        b[(ofs[0] + i, 1)] += bi * (u_d + 1.0);
        b[(ofs[0] + i, 2)] += bi * u_n;
    }

    // controller: x_c' = A_c x_c + B_c (r - y - n)
    for i in 0..sc.order() {
        for j in 0..sc.order() {
            a[(ofs[1] + i, ofs[1] + j)] = sc.a[(i, j)];
        }
        let bi = sc.b[(i, 0)];
        for j in 0..total {
            a[(ofs[1] + i, j)] -= bi * y_row[j];
        }
        b[(ofs[1] + i, 0)] += bi;
        b[(ofs[1] + i, 2)] -= bi;
    }

    if let (Some(sq), Some(si)) = (&sq, &si) {
        // filter: x_q' = A_q x_q + B_q u
        for i in 0..sq.order() {
            for j in 0..sq.order() {
                a[(ofs[2] + i, ofs[2] + j)] = sq.a[(i, j)];
            }
            let bi = sq.b[(i, 0)];
            for j in 0..total {
                a[(ofs[2] + i, j)] += bi * u_sv[j];
            }
            b[(ofs[2] + i, 0)] += bi * u_r;
            b[(ofs[2] + i, 1)] += bi * u_d;
            b[(ofs[2] + i, 2)] += bi * u_n;
        }
        // inverse-model filter: x_i' = A_i x_i + B_i (y + n)
        for i in 0..si.order() {
            for j in 0..si.order() {
                a[(ofs[3] + i, ofs[3] + j)] = si.a[(i, j)];
            }
            let bi = si.b[(i, 0)];
            for j in 0..total {
                a[(ofs[3] + i, j)] += bi * y_row[j];
            }
            b[(ofs[3] + i, 2)] += bi;
        }
    }

    let mut c_out = DMatrix::<f64>::zeros(2, total);
    let mut d_out = DMatrix::<f64>::zeros(2, 3);
    for j in 0..total {
        c_out[(0, j)] = y_row[j];
        c_out[(1, j)] = u_sv[j];
    }
    d_out[(1, 0)] = u_r;
    d_out[(1, 1)] = u_d;
    d_out[(1, 2)] = u_n;

    Ok(StateSpace::new(a, b, c_out, d_out))
}
