//! Frozen benchmark fixtures shared by the tests, the examples and the CLI.
//!
//! Every number here is a toolkit choice, not a law: the fixtures exist so
//! regressions have a stable anchor. If any value changes, the frozen
//! regression constants in the test suite must be regenerated in the same
//! commit.
//!
//! Naming: `b1` is the linear interval-family benchmark used by the
//! analysis and linear-simulation tests; `n1` is the nonlinear benchmark
//! with one zero-dynamics state used by the transient-recovery and peaking
//! tests. The CLI accepts these names wherever a config may reference a
//! built-in fixture.

use crate::error::Result;
use crate::family::PlantFamily;
use crate::nonlin::dob::DobParams;
use crate::nonlin::field::{Coefficient, PolynomialField, Term};
use crate::nonlin::plant::{BaselineController, Envelope, NominalModel, NormalFormPlant};
use crate::nonlin::sphi::estimate_s_phi;
use crate::poly::Polynomial;
use crate::qfilter::{GainInterval, QFilterSpec};
use crate::signal::SignalSpec;
use crate::tf::TransferFunction;

/// Interval family for the linear benchmark:
///
/// ```text
///            s + beta_0
/// P(s) = g --------------------,  alpha_1 in [2,4], alpha_0 in [1,3],
///          s^2 + alpha_1 s + alpha_0   beta_0 in [1,2], g in [0.8,1.25]
/// ```
///
/// Nominal plant at the interval midpoints, g* = 1.025.
pub fn b1_family() -> PlantFamily {
    PlantFamily {
        n: 2,
        nu: 1,
        alpha_bounds: vec![[1.0, 3.0], [2.0, 4.0]],
        beta_bounds: vec![[1.0, 2.0]],
        gain: GainInterval::new(0.8, 1.25, 1.025).unwrap(),
    }
}

/// C(s) = 5(s+1)/(s+10); first order, stabilizes every member of
/// [`b1_family`] through the nominal loop.
pub fn b1_controller() -> TransferFunction {
    TransferFunction::new(
        Polynomial::new(vec![5.0, 5.0]),
        Polynomial::new(vec![10.0, 1.0]),
    )
    .unwrap()
}

/// First-order Q-filter a = [1] at the given time constant.
pub fn b1_qspec(tau: f64) -> QFilterSpec {
    QFilterSpec::new(1, vec![1.0], tau).unwrap()
}

/// The vertex P(s) = 1.25 (s+2) / (s^2 + 2s + 1) used by single-plant
/// regressions (pole loci, recovery sweeps).
pub fn b1_test_vertex() -> crate::family::PlantSample {
    crate::family::PlantSample {
        alpha: vec![1.0, 2.0],
        beta: vec![2.0],
        g: 1.25,
        provenance: crate::family::Provenance::Vertex,
    }
}

/// Fixture violating only the nominal-stabilization condition: the family
/// pole sits in the right half plane and the controller is zero, so the
/// Q = 0 loop is the unstable plant itself. No zeros (trivially minimum
/// phase) and the first-order filter passes the disk test for this gain
/// interval.
pub fn unstable_nominal_fixture() -> (PlantFamily, TransferFunction, QFilterSpec) {
    let family = PlantFamily {
        n: 1,
        nu: 1,
        alpha_bounds: vec![[-2.0, -1.0]],
        beta_bounds: vec![],
        gain: GainInterval::new(0.8, 1.25, 1.0).unwrap(),
    };
    let zero_controller = TransferFunction::new(
        Polynomial::new(vec![0.0]),
        Polynomial::new(vec![1.0]),
    )
    .unwrap();
    (family, zero_controller, QFilterSpec::new(1, vec![1.0], 1e-2).unwrap())
}

/// Fixture violating only the minimum-phase condition: same family shape
/// as [`b1_family`] but with beta_0 in [-0.5, 0.5], so part of the family
/// carries a right-half-plane zero (and the nominal a zero at the origin).
pub fn nonminimum_phase_fixture() -> (PlantFamily, TransferFunction, QFilterSpec) {
    let family = PlantFamily {
        n: 2,
        nu: 1,
        alpha_bounds: vec![[1.0, 3.0], [2.0, 4.0]],
        beta_bounds: vec![[-0.5, 0.5]],
        gain: GainInterval::new(0.8, 1.25, 1.025).unwrap(),
    };
    (family, b1_controller(), b1_qspec(1e-2))
}

/// Fixture violating only the fast-dynamics condition: the filter tail
/// a = [8, 2, 3] makes s^3 + 3s^2 + 2s + 8 (g/g*) non-Hurwitz already at
/// g = g* (3·2 < 8), while the degenerate stable family and the unit
/// controller keep the other two conditions green.
pub fn disk_fail_fixture() -> (PlantFamily, TransferFunction, QFilterSpec) {
    let family = PlantFamily {
        n: 3,
        nu: 3,
        alpha_bounds: vec![[6.0, 6.0], [11.0, 11.0], [6.0, 6.0]],
        beta_bounds: vec![],
        gain: GainInterval::new(0.8, 1.25, 1.0).unwrap(),
    };
    let unit_controller = TransferFunction::new(
        Polynomial::new(vec![1.0]),
        Polynomial::new(vec![1.0]),
    )
    .unwrap();
    (family, unit_controller, QFilterSpec::new(3, vec![8.0, 2.0, 3.0], 1e-2).unwrap())
}

/// P = Pn = 1/(s+1) with the wide-band controller C = 400(s+1)/(s+10).
/// The large loop gain keeps the complementary sensitivity near one far
/// beyond the filter corner, which is what makes the high-frequency noise
/// invariant observable at tau = 0.1.
pub fn hf_noise_fixture() -> (TransferFunction, TransferFunction, QFilterSpec) {
    let p = TransferFunction::new(
        Polynomial::new(vec![1.0]),
        Polynomial::new(vec![1.0, 1.0]),
    )
    .unwrap();
    let c = TransferFunction::new(
        Polynomial::new(vec![400.0, 400.0]),
        Polynomial::new(vec![10.0, 1.0]),
    )
    .unwrap();
    (p, c, QFilterSpec::new(1, vec![1.0], 0.1).unwrap())
}

/// Everything needed to run one nonlinear closed loop.
#[derive(Debug, Clone)]
pub struct NonlinearBenchmark {
    pub plant: NormalFormPlant,
    pub nominal: NominalModel,
    pub controller: BaselineController,
    pub envelope: Envelope,
    pub params: DobParams,
    /// Initial (x, z, eta), inside the envelope's initial-condition box.
    pub x0z0eta0: Vec<f64>,
    /// Initial (z_bar, q, p); empty means observer at rest.
    pub dob0: Vec<f64>,
    pub t_end: f64,
}

fn n1_plant() -> NormalFormPlant {
    // f = th1 x1 x2 + th2 z, g = 1 + th3 x1^2 clipped to [1, 2], zdot = -z + x1
    let f = PolynomialField {
        terms: vec![
            Term { coeff: Coefficient::Param { param: 0 }, powers: vec![1, 1] },
            Term { coeff: Coefficient::Param { param: 1 }, powers: vec![0, 0, 1] },
        ],
    };
    let g = PolynomialField {
        terms: vec![
            Term { coeff: Coefficient::Const(1.0), powers: vec![] },
            Term { coeff: Coefficient::Param { param: 2 }, powers: vec![2] },
        ],
    };
    let h = PolynomialField {
        terms: vec![
            Term { coeff: Coefficient::Const(-1.0), powers: vec![0, 0, 1] },
            Term { coeff: Coefficient::Const(1.0), powers: vec![1] },
        ],
    };
    NormalFormPlant {
        nu: 2,
        n: 3,
        f,
        g,
        g_clip: Some([1.0, 2.0]),
        h: vec![h],
        theta: vec![0.6, 1.2, 0.2],
        theta_bounds: vec![[0.4, 0.6], [0.8, 1.2], [0.0, 0.2]],
        gain: GainInterval::new(1.0, 2.0, 1.0).unwrap(),
        d: SignalSpec::Sinusoid { amplitude: 0.5, frequency: 2.0 },
        d_z: SignalSpec::Zero,
    }
}

fn n1_nominal() -> NominalModel {
    NominalModel {
        f_n: PolynomialField {
            terms: vec![
                Term { coeff: Coefficient::Param { param: 0 }, powers: vec![1, 1] },
                Term { coeff: Coefficient::Param { param: 1 }, powers: vec![0, 0, 1] },
            ],
        },
        g_n: PolynomialField::constant(1.0),
        h_n: vec![PolynomialField {
            terms: vec![
                Term { coeff: Coefficient::Const(-1.0), powers: vec![0, 0, 1] },
                Term { coeff: Coefficient::Const(1.0), powers: vec![1] },
            ],
        }],
        theta: vec![0.5, 1.0],
    }
}

fn n1_controller() -> BaselineController {
    BaselineController {
        a: vec![vec![0.0, 1.0], vec![-6.0, -11.0]],
        b: vec![0.0, 1.0],
        c: vec![162.0, 351.0],
        d: -40.0,
    }
}

fn n1_envelope() -> Envelope {
    Envelope {
        u_x: vec![[-1.2, 1.2], [-1.2, 1.2]],
        z: vec![[-0.8, 0.8]],
        z_bar: vec![[-0.8, 0.8]],
        eta: vec![[-0.12, 0.12], [-0.12, 0.12]],
        m_d: 0.5,
        m_dz: 0.0,
        s0: vec![[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.12, 0.12], [-0.12, 0.12]],
    }
}

/// Monte-Carlo sample count used when sizing the n1 dead zone.
pub const N1_SPHI_SAMPLES: usize = 20_000;
/// Seed for the dead-zone estimate; fixed so the fixture is reproducible.
pub const N1_SPHI_SEED: u64 = 7;

/// Nonlinear benchmark: relative degree 2, one ISS zero-dynamics state,
/// true parameters 20% above their nominal values plus an unmodeled gain
/// term, d = 0.5 sin(2t).
///
/// The plant is
///
/// ```text
/// x1' = x2
/// x2' = th1 x1 x2 + th2 z + g(x)(u + d),   g = 1 + th3 x1^2 (clipped to [1,2])
/// z'  = -z + x1
/// ```
///
/// with th = (0.6, 1.2, 0.2) against nominal th* = (0.5, 1.0) and g_n = 1.
/// The baseline controller is a second-order output-feedback design
/// (eta' = [[0,1],[-6,-11]] eta + [0,1] y, u_bar = 162 eta1 + 351 eta2 - 40 y)
/// placing the nominal loop poles in the left half plane. The filter tail
/// a = [12, 7] has fast roots at -3 and -4; the saturation band for phi
/// comes from the Monte-Carlo dead-zone estimate over the envelope.
pub fn n1(tau: f64) -> Result<NonlinearBenchmark> {
    let plant = n1_plant();
    let nominal = n1_nominal();
    let controller = n1_controller();
    let envelope = n1_envelope();
    let sphi = estimate_s_phi(
        &plant,
        &nominal,
        &controller,
        &envelope,
        1.0,
        N1_SPHI_SAMPLES,
        N1_SPHI_SEED,
    )?;
    let params = DobParams {
        qspec: QFilterSpec::new(2, vec![12.0, 7.0], tau)?,
        g_star: 1.0,
        sat_x_levels: vec![[-1.2, 1.2], [-1.2, 1.2]],
        sat_phi_interval: sphi.interval(),
        smoothing_width: None,
    };
    Ok(NonlinearBenchmark {
        plant,
        nominal,
        controller,
        envelope,
        params,
        x0z0eta0: vec![0.4, 0.0, 0.3, 0.0, 0.0],
        dob0: vec![],
        t_end: 10.0,
    })
}

/// The n1 loop with uncertainty switched off: true parameters equal the
/// nominal ones, no disturbance, and the observer initialized consistently
/// with the plant (z_bar = z, q1 = y). Under exact models the DOB output
/// reproduces the nominal loop up to integration error, which is the
/// cheapest end-to-end sanity check the nonlinear stack has.
pub fn n1_zero_uncertainty(tau: f64) -> Result<NonlinearBenchmark> {
    let mut bench = n1(tau)?;
    bench.plant.theta = vec![0.5, 1.0, 0.0];
    bench.plant.d = SignalSpec::Zero;
    bench.x0z0eta0 = vec![0.3, 0.0, 0.2, 0.0, 0.0];
    bench.dob0 = vec![0.2, 0.3, 0.0, 0.0, 0.0];
    bench.t_end = 5.0;
    Ok(bench)
}

/// Linear/nonlinear pair describing the same double-integrator loop, used
/// to pin the two simulation stacks against each other.
#[derive(Debug, Clone)]
pub struct EquivalencePair {
    /// Double integrator in normal form, f = 0, g = 1, no zero dynamics.
    pub plant: NormalFormPlant,
    pub nominal: NominalModel,
    /// Observer-based stabilizer, u_bar = -2 xhat1 - 3 xhat2.
    pub controller: BaselineController,
    pub params: DobParams,
    pub envelope: Envelope,
    /// The same plant as a transfer function, 1/s^2.
    pub pn: TransferFunction,
    /// The same controller as a transfer function for the negative
    /// feedback convention: (50 s + 24) / (s^2 + 10 s + 35).
    pub c: TransferFunction,
}

/// Double-integrator fixture whose nonlinear loop is exactly linear:
/// saturation levels sit far outside any reachable value, every field is
/// affine, and the plant gain is known exactly. Closed-loop poles of the
/// nominal design sit at -1, -2, -3, -4.
pub fn double_integrator_pair(tau: f64) -> EquivalencePair {
    let plant = NormalFormPlant {
        nu: 2,
        n: 2,
        f: PolynomialField::zero(),
        g: PolynomialField::constant(1.0),
        g_clip: None,
        h: vec![],
        theta: vec![],
        theta_bounds: vec![],
        gain: GainInterval::new(1.0, 1.0, 1.0).unwrap(),
        d: SignalSpec::Sinusoid { amplitude: 0.5, frequency: 2.0 },
        d_z: SignalSpec::Zero,
    };
    let nominal = NominalModel {
        f_n: PolynomialField::zero(),
        g_n: PolynomialField::constant(1.0),
        h_n: vec![],
        theta: vec![],
    };
    // State feedback K = [2, 3] behind a Luenberger observer with
    // L = [7, 12]: controller matrix A - BK - LC.
    let controller = BaselineController {
        a: vec![vec![-7.0, 1.0], vec![-14.0, -3.0]],
        b: vec![7.0, 12.0],
        c: vec![-2.0, -3.0],
        d: 0.0,
    };
    let params = DobParams {
        qspec: QFilterSpec::new(2, vec![2.0, 3.0], tau).unwrap(),
        g_star: 1.0,
        sat_x_levels: vec![[-1e9, 1e9], [-1e9, 1e9]],
        sat_phi_interval: [-1e9, 1e9],
        smoothing_width: None,
    };
    let envelope = Envelope {
        u_x: vec![[-1e9, 1e9], [-1e9, 1e9]],
        z: vec![],
        z_bar: vec![],
        eta: vec![[-1e9, 1e9], [-1e9, 1e9]],
        m_d: 1.0,
        m_dz: 0.0,
        s0: vec![],
    };
    let pn = TransferFunction::new(
        Polynomial::new(vec![1.0]),
        Polynomial::new(vec![0.0, 0.0, 1.0]),
    )
    .unwrap();
    let c = TransferFunction::new(
        Polynomial::new(vec![24.0, 50.0]),
        Polynomial::new(vec![35.0, 10.0, 1.0]),
    )
    .unwrap();
    EquivalencePair { plant, nominal, controller, params, envelope, pn, c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::nominal_loop_poles;

    #[test]
    fn b1_controller_stabilizes_nominal() {
        let pn = b1_family().nominal().transfer_function().unwrap();
        let poles = nominal_loop_poles(&pn, &b1_controller()).unwrap();
        assert!(poles.iter().all(|p| p.re < 0.0));
    }

    #[test]
    fn triad_fixtures_validate() {
        for (family, c, q) in [
            unstable_nominal_fixture(),
            nonminimum_phase_fixture(),
            disk_fail_fixture(),
        ] {
            family.validate().unwrap();
            q.validate().unwrap();
            let _ = c.clone();
        }
    }

    #[test]
    fn n1_builds_and_validates() {
        let bench = n1(1e-2).unwrap();
        bench.plant.validate().unwrap();
        bench.nominal.validate_for(&bench.plant).unwrap();
        bench.params.validate().unwrap();
        bench.envelope.validate().unwrap();
        // gain envelope check: g stays inside [1, 2] over the whole box
        bench.plant.check_gain_bounds(&bench.envelope, 2000, 11).unwrap();
    }

    #[test]
    fn equivalence_controller_matches_transfer_function() {
        let pair = double_integrator_pair(0.05);
        let from_ss = pair.controller.loop_transfer_function().unwrap();
        let probes = [0.1, 1.0, 10.0];
        let a = from_ss.freq_response(&probes).unwrap();
        let b = pair.c.freq_response(&probes).unwrap();
        for ((va, vb), w) in a.iter().zip(&b).zip(&probes) {
            assert!((va - vb).norm() < 1e-9, "mismatch at {w}: {va} vs {vb}");
        }
    }
}
