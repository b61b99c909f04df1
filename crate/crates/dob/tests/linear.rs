//! Loop-level checks of the linear simulation and recovery machinery:
//! disturbance rejection, frequency/time consistency, noise passthrough,
//! integrator order, and the error paths for stiff or unstable loops.

use dob::benchmarks::{b1_controller, b1_family, b1_qspec, b1_test_vertex, hf_noise_fixture};
use dob::linsim::{recovery_report, simulate_linear};
use dob::qfilter::{q_transfer, QFilterSpec};
use dob::signal::SignalSpec;
use dob::ss::{closed_loop_statespace, StateSpace};
use dob::tf::TransferFunction;
use dob::Error;
use num_complex::Complex64;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn b1_nominal_loop(tau: f64) -> StateSpace {
    let pn = b1_family().nominal().transfer_function().unwrap();
    let c = b1_controller();
    let q = q_transfer(&b1_qspec(tau)).unwrap();
    closed_loop_statespace(&pn, &pn, &c, &q).unwrap()
}

/// Plant with a right-half-plane zero: the DOB loop on it goes unstable
/// once the filter is fast, which exercises every unstable-loop guard.
fn unstable_loop_blocks() -> (TransferFunction, TransferFunction, TransferFunction, QFilterSpec) {
    let p = TransferFunction::from_coeffs(vec![1.0, -1.0], vec![1.0, 2.0, 1.0]).unwrap();
    let pn = TransferFunction::from_coeffs(vec![1.0], vec![1.0, 1.0]).unwrap();
    let c = TransferFunction::from_coeffs(vec![1.0], vec![1.0]).unwrap();
    (p, pn, c, QFilterSpec::new(1, vec![1.0], 0.1).unwrap())
}

#[test]
fn zero_inputs_leave_the_output_identically_zero() {
    let trace = simulate_linear(
        &b1_nominal_loop(1e-2),
        &SignalSpec::Zero,
        &SignalSpec::Zero,
        &SignalSpec::Zero,
        1.0,
        5e-4,
    )
    .unwrap();
    assert!(trace.column("y").unwrap().iter().all(|v| *v == 0.0));
    assert!(trace.column("u").unwrap().iter().all(|v| *v == 0.0));
}

#[test]
fn step_disturbance_is_rejected_at_dc() {
    // unity dc gain of Q zeroes the disturbance numerator at s = 0
    let trace = simulate_linear(
        &b1_nominal_loop(1e-2),
        &SignalSpec::Zero,
        &SignalSpec::Step { amplitude: 1.0, start_time: 0.0 },
        &SignalSpec::Zero,
        20.0,
        5e-4,
    )
    .unwrap();
    let y = trace.column("y").unwrap();
    let peak = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(peak > 1e-3, "step never reached the output, peak {peak}");
    assert!(y.last().unwrap().abs() < 1e-6, "dc residual {}", y.last().unwrap());
}

#[test]
fn sinusoid_disturbance_residual_sits_under_the_open_loop_level() {
    // d = sin(10 t) against tau = 1e-3: omega = 1/(100 tau)
    let loop_ss = b1_nominal_loop(1e-3);
    let trace = simulate_linear(
        &loop_ss,
        &SignalSpec::Zero,
        &SignalSpec::Sinusoid { amplitude: 1.0, frequency: 10.0 },
        &SignalSpec::Zero,
        15.0,
        5e-5,
    )
    .unwrap();
    let amp = trace.sup_abs_after("y", 10.0).unwrap();
    assert!((amp - 7.845653442620e-4).abs() < 1e-9, "amp {amp}");

    let pn = b1_family().nominal().transfer_function().unwrap();
    let open_loop = pn.eval(Complex64::new(0.0, 10.0)).norm();
    assert!(amp <= 0.05 * open_loop, "residual {amp} vs open loop {open_loop}");
}

#[test]
fn measured_amplitude_matches_the_frequency_response() {
    let loop_ss = b1_nominal_loop(1e-2);
    let trace = simulate_linear(
        &loop_ss,
        &SignalSpec::Zero,
        &SignalSpec::Sinusoid { amplitude: 1.0, frequency: 2.0 },
        &SignalSpec::Zero,
        15.0,
        5e-4,
    )
    .unwrap();
    let amp = trace.sup_abs_after("y", 10.0).unwrap();
    let theory = loop_ss.freq_response_siso(2.0, 1, 0).norm();
    assert!((amp - theory).abs() <= 0.02 * theory, "measured {amp} vs |T_yd| {theory}");
}

#[test]
fn high_frequency_noise_passes_through_at_the_complementary_gain() {
    let (p, c, qspec) = hf_noise_fixture();
    let q = q_transfer(&qspec).unwrap();
    let loop_ss = closed_loop_statespace(&p, &p, &c, &q).unwrap();
    let omega = 64.0 * std::f64::consts::PI;
    let trace = simulate_linear(
        &loop_ss,
        &SignalSpec::Zero,
        &SignalSpec::Zero,
        &SignalSpec::Sinusoid { amplitude: 1.0, frequency: omega },
        3.0,
        2.5e-4,
    )
    .unwrap();
    let amp = trace.sup_abs_after("y", 2.0).unwrap();
    let pc = p.mul(&c).eval(Complex64::new(0.0, omega));
    let theory = (pc / (Complex64::new(1.0, 0.0) + pc)).norm();
    assert!((amp - theory).abs() <= 0.05 * theory, "measured {amp} vs |PC/(1+PC)| {theory}");
    assert!((amp - 8.978133849852e-1).abs() < 1e-9, "amp {amp}");
}

#[test]
fn rk4_refinement_shows_fourth_order_convergence() {
    let loop_ss = b1_nominal_loop(0.25);
    let d = SignalSpec::Sinusoid { amplitude: 1.0, frequency: 1.0 };
    let terminal = |dt: f64| {
        let tr =
            simulate_linear(&loop_ss, &SignalSpec::Zero, &d, &SignalSpec::Zero, 2.0, dt).unwrap();
        *tr.column("y").unwrap().last().unwrap()
    };
    let reference = terminal(2.5e-4);
    let dts = [8e-3, 4e-3, 2e-3, 1e-3];
    let errs: Vec<f64> = dts.iter().map(|&dt| (terminal(dt) - reference).abs()).collect();
    // least-squares slope of log(err) against log(dt)
    let lx: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ly: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = lx.iter().sum::<f64>() / 4.0;
    let my = ly.iter().sum::<f64>() / 4.0;
    let slope = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!(slope >= 3.7, "observed order {slope}, errors {errs:?}");
}

#[test]
fn overlong_step_for_a_stiff_loop_is_rejected() {
    let err = simulate_linear(
        &b1_nominal_loop(1e-3),
        &SignalSpec::Zero,
        &SignalSpec::Zero,
        &SignalSpec::Zero,
        1.0,
        1e-3,
    )
    .unwrap_err();
    assert!(matches!(err, Error::StepTooLarge { .. }));
    assert!(err.to_string().contains("step too large for stiff loop"));
}

#[test]
fn unstable_loop_is_reported_not_integrated() {
    let (p, pn, c, qspec) = unstable_loop_blocks();
    let q = q_transfer(&qspec).unwrap();
    let loop_ss = closed_loop_statespace(&p, &pn, &c, &q).unwrap();
    assert!(loop_ss.max_eigenvalue_real_part() > 0.0);
    let err = simulate_linear(
        &loop_ss,
        &SignalSpec::Zero,
        &SignalSpec::Step { amplitude: 1.0, start_time: 0.0 },
        &SignalSpec::Zero,
        1.0,
        1e-3,
    )
    .unwrap_err();
    assert!(matches!(err, Error::UnstableLoop { .. }), "got {err}");
}

#[test]
fn recovery_deviation_vanishes_as_frequency_goes_to_zero() {
    let pn = b1_family().nominal().transfer_function().unwrap();
    let p = b1_test_vertex().transfer_function().unwrap();
    let rep = recovery_report(&p, &pn, &b1_controller(), &b1_qspec(1e-3), &[1e-6, 1e-5]).unwrap();
    for row in &rep.rows {
        assert!(row.yd_mag < 1e-8, "|T_yd({})| = {}", row.omega, row.yd_mag);
    }
}

#[test]
fn recovery_is_exact_when_the_plant_matches_the_model() {
    let pn = b1_family().nominal().transfer_function().unwrap();
    let rep = recovery_report(&pn, &pn, &b1_controller(), &b1_qspec(1e-2), &log_grid(1e-2, 1e2, 20))
        .unwrap();
    for row in &rep.rows {
        assert!(
            row.yr_deviation <= 1e-10 * row.nominal_mag.max(1.0),
            "deviation {} at omega {}",
            row.yr_deviation,
            row.omega
        );
    }
}

#[test]
fn recovery_on_the_perturbed_vertex_stays_within_five_percent() {
    let pn = b1_family().nominal().transfer_function().unwrap();
    let p = b1_test_vertex().transfer_function().unwrap();
    let rep = recovery_report(&p, &pn, &b1_controller(), &b1_qspec(1e-3), &log_grid(1e-3, 10.0, 50))
        .unwrap();
    let mut worst_yd: f64 = 0.0;
    let mut worst_yr: f64 = 0.0;
    for row in &rep.rows {
        worst_yd = worst_yd.max(row.yd_mag / row.nominal_sensitivity_mag);
        worst_yr = worst_yr.max(row.yr_deviation / row.nominal_mag);
    }
    assert!((worst_yd - 1.000554740999e-2).abs() < 1e-9, "worst yd ratio {worst_yd}");
    assert!((worst_yr - 1.846831513263e-3).abs() < 1e-9, "worst yr ratio {worst_yr}");
    assert!(worst_yd <= 0.05 && worst_yr <= 0.05);
}

#[test]
fn recovery_refuses_an_unstable_loop() {
    let (p, pn, c, qspec) = unstable_loop_blocks();
    let err = recovery_report(&p, &pn, &c, &qspec, &[1.0]).unwrap_err();
    assert!(matches!(err, Error::UnstableLoop { .. }), "got {err}");
}
