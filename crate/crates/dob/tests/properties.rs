//! Randomized cross-checks between independent code paths: the Routh
//! table against the eigenvalue root finder, realizations against
//! transfer-function evaluation, the interconnected loop against its
//! block algebra, and the disk test against a brute-force gain sweep.

use dob::family::{check_minimum_phase, sample_family, PlantFamily};
use dob::nonlin::smooth_sat;
use dob::poly::Polynomial;
use dob::qfilter::{fast_char_poly, nyquist_disk_test_auto, q_transfer, GainInterval, QFilterSpec};
use dob::ss::{closed_loop_statespace, tf_to_statespace};
use dob::tf::TransferFunction;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn routh_agrees_with_the_root_finder(coeffs in prop::collection::vec(-3.0f64..3.0, 2..=9)) {
        prop_assume!(coeffs.last().unwrap().abs() > 1e-3);
        prop_assume!(coeffs[0].abs() > 1e-3);
        let p = Polynomial::new(coeffs);
        let roots = p.roots().unwrap();
        let scale = roots.iter().map(|r| r.norm()).fold(1.0f64, f64::max);
        // near-axis roots are genuinely ambiguous at double precision
        prop_assume!(roots.iter().all(|r| r.re.abs() > 1e-6 * scale));
        let by_roots = roots.iter().all(|r| r.re < 0.0);
        prop_assert_eq!(p.is_hurwitz_routh(0.0).unwrap(), by_roots);
    }

    #[test]
    fn q_filter_has_unity_dc_gain(
        nu in 1usize..=4,
        raw_tail in prop::collection::vec(0.2f64..4.0, 3),
        a0 in 0.2f64..4.0,
        tau in 1e-4f64..1.0,
    ) {
        let mut a = vec![a0];
        a.extend(raw_tail.into_iter().take(nu - 1));
        let q = q_transfer(&QFilterSpec::new(nu, a, tau).unwrap()).unwrap();
        prop_assert!((q.dc_gain() - 1.0).abs() < 1e-12);
        prop_assert_eq!(q.relative_degree(), nu as i64);
    }

    #[test]
    fn fast_characteristic_polynomial_ignores_tau(
        a0 in 0.2f64..4.0,
        a1 in 0.2f64..4.0,
        g in 0.3f64..3.0,
    ) {
        let slow = QFilterSpec::new(2, vec![a0, a1], 0.5).unwrap();
        let fast = QFilterSpec::new(2, vec![a0, a1], 1e-4).unwrap();
        let pf_slow = fast_char_poly(&slow, g, 1.0).unwrap();
        let pf_fast = fast_char_poly(&fast, g, 1.0).unwrap();
        prop_assert_eq!(pf_slow.coeffs(), pf_fast.coeffs());
    }

    #[test]
    fn smooth_sat_is_bounded_monotone_and_anchored(
        lo in -3.0f64..-0.1,
        hi in 0.1f64..3.0,
        width in 0.05f64..1.0,
    ) {
        // identity inside, constant plateau outside the blend band
        prop_assert_eq!(smooth_sat(0.0, lo, hi, width), 0.0);
        prop_assert_eq!(smooth_sat(hi, lo, hi, width), hi);
        prop_assert_eq!(smooth_sat(hi + width, lo, hi, width), hi + 0.5 * width);
        prop_assert_eq!(smooth_sat(hi + 7.0 * width, lo, hi, width), hi + 0.5 * width);
        prop_assert_eq!(smooth_sat(lo - 9.0 * width, lo, hi, width), lo - 0.5 * width);
        let span = (hi - lo) + 2.0 * width;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=400 {
            let v = (lo - width - 0.5) + (span + 1.0) * k as f64 / 400.0;
            let s = smooth_sat(v, lo, hi, width);
            prop_assert!(s >= prev - 1e-12, "not monotone at v = {v}");
            prev = s;
        }
    }
}

#[test]
fn smooth_sat_blend_is_c1_at_the_seams() {
    let (lo, hi, width) = (-1.0, 2.0, 0.4);
    let h = 1e-6;
    let fd = |v: f64| (smooth_sat(v + h, lo, hi, width) - smooth_sat(v - h, lo, hi, width)) / (2.0 * h);
    assert!((fd(hi) - 1.0).abs() < 1e-6, "slope at hi: {}", fd(hi));
    assert!(fd(hi + width).abs() < 1e-6, "slope at hi+width: {}", fd(hi + width));
    assert!((fd(lo) - 1.0).abs() < 1e-6, "slope at lo: {}", fd(lo));
    assert!(fd(lo - width).abs() < 1e-6, "slope at lo-width: {}", fd(lo - width));
}

/// Random strictly-proper transfer function with real stable poles and
/// zeros, the regime every fixture lives in.
fn random_stable_tf(rng: &mut ChaCha8Rng, n_poles: usize, n_zeros: usize) -> TransferFunction {
    let poles: Vec<f64> = (0..n_poles).map(|_| -rng.gen_range(0.2..5.0)).collect();
    let zeros: Vec<f64> = (0..n_zeros).map(|_| -rng.gen_range(0.2..5.0)).collect();
    let k = rng.gen_range(0.5..2.0);
    TransferFunction::new(
        Polynomial::from_real_roots(&zeros).scale(k),
        Polynomial::from_real_roots(&poles),
    )
    .unwrap()
}

#[test]
fn realization_reproduces_the_transfer_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let probes: Vec<f64> = (0..20).map(|k| 0.01 * (1e4f64).powf(k as f64 / 19.0)).collect();
    for _ in 0..50 {
        let n_poles = rng.gen_range(1..=4);
        let n_zeros = rng.gen_range(0..n_poles.max(1));
        let tf = random_stable_tf(&mut rng, n_poles, n_zeros);
        let ss = tf_to_statespace(&tf).unwrap();
        for &w in &probes {
            let direct = tf.eval(Complex64::new(0.0, w));
            let realized = ss.freq_response_siso(w, 0, 0);
            let err = (direct - realized).norm();
            assert!(err <= 1e-9 * direct.norm().max(1.0), "err {err:.3e} at omega {w}");
        }
    }
}

#[test]
fn interconnected_loop_matches_its_block_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let one = TransferFunction::from_coeffs(vec![1.0], vec![1.0]).unwrap();
    let probes = [0.1, 0.7, 2.3, 9.0];
    for _ in 0..50 {
        let p_zeros = rng.gen_range(0..2);
        let p = random_stable_tf(&mut rng, 2, p_zeros);
        let pn_zeros = rng.gen_range(0..2);
        let pn = random_stable_tf(&mut rng, 2, pn_zeros);
        let c = random_stable_tf(&mut rng, 1, 1);
        let qspec = QFilterSpec::new(
            2,
            vec![rng.gen_range(0.5..2.0), rng.gen_range(1.0..3.0)],
            rng.gen_range(0.05..0.5),
        )
        .unwrap();
        let q = q_transfer(&qspec).unwrap();
        let loop_ss = closed_loop_statespace(&p, &pn, &c, &q).unwrap();

        let delta = pn.mul(&one.add(&p.mul(&c))).add(&q.mul(&p.sub(&pn)));
        let t_yr = pn.mul(&p).mul(&c);
        let t_yd = pn.mul(&p).mul(&one.sub(&q));
        let t_yn = p.mul(&q.add(&pn.mul(&c))).neg();
        for &w in &probes {
            let s = Complex64::new(0.0, w);
            let den = delta.eval(s);
            for (input, num_tf) in [(0, &t_yr), (1, &t_yd), (2, &t_yn)] {
                let formula = num_tf.eval(s) / den;
                let realized = loop_ss.freq_response_siso(w, input, 0);
                let err = (formula - realized).norm();
                assert!(
                    err <= 1e-6 * formula.norm().max(1.0),
                    "input {input}, omega {w}: formula {formula}, loop {realized}"
                );
            }
        }
    }
}

#[test]
fn disk_test_certificates_survive_a_gain_grid_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut decisive = 0;
    while decisive < 60 {
        let nu = rng.gen_range(1..=3);
        let tail: Vec<f64> = (1..nu).map(|_| 10f64.powf(rng.gen_range(-0.5..1.0))).collect();
        let g_lower = 10f64.powf(rng.gen_range(-1.0..0.5));
        let g_upper = g_lower * 10f64.powf(rng.gen_range(0.05..1.0));
        let g_star = rng.gen_range(g_lower..g_upper);
        let gains = GainInterval::new(g_lower, g_upper, g_star).unwrap();
        let a0 = 10f64.powf(rng.gen_range(-2.0..1.0));
        let mut a = vec![a0];
        a.extend_from_slice(&tail);
        let report = match nyquist_disk_test_auto(nu, &a, &gains) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let (center, radius) = dob::qfilter::forbidden_disk(&gains);
        let threshold = 0.05 * (center.abs() + radius);
        if !(report.pass && report.min_distance >= threshold) {
            continue;
        }
        decisive += 1;
        let spec = QFilterSpec::new(nu, a.clone(), 1e-2).unwrap();
        for k in 0..=1000 {
            let g = g_lower + (g_upper - g_lower) * k as f64 / 1000.0;
            let pf = fast_char_poly(&spec, g, g_star).unwrap();
            assert!(
                pf.is_hurwitz_routh(0.0).unwrap(),
                "disk certified a = {a:?} on {gains:?} but g = {g} is not Hurwitz"
            );
        }
    }
}

#[test]
fn kharitonov_certificate_covers_random_family_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    let mut certified = 0;
    while certified < 20 {
        let n = rng.gen_range(2..=3);
        let nu = rng.gen_range(1..n);
        let m = n - nu;
        let alpha_bounds: Vec<[f64; 2]> = (0..n)
            .map(|_| {
                let lo = rng.gen_range(0.5..4.0);
                [lo, lo + rng.gen_range(0.0..2.0)]
            })
            .collect();
        let beta_bounds: Vec<[f64; 2]> = (0..m)
            .map(|_| {
                let lo = rng.gen_range(0.3..3.0);
                [lo, lo + rng.gen_range(0.0..1.5)]
            })
            .collect();
        let family = PlantFamily {
            n,
            nu,
            alpha_bounds,
            beta_bounds,
            gain: GainInterval::new(0.8, 1.25, 1.0).unwrap(),
        };
        let samples = sample_family(&family, 200, rng.gen()).unwrap();
        let report = check_minimum_phase(&family, &samples).unwrap();
        if report.kharitonov_pass != Some(true) {
            continue;
        }
        certified += 1;
        assert!(report.pass, "kharitonov certified but a sampled member has an unstable zero");
        for s in &samples {
            let tf = s.transfer_function().unwrap();
            if tf.num.degree().unwrap_or(0) == 0 {
                continue;
            }
            let zeros = tf.num.roots().unwrap();
            assert!(
                zeros.iter().all(|z| z.re < 0.0),
                "sample {s:?} has zeros {zeros:?} despite the certificate"
            );
        }
    }
}
