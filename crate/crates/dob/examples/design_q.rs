//! Q-filter synthesis for a plant whose input gain is only known to live
//! in an interval. The designer picks the filter order and the tail
//! coefficients; `design_a0` then shrinks the last coefficient until the
//! Nyquist locus clears the forbidden disk with a safety margin.
//!
//! Run with `cargo run --example design_q`.

use dob::qfilter::{design_a0, forbidden_disk, nyquist_disk_test_auto, GainInterval};

fn main() -> dob::Result<()> {
    // gain uncertain by a factor of 4, nominal design at g* = 1
    let gains = GainInterval::new(0.5, 2.0, 1.0)?;
    let (center, radius) = forbidden_disk(&gains);
    println!("gain interval [{}, {}] with g* = {}", gains.g_lower, gains.g_upper, gains.g_star);
    println!("forbidden disk: center {center:.4}, radius {radius:.4}");
    println!();

    let nu = 2;
    let a_tail = [1.0];
    println!("filter order nu = {nu}, fixed tail {a_tail:?}");
    println!("{:>8}  {:>10}  {:>13}  {}", "a0", "margin", "encirclements", "verdict");
    for a0 in [4.0, 2.0, 1.0, 0.5, 0.25] {
        let report = nyquist_disk_test_auto(nu, &[a0, a_tail[0]], &gains)?;
        println!(
            "{a0:>8}  {:>10.3e}  {:>13}  {}",
            report.min_distance,
            report.encirclements,
            if report.pass { "clears the disk" } else { "hits the disk" }
        );
    }
    println!();

    let a0 = design_a0(nu, &a_tail, &gains, 4.0)?;
    let report = nyquist_disk_test_auto(nu, &[a0, a_tail[0]], &gains)?;
    println!("design_a0 from 4.0 settles at a0 = {a0} (margin {:.4})", report.min_distance);
    println!("the fast dynamics stay Hurwitz for every g in the interval.");
    Ok(())
}
