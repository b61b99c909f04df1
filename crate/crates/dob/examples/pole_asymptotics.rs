//! Two-time-scale pole tracking: as tau shrinks, nu closed-loop poles run
//! off to infinity along the roots of the fast characteristic polynomial
//! (scaled by 1/tau) and the rest settle onto the plant zeros and the
//! nominal loop poles. The asymptotics table matches every eigenvalue to
//! its predicted target and reports the matching error.
//!
//! Run with `cargo run --example pole_asymptotics`.

use dob::analysis::{pole_asymptotics, PoleClass};
use dob::benchmarks::{b1_controller, b1_family, b1_qspec, b1_test_vertex};

fn main() -> dob::Result<()> {
    let family = b1_family();
    let plant = b1_test_vertex();
    let taus = [1e-1, 1e-2, 1e-3, 1e-4];
    let table = pole_asymptotics(&plant, &family.nominal(), &b1_controller(), &b1_qspec(1e-3), &taus)?;

    println!("fast targets (roots of the fast characteristic polynomial, both gains):");
    for z in &table.fast_targets {
        println!("  {:.6} {:+.6}i", z.re, z.im);
    }
    println!("slow targets (plant zeros and nominal loop poles):");
    for z in &table.slow_targets {
        println!("  {:.6} {:+.6}i", z.re, z.im);
    }

    println!();
    println!("{:>8}  {:>12}  {:>12}", "tau", "fast error", "slow error");
    for row in &table.per_tau {
        println!("{:>8.0e}  {:>12.4e}  {:>12.4e}", row.tau, row.fast_error, row.slow_error);
    }

    println!();
    println!("per-eigenvalue matching at tau = {:.0e}:", taus[taus.len() - 1]);
    for row in table.rows.iter().filter(|r| r.tau == taus[taus.len() - 1]) {
        let class = match row.class {
            PoleClass::Fast => "fast",
            PoleClass::Slow => "slow",
        };
        println!(
            "  {class}  eig {:>12.4} {:+10.4}i  ->  target {:>10.4} {:+8.4}i  (err {:.2e})",
            row.eigenvalue.re, row.eigenvalue.im, row.target.re, row.target.im, row.error
        );
    }
    Ok(())
}
