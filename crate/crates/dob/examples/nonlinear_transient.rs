//! Transient recovery on the nonlinear benchmark: as the filter time
//! constant shrinks, the perturbed closed loop tracks its nominal
//! counterpart more and more tightly, while the saturations keep the
//! control effort flat.
//!
//! Run with `cargo run --release --example nonlinear_transient`.

use dob::benchmarks::n1;
use dob::nonlin::sim::transient_tau_sweep;

fn main() -> dob::Result<()> {
    let bench = n1(1e-2)?;
    let [lo, hi] = bench.params.sat_phi_interval;
    println!("dead-zone band for phi: [{lo:.3}, {hi:.3}]");
    println!();

    let taus = [1e-2, 3e-3, 1e-3, 3e-4];
    let rows = transient_tau_sweep(
        &bench.plant,
        &bench.nominal,
        &bench.controller,
        &bench.params,
        &bench.envelope,
        &bench.x0z0eta0,
        &bench.dob0,
        bench.t_end,
        &taus,
    )?;

    println!(
        "{:>8}  {:>10}  {:>10}  {:>10}  {:>8}  {:>18}",
        "tau", "sup_dev", "sup_u_err", "max|u|", "max|z|", "phi range settled"
    );
    for m in &rows {
        println!(
            "{:>8.0e}  {:>10.4e}  {:>10.4e}  {:>10.4}  {:>8.4}  [{:>7.3}, {:>6.3}]",
            m.tau, m.sup_dev, m.sup_u_err, m.max_abs_u, m.z_max,
            m.phi_min_settled, m.phi_max_settled
        );
    }

    println!();
    println!("sup_dev falls with tau: the loop converges to the nominal transient.");
    Ok(())
}
