//! The peaking phenomenon and its containment. A fast observer has
//! initial-layer states of size 1/tau; without saturations that spike
//! reaches the plant input and grows without bound as tau shrinks. With
//! the saturations sized from the estimated slow-manifold range, the peak
//! input is pinned to the same value at every bandwidth.
//!
//! Run with `cargo run --release --example peaking_saturation`.

use dob::benchmarks::n1;
use dob::nonlin::sim::run_transient_metrics;
use dob::Error;

fn main() -> dob::Result<()> {
    println!("{:>8}  {:>14}  {:>20}", "tau", "max|u| (sat)", "max|u| (sats wide)");
    for tau in [1e-2, 3e-3, 1e-3, 3e-4] {
        let bench = n1(tau)?;
        let dt = (tau / 20.0).min(1e-3);
        let saturated = run_transient_metrics(
            &bench.plant,
            &bench.nominal,
            &bench.controller,
            &bench.params,
            &bench.envelope,
            &bench.x0z0eta0,
            &bench.dob0,
            bench.t_end,
            dt,
        )?
        .max_abs_u;

        let mut wide = bench.params.clone();
        for level in &mut wide.sat_x_levels {
            level[0] *= 1e6;
            level[1] *= 1e6;
        }
        wide.sat_phi_interval[0] *= 1e6;
        wide.sat_phi_interval[1] *= 1e6;
        let unsaturated = match run_transient_metrics(
            &bench.plant,
            &bench.nominal,
            &bench.controller,
            &wide,
            &bench.envelope,
            &bench.x0z0eta0,
            &bench.dob0,
            bench.t_end,
            dt,
        ) {
            Ok(m) => format!("{:>16.4e}", m.max_abs_u),
            // the run is allowed to blow past the state-norm guard; the
            // peak input seen up to that point is the quantity of interest
            Err(Error::Divergence { max_abs_u, .. }) => format!("{max_abs_u:>12.4e} (diverged)"),
            Err(e) => return Err(e),
        };
        println!("{tau:>8.0e}  {saturated:>14.4}  {unsaturated:>20}");
    }
    println!();
    println!("saturated peaks are tau-independent; unsaturated peaks scale like 1/tau.");
    Ok(())
}
