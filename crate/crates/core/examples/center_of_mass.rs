// Density-weighted averages of the accelerated packet: the center of mass
// accelerates with `-gamma <E>`, matched by `2 alpha beta <grad U>`.
//
// Run with `cargo run --example center_of_mass`.

use vlasov_bridge::bridge::reconstruct_potential;
use vlasov_bridge::em::{electric_field, magnetic_field};
use vlasov_bridge::kinematics::{com_diagnostics, ComReport};
use vlasov_bridge::scenarios::{Example1, Scenario};
use vlasov_bridge::{Constants, Result};

pub fn run_example() -> Result<Vec<(f64, ComReport)>> {
    let c = Constants::default();
    let packet = Example1::new(2.0, -1.0, c)?;
    let grid = packet.default_grid()?;
    [0.0, 0.5, 1.0]
        .into_iter()
        .map(|t| {
            let s = packet.snapshot(&grid, t)?;
            let u = reconstruct_potential(&s.f, &s.phi, &s.dphi_dt, &s.a_vec, &c)?;
            let e = electric_field(&s, &c)?;
            let b = magnetic_field(&s.v, &c)?;
            Ok((t, com_diagnostics(&s, &e, &b, &u, &c)?))
        })
        .collect()
}

fn main() -> Result<()> {
    for (t, r) in run_example()? {
        println!("t = {t}: N = {:.8}, com accel {:.6}, <grad U> {:.6}", r.n_total, r.com_accel[0], r.mean_grad_u[0]);
        for (name, gap) in &r.identity_gaps {
            println!("    {name:<18} {:.3e}", gap.relative());
        }
    }
    Ok(())
}
