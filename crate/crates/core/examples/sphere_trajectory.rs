// Integrates the sphere radius `R'' = gamma_bar / R^2` with RK4 and compares
// the time to reach each radius with the closed-form first integral.
//
// Run with `cargo run --example sphere_trajectory`.

use vlasov_bridge::scenarios::{sphere_integrate, sphere_time_of_radius, SphereState};
use vlasov_bridge::{Constants, Result};

pub struct TrajectoryReport {
    /// `(R, t_numeric, t_closed)`.
    pub crossings: Vec<(f64, f64, f64)>,
    pub energy_drift: f64,
    pub steps: usize,
}

pub fn run_example() -> Result<TrajectoryReport> {
    let c = Constants::default();
    // gamma_bar = -gamma Q / (4 pi eps_bar) = 1.
    let state0 = SphereState::initial(4.0 * std::f64::consts::PI, 1.0, &c)?;
    let t_end = sphere_time_of_radius(12.0, &state0)?;
    let traj = sphere_integrate(&state0, t_end, 0.01)?;
    let mut crossings = Vec::new();
    for r in [1.5, 2.0, 5.0, 10.0] {
        let numeric = traj.time_of_radius(r).expect("radius is reached");
        crossings.push((r, numeric, sphere_time_of_radius(r, &state0)?));
    }
    Ok(TrajectoryReport {
        crossings,
        energy_drift: traj.energy_drift(),
        steps: traj.states.len() - 1,
    })
}

fn main() -> Result<()> {
    let report = run_example()?;
    println!("{} RK4 steps, energy drift {:.2e}", report.steps, report.energy_drift);
    println!("{:>6} {:>14} {:>14} {:>10}", "R", "t numeric", "t closed", "rel gap");
    for (r, tn, tc) in &report.crossings {
        println!("{r:>6.1} {tn:>14.9} {tc:>14.9} {:>10.2e}", (tn - tc).abs() / tc);
    }
    Ok(())
}
