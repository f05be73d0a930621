// Interior of a self-repelling charged sphere: the bridge potential, the
// analogue fields and the strong agreement of Gauss's and Ampere's laws.
//
// Run with `cargo run --example expanding_sphere`.

use vlasov_bridge::bridge::forward;
use vlasov_bridge::em::{em_fields, em_report, Verdict, TOL_AGREE};
use vlasov_bridge::scenarios::{Example2, Scenario};
use vlasov_bridge::{Constants, Result};

pub struct SphereFieldRow {
    pub t: f64,
    pub radius: f64,
    pub u_error: f64,
    pub verdict: Verdict,
    pub ampere: f64,
    pub gauss: f64,
}

pub fn run_example() -> Result<Vec<SphereFieldRow>> {
    let c = Constants::default();
    let sphere = Example2::new(4.0 * std::f64::consts::PI, 1.0, c)?;
    let grid = sphere.default_grid()?;
    let mut rows = Vec::new();
    for t in [0.0, 0.5, 1.0, 2.0] {
        let snap = sphere.snapshot(&grid, t)?;
        let bridge = forward(&snap, &c)?;
        let exact = sphere.exact_potential(&grid, t).expect("closed form")?;
        let fields = em_fields(&snap, &bridge.u_pot, &c)?;
        let displacement = sphere.displacement(&grid, t).expect("sphere displacement")?;
        let (report, _) = em_report(&snap, &fields, Some(displacement), None, &c, TOL_AGREE)?;
        rows.push(SphereFieldRow {
            t,
            radius: sphere.state_at(t)?.r_radius,
            u_error: bridge.u_pot.sub(&exact)?.max_abs() / exact.max_abs().max(f64::MIN_POSITIVE),
            verdict: report.verdict,
            ampere: report.ampere_residual,
            gauss: report.gauss_residual,
        });
    }
    Ok(rows)
}

fn main() -> Result<()> {
    println!("{:>5} {:>9} {:>11} {:>8} {:>11} {:>11}", "t", "R", "U error", "verdict", "ampere", "gauss");
    for r in run_example()? {
        println!(
            "{:>5.2} {:>9.5} {:>11.3e} {:>8} {:>11.3e} {:>11.3e}",
            r.t,
            r.radius,
            r.u_error,
            format!("{:?}", r.verdict),
            r.ampere,
            r.gauss
        );
    }
    Ok(())
}
