// Recovers a phase that winds through several branches of `arg` and the
// velocity it carries.
//
// Run with `cargo run --example phase_winding`.

use vlasov_bridge::bridge::{assemble_psi, phase_from_psi, velocity_from_psi};
use vlasov_bridge::{Boundary, Constants, Grid, Result, ScalarField, VectorField};

pub struct WindingReport {
    pub phase_span: f64,
    pub phase_gap: f64,
    pub velocity_gap: f64,
}

pub fn run_example() -> Result<WindingReport> {
    let c = Constants::default();
    let grid = Grid::line(-5.0, 5.0, 400, Boundary::Decaying)?;
    let f = ScalarField::from_fn(&grid, |p| (-0.1 * p[0] * p[0]).exp());
    // phi = 3x + 0.2x^2 sweeps through about 17 multiples of 2 pi.
    let phi = ScalarField::from_fn(&grid, |p| 3.0 * p[0] + 0.2 * p[0] * p[0]);
    let psi = assemble_psi(&f, &phi)?;
    let recovered = phase_from_psi(&psi)?;
    let shift = phi.data()[0] - recovered.data()[0];
    let phase_gap = recovered.map(|x| x + shift).sub(&phi)?.max_abs();
    let v = velocity_from_psi(&psi, &VectorField::zeros(&grid), &c)?;
    let exact = VectorField::from_fn(&grid, |p| [-2.0 * c.alpha * (3.0 + 0.4 * p[0]), 0.0, 0.0]);
    Ok(WindingReport {
        phase_span: phi.data().iter().cloned().fold(f64::MIN, f64::max)
            - phi.data().iter().cloned().fold(f64::MAX, f64::min),
        phase_gap,
        velocity_gap: v.sub(&exact)?.max_norm() / exact.max_norm(),
    })
}

fn main() -> Result<()> {
    let r = run_example()?;
    println!("phase spans {:.2} rad; unwrapped phase gap {:.3e}", r.phase_span, r.phase_gap);
    println!("relative velocity gap {:.3e}", r.velocity_gap);
    Ok(())
}
