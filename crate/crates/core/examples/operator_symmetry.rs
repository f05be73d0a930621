// Symmetry of the discrete wave operators on a periodic grid with a
// divergence-free vector potential, and the spin energy shift.
//
// Run with `cargo run --example operator_symmetry`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vlasov_bridge::bridge::{apply_L, apply_script_L, pauli_shift_cyclotron, PauliShift};
use vlasov_bridge::fields::inner_product;
use vlasov_bridge::helmholtz::decompose;
use vlasov_bridge::scenarios::random_velocity;
use vlasov_bridge::{Boundary, ComplexField, Constants, Grid, Result};

pub struct SymmetryReport {
    pub hermitian_gap: f64,
    pub anti_hermitian_gap: f64,
    pub pauli: PauliShift,
}

pub fn run_example() -> Result<SymmetryReport> {
    let c = Constants::default();
    let grid = Grid::cube(0.0, std::f64::consts::TAU, 12, Boundary::Periodic)?;
    let a = decompose(&random_velocity(&grid, 9), &c)?.a_vec;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut noise = || {
        let data = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexField::from_vec(grid, data)
    };
    let (p1, p2) = (noise()?, noise()?);
    let zero = ComplexField::zeros(&grid);
    let lhs = inner_product(&p1, &apply_script_L(&p2, &zero, &a, &c)?)?;
    let rhs = inner_product(&apply_script_L(&p1, &zero, &a, &c)?, &p2)?;
    let lhs_l = inner_product(&p1, &apply_L(&p2, &zero, &a, &c)?)?;
    let rhs_l = inner_product(&apply_L(&p1, &zero, &a, &c)?, &p2)?;
    let physical = Constants::physical(1.0, 1.0, 1.0)?;
    Ok(SymmetryReport {
        hermitian_gap: (lhs - rhs).norm() / lhs.norm(),
        anti_hermitian_gap: (lhs_l + rhs_l).norm() / lhs_l.norm(),
        pauli: pauli_shift_cyclotron(1.0, &physical, 1.0, 1.0, 1.0)?,
    })
}

fn main() -> Result<()> {
    let r = run_example()?;
    println!("<p1, calL p2> - <calL p1, p2>: {:.3e}", r.hermitian_gap);
    println!("<p1, L p2> + <L p1, p2>:       {:.3e}", r.anti_hermitian_gap);
    println!(
        "spin shift: direct {}, cyclotron {} (v_s = {})",
        r.pauli.direct, r.pauli.cyclotron, r.pauli.v_s
    );
    Ok(())
}
