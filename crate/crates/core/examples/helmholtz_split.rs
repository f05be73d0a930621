// Splits a random periodic velocity into `-alpha grad Phi + gamma A` and
// checks the recomposition and the transversality of `A`.
//
// Run with `cargo run --example helmholtz_split`.

use vlasov_bridge::fields::divergence;
use vlasov_bridge::helmholtz::decompose;
use vlasov_bridge::scenarios::random_velocity;
use vlasov_bridge::{Boundary, Constants, Grid, Result};

pub struct SplitRow {
    pub seed: u64,
    pub recompose_gap: f64,
    pub div_a: f64,
    pub a_norm: f64,
}

pub fn run_example() -> Result<Vec<SplitRow>> {
    let c = Constants::default();
    let grid = Grid::cube(0.0, std::f64::consts::TAU, 24, Boundary::Periodic)?;
    (0..5)
        .map(|seed| {
            let v = random_velocity(&grid, seed);
            let split = decompose(&v, &c)?;
            Ok(SplitRow {
                seed,
                recompose_gap: split.recompose()?.sub(&v)?.max_norm() / v.max_norm(),
                div_a: divergence(&split.a_vec)?.max_abs(),
                a_norm: split.a_vec.max_norm(),
            })
        })
        .collect()
}

fn main() -> Result<()> {
    println!("{:>5} {:>14} {:>12} {:>10}", "seed", "recompose", "max div A", "max |A|");
    for r in run_example()? {
        println!("{:>5} {:>14.3e} {:>12.3e} {:>10.4}", r.seed, r.recompose_gap, r.div_a, r.a_norm);
    }
    Ok(())
}
