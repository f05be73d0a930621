// Electromagnetic analogue of a synthetic flow with a vortex part: `E` by
// two routes, `B = curl v / gamma`, Faraday's law and `div B`.
//
// Run with `cargo run --example vortex_fields`.

use vlasov_bridge::em::{em_fields_of, faraday_residual};
use vlasov_bridge::fields::divergence;
use vlasov_bridge::scenarios::{Scenario, SyntheticFlow};
use vlasov_bridge::{Constants, Result};

pub struct VortexFieldRow {
    pub n: usize,
    pub route_gap: f64,
    pub faraday: f64,
    pub div_b: f64,
    pub max_b: f64,
}

pub fn run_example() -> Result<Vec<VortexFieldRow>> {
    let flow = SyntheticFlow::random(42, 3, Constants::default())?;
    [16, 32]
        .into_iter()
        .map(|n| {
            let grid = flow.grid(n)?;
            let snap = flow.snapshot(&grid, 0.5)?;
            let fields = em_fields_of(&snap, &flow.c)?;
            Ok(VortexFieldRow {
                n,
                route_gap: fields.e_field.sub(&fields.e_from_chi)?.max_norm(),
                faraday: faraday_residual(&fields.e_field, &fields.db_dt)?.max_norm(),
                div_b: divergence(&fields.b_field)?.max_abs(),
                max_b: fields.b_field.max_norm(),
            })
        })
        .collect()
}

fn main() -> Result<()> {
    println!("{:>4} {:>12} {:>12} {:>12} {:>10}", "n", "E routes", "faraday", "div B", "max |B|");
    for r in run_example()? {
        println!(
            "{:>4} {:>12.3e} {:>12.3e} {:>12.3e} {:>10.4}",
            r.n, r.route_gap, r.faraday, r.div_b, r.max_b
        );
    }
    Ok(())
}
