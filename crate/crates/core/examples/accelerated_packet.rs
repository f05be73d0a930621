// A Gaussian packet accelerated by a uniform field: reconstruct the
// potential from `(f, v)` alone and compare with the closed form.
//
// Run with `cargo run --example accelerated_packet`.

use vlasov_bridge::bridge::forward;
use vlasov_bridge::scenarios::{Example1, Scenario};
use vlasov_bridge::{Constants, Result};

pub struct PacketReport {
    /// `(t, max |U - U_exact| |Psi| / max |U_exact Psi|, residual / |U Psi|)`.
    pub rows: Vec<(f64, f64, f64)>,
    pub electric: f64,
}

pub fn run_example() -> Result<PacketReport> {
    let packet = Example1::new(2.0, 0.0, Constants::default())?;
    let grid = packet.default_grid()?;
    let mut rows = Vec::new();
    for t in [0.0, 0.25, 0.5, 1.0] {
        let snap = packet.snapshot(&grid, t)?;
        let bridge = forward(&snap, &packet.c)?;
        let exact = packet
            .exact_potential(&grid, t)
            .expect("closed form is known")?;
        let amp = snap.f.map(f64::sqrt);
        let err = bridge.u_pot.sub(&exact)?.mul(&amp)?.max_abs() / exact.mul(&amp)?.max_abs();
        rows.push((t, err, bridge.schrodinger_residual / bridge.u_psi_scale));
    }
    Ok(PacketReport {
        rows,
        electric: packet.electric(),
    })
}

fn main() -> Result<()> {
    let report = run_example()?;
    println!("uniform field E = {}", report.electric);
    println!("{:>6} {:>14} {:>14}", "t", "U error", "residual");
    for (t, err, res) in &report.rows {
        println!("{t:>6.2} {err:>14.3e} {res:>14.3e}");
    }
    Ok(())
}
