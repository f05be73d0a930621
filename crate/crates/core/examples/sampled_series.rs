// Feeds the bridge with a sampled time series `(f, v)` instead of closed
// forms: phases come from a Helmholtz split of each frame and time
// derivatives from differences across frames.
//
// Run with `cargo run --example sampled_series`.

use vlasov_bridge::bridge::forward;
use vlasov_bridge::fields::GridSpec;
use vlasov_bridge::scenarios::{Example1, SampledFrame, SampledScenario, SampledSpec, Scenario};
use vlasov_bridge::{Boundary, Constants, Grid, Result};

/// `(t, max |U_sampled - U_exact| |Psi| / max |U_exact Psi|)`.
pub fn run_example() -> Result<Vec<(f64, f64)>> {
    let c = Constants::default();
    let packet = Example1::new(1.0, 0.0, c)?;
    let grid = Grid::line(-8.0, 8.0, 256, Boundary::Decaying)?;
    let dt = 0.01;
    let frames = (0..11)
        .map(|k| {
            let t = k as f64 * dt;
            let s = packet.snapshot(&grid, t)?;
            Ok(SampledFrame {
                t,
                f: s.f.data().to_vec(),
                v: s.v.components().to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = SampledSpec {
        grid: GridSpec::from(&grid),
        frames,
    };
    let sampled = SampledScenario::from_spec("packet frames", &spec, &c)?;
    let mut rows = Vec::new();
    for &t in &sampled.times()[1..sampled.times().len() - 1] {
        let snap = sampled.snapshot(&grid, t)?;
        let bridge = forward(&snap, &c)?;
        let exact = packet.exact_potential(&grid, t).expect("closed form")?;
        // The sampled phase carries an arbitrary time-dependent constant.
        let gap = bridge.u_pot.sub(&exact)?;
        let amp = snap.f.map(f64::sqrt);
        let weights: f64 = amp.data().iter().sum();
        let offset = gap.mul(&amp)?.data().iter().sum::<f64>() / weights;
        let err = gap.map(|g| g - offset).mul(&amp)?.max_abs() / exact.mul(&amp)?.max_abs();
        rows.push((t, err));
    }
    Ok(rows)
}

fn main() -> Result<()> {
    for (t, err) in run_example()? {
        println!("t = {t:.2}: U error {err:.3e}");
    }
    Ok(())
}
