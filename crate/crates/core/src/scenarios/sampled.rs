//! Scenarios given as sampled time series `(f, v)` on a fixed grid.

use serde::{Deserialize, Serialize};

use super::{Scenario, Snapshot};
use crate::error::{Error, Result};
use crate::fields::{
    truncation_scale, Boundary, Constants, Grid, GridSpec, ScalarField, VectorField,
};
use crate::helmholtz::{decompose, ITERATIVE_TOL};

/// One sampled instant: the density and one array per velocity component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledFrame {
    pub t: f64,
    pub f: Vec<f64>,
    pub v: Vec<Vec<f64>>,
}

/// On-disk form of a sampled scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledSpec {
    pub grid: GridSpec,
    pub frames: Vec<SampledFrame>,
}

/// Frames at uniformly spaced times. Time derivatives are second-order
/// finite differences across frames (central inside, one-sided at the ends);
/// `phi` and `A` come from a Helmholtz split of each frame's velocity.
/// Snapshots exist only at frame times.
#[derive(Debug, Clone)]
pub struct SampledScenario {
    name: String,
    grid: Grid,
    times: Vec<f64>,
    f: Vec<ScalarField>,
    v: Vec<VectorField>,
    phi: Vec<ScalarField>,
    a_vec: Vec<VectorField>,
    a_rate_floor: f64,
}

impl SampledScenario {
    pub fn from_spec(name: &str, spec: &SampledSpec, c: &Constants) -> Result<Self> {
        let grid = spec.grid.build()?;
        if spec.frames.len() < 3 {
            return Err(Error::Config(
                "a sampled scenario needs at least three frames".into(),
            ));
        }
        let times: Vec<f64> = spec.frames.iter().map(|fr| fr.t).collect();
        let dt = times[1] - times[0];
        if !(dt > 0.0) {
            return Err(Error::Config("frame times must increase".into()));
        }
        for w in times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
                return Err(Error::Config("frame times must be uniformly spaced".into()));
            }
        }
        let mut f = Vec::new();
        let mut v = Vec::new();
        let mut phi = Vec::new();
        let mut a_vec = Vec::new();
        for fr in &spec.frames {
            let ff = ScalarField::from_vec(grid, fr.f.clone())?;
            let vv = VectorField::from_components(grid, fr.v.clone())?;
            let d = decompose(&vv, c)?;
            phi.push(d.phase());
            a_vec.push(d.a_vec);
            f.push(ff);
            v.push(vv);
        }
        // Iterative splits leave A accurate to ITERATIVE_TOL |v| / |gamma|,
        // and the frame difference divides that by dt.
        let a_rate_floor = if grid.boundary() == Boundary::Decaying {
            let v_max = v.iter().map(VectorField::max_norm).fold(0.0, f64::max);
            ITERATIVE_TOL * v_max / (c.gamma.abs().max(f64::MIN_POSITIVE) * dt)
        } else {
            0.0
        };
        Ok(Self {
            name: name.to_owned(),
            grid,
            times,
            a_rate_floor,
            f,
            v,
            phi,
            a_vec,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    fn frame_index(&self, t: f64) -> Result<usize> {
        let dt = self.times[1] - self.times[0];
        self.times
            .iter()
            .position(|&ft| (ft - t).abs() <= 1e-9 * dt)
            .ok_or_else(|| Error::MissingInput(format!("no sampled frame at t = {t}")))
    }

    fn rate_scalar(&self, series: &[ScalarField], k: usize) -> Result<ScalarField> {
        let dt = self.times[1] - self.times[0];
        let n = series.len();
        let (a, b, c, s) = match k {
            0 => (&series[0], &series[1], &series[2], 1.0),
            _ if k + 1 == n => (&series[n - 1], &series[n - 2], &series[n - 3], -1.0),
            _ => {
                return Ok(series[k + 1].sub(&series[k - 1])?.scale(0.5 / dt));
            }
        };
        Ok(a.scale(-3.0)
            .add(&b.scale(4.0))?
            .sub(c)?
            .scale(s * 0.5 / dt))
    }

    fn rate_vector(&self, series: &[VectorField], k: usize) -> Result<VectorField> {
        let comps = (0..self.grid.dim())
            .map(|a| {
                let s: Vec<ScalarField> = series.iter().map(|v| v.component(a)).collect();
                self.rate_scalar(&s, k).map(ScalarField::into_vec)
            })
            .collect::<Result<Vec<_>>>()?;
        VectorField::from_components(self.grid, comps)
    }
}

impl Scenario for SampledScenario {
    fn name(&self) -> &str {
        &self.name
    }

    fn default_grid(&self) -> Result<Grid> {
        Ok(self.grid)
    }

    fn snapshot(&self, grid: &Grid, t: f64) -> Result<Snapshot> {
        if grid != &self.grid {
            return Err(Error::GridMismatch);
        }
        let k = self.frame_index(t)?;
        Ok(Snapshot {
            t: self.times[k],
            f: self.f[k].clone(),
            df_dt: self.rate_scalar(&self.f, k)?,
            v: self.v[k].clone(),
            dv_dt: self.rate_vector(&self.v, k)?,
            phi: self.phi[k].clone(),
            dphi_dt: self.rate_scalar(&self.phi, k)?,
            a_vec: self.a_vec[k].clone(),
            da_dt: self.rate_vector(&self.a_vec, k)?,
        })
    }

    fn truncation(&self, grid: &Grid, _t: f64) -> f64 {
        truncation_scale(1.0, 1.0, grid.max_spacing())
    }

    fn a_rate_floor(&self) -> f64 {
        self.a_rate_floor
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::Example1;

    fn sampled_example1() -> (Example1, SampledScenario, Grid) {
        let c = Constants::default();
        let e = Example1::new(1.0, 0.0, c).unwrap();
        let grid = Grid::line(-8.0, 8.0, 128, Boundary::Decaying).unwrap();
        let frames = (0..5)
            .map(|k| {
                let t = 0.1 * k as f64;
                let s = e.snapshot(&grid, t).unwrap();
                SampledFrame {
                    t,
                    f: s.f.data().to_vec(),
                    v: s.v.components().to_vec(),
                }
            })
            .collect();
        let spec = SampledSpec {
            grid: GridSpec::from(&grid),
            frames,
        };
        (e, SampledScenario::from_spec("s", &spec, &c).unwrap(), grid)
    }

    #[test]
    fn finite_difference_rates_are_second_order_accurate() {
        let (e, s, grid) = sampled_example1();
        for t in [0.0, 0.2, 0.4] {
            let a = e.snapshot(&grid, t).unwrap();
            let b = s.snapshot(&grid, t).unwrap();
            assert!(b.dv_dt.sub(&a.dv_dt).unwrap().max_norm() < 1e-10);
            assert!(b.df_dt.sub(&a.df_dt).unwrap().max_abs() < 0.05);
            // phi from the decomposition differs only by a gauge constant.
            let gap = b.dphi_dt.sub(&a.dphi_dt).unwrap();
            let spread = gap.data().iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x))
                - gap.data().iter().fold(f64::INFINITY, |m, x| m.min(*x));
            assert!(spread < 1e-6, "{spread}");
        }
    }

    #[test]
    fn off_frame_time_rejected() {
        let (_, s, grid) = sampled_example1();
        assert!(matches!(
            s.snapshot(&grid, 0.05),
            Err(Error::MissingInput(_))
        ));
    }
}
