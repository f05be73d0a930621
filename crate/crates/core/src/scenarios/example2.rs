use super::sphere::{sphere_radius_at, SphereState};
use super::{Scenario, Snapshot};
use crate::error::{Error, Result};
use crate::fields::{truncation_scale, Boundary, Constants, Grid, ScalarField, VectorField};

/// Interior of a uniformly charged sphere expanding under its own repulsion:
///
/// ```text
/// f = 3a(t),  v = b(t) r,  phi = -b r^2 / (4 alpha),  A = 0,
/// U = r^2 (b' + b^2) / (4 alpha beta),  D = a(t) r.
/// ```
///
/// Fields are evaluated at grid nodes, which must all lie inside the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2 {
    pub q: f64,
    pub r0: f64,
    pub c: Constants,
    state0: SphereState,
}

impl Example2 {
    pub fn new(q: f64, r0: f64, c: Constants) -> Result<Self> {
        let state0 = SphereState::initial(q, r0, &c)?;
        Ok(Self { q, r0, c, state0 })
    }

    pub fn initial_state(&self) -> &SphereState {
        &self.state0
    }

    /// Exact state at time `t` from the closed-form trajectory.
    pub fn state_at(&self, t: f64) -> Result<SphereState> {
        let r = sphere_radius_at(t, &self.state0)?;
        Ok(self.state0.at(t, r, self.state0.speed_from_energy(r)))
    }

    fn check_inside(&self, grid: &Grid, radius: f64) -> Result<()> {
        grid.require_dim(3)?;
        for p in grid.positions() {
            let distance = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if distance >= radius {
                return Err(Error::OutsideSphere { distance, radius });
            }
        }
        Ok(())
    }
}

fn r2(p: [f64; 3]) -> f64 {
    p[0] * p[0] + p[1] * p[1] + p[2] * p[2]
}

impl Scenario for Example2 {
    fn name(&self) -> &str {
        "example2"
    }

    fn default_grid(&self) -> Result<Grid> {
        Grid::cube(-0.5 * self.r0, 0.5 * self.r0, 16, Boundary::Decaying)
    }

    fn snapshot(&self, grid: &Grid, t: f64) -> Result<Snapshot> {
        let s = self.state_at(t)?;
        self.check_inside(grid, s.r_radius)?;
        let (a, b, a_dot, b_dot) = (s.a_coef, s.b_coef, s.a_dot(), s.b_dot());
        let al = self.c.alpha;
        Ok(Snapshot {
            t,
            f: ScalarField::constant(grid, 3.0 * a),
            df_dt: ScalarField::constant(grid, 3.0 * a_dot),
            v: VectorField::from_fn(grid, |p| [b * p[0], b * p[1], b * p[2]]),
            dv_dt: VectorField::from_fn(grid, |p| [b_dot * p[0], b_dot * p[1], b_dot * p[2]]),
            phi: ScalarField::from_fn(grid, |p| -b * r2(p) / (4.0 * al)),
            dphi_dt: ScalarField::from_fn(grid, |p| -b_dot * r2(p) / (4.0 * al)),
            a_vec: VectorField::zeros(grid),
            da_dt: VectorField::zeros(grid),
        })
    }

    fn exact_potential(&self, grid: &Grid, t: f64) -> Option<Result<ScalarField>> {
        Some(self.state_at(t).map(|s| {
            let k = (s.b_dot() + s.b_coef * s.b_coef) / (4.0 * self.c.alpha * self.c.beta);
            ScalarField::from_fn(grid, |p| k * r2(p))
        }))
    }

    fn displacement(&self, grid: &Grid, t: f64) -> Option<Result<(VectorField, VectorField)>> {
        Some(self.state_at(t).map(|s| {
            let (a, a_dot) = (s.a_coef, s.a_dot());
            (
                VectorField::from_fn(grid, |p| [a * p[0], a * p[1], a * p[2]]),
                VectorField::from_fn(grid, |p| [a_dot * p[0], a_dot * p[1], a_dot * p[2]]),
            )
        }))
    }

    fn truncation(&self, grid: &Grid, t: f64) -> f64 {
        let r = self.state_at(t).map(|s| s.r_radius).unwrap_or(self.r0);
        truncation_scale(1.0, 1.0 / r, grid.max_spacing())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn initial_density() {
        let e = Example2::new(1.0, 1.0, Constants::default()).unwrap();
        let g = e.default_grid().unwrap();
        let s = e.snapshot(&g, 0.0).unwrap();
        let f0 = 3.0 / (4.0 * PI);
        assert!((s.f.data()[0] - f0).abs() < 1e-15);
        assert_eq!(s.v.max_norm(), 0.0);
    }

    #[test]
    fn grid_outside_sphere_rejected() {
        let e = Example2::new(1.0, 1.0, Constants::default()).unwrap();
        let g = Grid::cube(-1.0, 1.0, 8, Boundary::Decaying).unwrap();
        assert!(matches!(
            e.snapshot(&g, 0.0),
            Err(Error::OutsideSphere { .. })
        ));
    }

    #[test]
    fn attractive_charge_rejected() {
        let c = Constants::new(-0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            Example2::new(1.0, 1.0, c),
            Err(Error::NonRepulsive { .. })
        ));
    }
}
