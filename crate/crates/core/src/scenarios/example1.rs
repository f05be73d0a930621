use super::{Scenario, Snapshot};
use crate::error::Result;
use crate::fields::{truncation_scale, Boundary, Constants, Grid, ScalarField, VectorField};

/// Uniformly accelerated Gaussian packet in one dimension:
///
/// ```text
/// f = exp(-xi^2),  xi = x - x0 - a t^2 / 2,   v = a t,
/// phi = -a t x / (2 alpha),  A = 0,
/// U = a x / (2 alpha beta) + a^2 t^2 / (4 alpha beta) + (alpha/beta)(1 - xi^2).
/// ```
///
/// The packet is transported along the characteristics `x - a t^2/2 = const`
/// and feels the uniform field `E = -a / gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1 {
    pub a: f64,
    pub x0: f64,
    pub c: Constants,
}

impl Example1 {
    pub fn new(a: f64, x0: f64, c: Constants) -> Result<Self> {
        c.validate()?;
        Ok(Self { a, x0, c })
    }

    pub fn xi(&self, x: f64, t: f64) -> f64 {
        x - self.x0 - 0.5 * self.a * t * t
    }

    pub fn density(&self, x: f64, t: f64) -> f64 {
        (-self.xi(x, t).powi(2)).exp()
    }

    pub fn potential(&self, x: f64, t: f64) -> f64 {
        let (a, al, be) = (self.a, self.c.alpha, self.c.beta);
        let xi = self.xi(x, t);
        a * x / (2.0 * al * be) + a * a * t * t / (4.0 * al * be) + (al / be) * (1.0 - xi * xi)
    }

    /// `chi = (a^2 t^2 / 2 + a x) / gamma`.
    pub fn chi(&self, x: f64, t: f64) -> f64 {
        (0.5 * self.a * self.a * t * t + self.a * x) / self.c.gamma
    }

    /// The uniform field `-a / gamma`.
    pub fn electric(&self) -> f64 {
        -self.a / self.c.gamma
    }

    pub fn exact_chi(&self, grid: &Grid, t: f64) -> ScalarField {
        ScalarField::from_fn(grid, |p| self.chi(p[0], t))
    }
}

impl Scenario for Example1 {
    fn name(&self) -> &str {
        "example1"
    }

    fn default_grid(&self) -> Result<Grid> {
        Grid::line(-10.0, 10.0, 512, Boundary::Decaying)
    }

    fn snapshot(&self, grid: &Grid, t: f64) -> Result<Snapshot> {
        grid.require_dim(1)?;
        let (a, al) = (self.a, self.c.alpha);
        let f = ScalarField::from_fn(grid, |p| self.density(p[0], t));
        let df_dt = ScalarField::from_fn(grid, |p| {
            let xi = self.xi(p[0], t);
            2.0 * xi * a * t * (-xi * xi).exp()
        });
        Ok(Snapshot {
            t,
            f,
            df_dt,
            v: VectorField::from_fn(grid, |_| [a * t, 0.0, 0.0]),
            dv_dt: VectorField::from_fn(grid, |_| [a, 0.0, 0.0]),
            phi: ScalarField::from_fn(grid, |p| -a * t * p[0] / (2.0 * al)),
            dphi_dt: ScalarField::from_fn(grid, |p| -a * p[0] / (2.0 * al)),
            a_vec: VectorField::zeros(grid),
            da_dt: VectorField::zeros(grid),
        })
    }

    fn exact_potential(&self, grid: &Grid, t: f64) -> Option<Result<ScalarField>> {
        Some(Ok(ScalarField::from_fn(grid, |p| self.potential(p[0], t))))
    }

    fn truncation(&self, grid: &Grid, _t: f64) -> f64 {
        // Unit-width packet: the highest relevant wavenumber is O(1).
        truncation_scale(1.0, 1.0, grid.max_spacing())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_moves_on_characteristic() {
        let e = Example1::new(2.0, 0.5, Constants::default()).unwrap();
        for t in [0.0, 0.3, 1.1] {
            let xp = 0.5 + 0.5 * 2.0 * t * t;
            assert!(e.xi(xp, t).abs() < 1e-15);
            assert!((e.density(xp, t) - 1.0).abs() < 1e-15);
            for x in [-1.0, 0.2, 3.0] {
                assert!((e.density(x, t) - e.density(x - t * t, 0.0)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn static_packet_potential() {
        let c = Constants::default();
        let e = Example1::new(0.0, 1.0, c).unwrap();
        for x in [-2.0, 0.0, 1.5] {
            let ex = (c.alpha / c.beta) * (1.0 - (x - 1.0) * (x - 1.0));
            assert!((e.potential(x, 0.7) - ex).abs() < 1e-15);
        }
    }

    #[test]
    fn potential_at_origin() {
        let e = Example1::new(2.0, 0.0, Constants::default()).unwrap();
        assert_eq!(e.potential(0.0, 0.0), -0.5);
    }
}
