//! Random smooth periodic flows on `[0, 2 pi)^d` built from a handful of
//! Fourier modes with closed-form space and time derivatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Scenario, Snapshot};
use crate::error::{Error, Result};
use crate::fields::{
    divergence, truncation_scale, Boundary, Constants, Grid, ScalarField, VectorField,
};

/// How the density rate is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxDerivative {
    /// `f_t = -f (grad s . v + div v)` from closed-form derivatives.
    #[default]
    Analytic,
    /// `f_t = -div_h(f v)` with the discrete divergence, so the discrete
    /// continuity residual vanishes to rounding.
    Discrete,
}

#[derive(Debug, Clone, Copy)]
struct Mode {
    k: [f64; 3],
    theta: f64,
    amp: [f64; 3],
    omega: f64,
    tau: f64,
}

impl Mode {
    fn random(rng: &mut ChaCha8Rng, dim: usize, kmax: i32, amp: f64) -> Self {
        let mut k = [0.0; 3];
        loop {
            for slot in k.iter_mut().take(dim) {
                *slot = rng.gen_range(-kmax..=kmax) as f64;
            }
            if k.iter().any(|x| *x != 0.0) {
                break;
            }
        }
        let mut a = [0.0; 3];
        for slot in a.iter_mut() {
            *slot = amp * rng.gen_range(-1.0..1.0);
        }
        Self {
            k,
            theta: rng.gen_range(0.0..std::f64::consts::TAU),
            amp: a,
            omega: rng.gen_range(0.5..2.0),
            tau: rng.gen_range(0.0..std::f64::consts::TAU),
        }
    }

    fn arg(&self, p: [f64; 3]) -> f64 {
        self.k[0] * p[0] + self.k[1] * p[1] + self.k[2] * p[2] + self.theta
    }

    /// Time envelope and its derivative.
    fn envelope(&self, t: f64) -> (f64, f64) {
        let w = self.omega * t + self.tau;
        (1.0 + 0.3 * w.sin(), 0.3 * self.omega * w.cos())
    }

    fn k2(&self) -> f64 {
        self.k.iter().map(|x| x * x).sum()
    }

    fn k_norm(&self) -> f64 {
        self.k2().sqrt()
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// A smooth periodic state with
///
/// * phase `phi = sum_m g_m(t) p_m sin(k_m . r + theta_m)`,
/// * vortex part `A = curl W`, `W = sum_m g_m(t) w_m sin(k_m . r + theta_m)`
///   (3D only; divergence-free in closed form),
/// * density `f = f0 exp(s(r))` with a static random `s`,
/// * velocity `v = -2 alpha grad phi + gamma A`.
///
/// The density profile is frozen: `f_t` is not the time derivative of `f`
/// but the rate demanded by continuity (see [`FluxDerivative`]), so every
/// snapshot is an exactly continuity-consistent instantaneous state.
#[derive(Debug, Clone)]
pub struct SyntheticFlow {
    phase_modes: Vec<Mode>,
    vortex_modes: Vec<Mode>,
    density_modes: Vec<Mode>,
    pub f0: f64,
    pub flux: FluxDerivative,
    pub c: Constants,
    dim: usize,
}

impl SyntheticFlow {
    /// Three modes each for the phase, vortex potential and density.
    pub fn random(seed: u64, dim: usize, c: Constants) -> Result<Self> {
        c.validate()?;
        if dim != 1 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 3, got {dim}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phase_modes = (0..3).map(|_| Mode::random(&mut rng, dim, 1, 0.4)).collect();
        let vortex_modes = if dim == 3 {
            (0..3).map(|_| Mode::random(&mut rng, dim, 1, 0.3)).collect()
        } else {
            Vec::new()
        };
        let density_modes = (0..3).map(|_| Mode::random(&mut rng, dim, 1, 0.3)).collect();
        Ok(Self {
            phase_modes,
            vortex_modes,
            density_modes,
            f0: 1.0,
            flux: FluxDerivative::Analytic,
            c,
            dim,
        })
    }

    pub fn without_vortex(mut self) -> Self {
        self.vortex_modes.clear();
        self
    }

    pub fn with_flux(mut self, flux: FluxDerivative) -> Self {
        self.flux = flux;
        self
    }

    pub fn has_vortex(&self) -> bool {
        !self.vortex_modes.is_empty()
    }

    /// Periodic grid on `[0, 2 pi)^d` with `n` points per axis.
    pub fn grid(&self, n: usize) -> Result<Grid> {
        let tau = std::f64::consts::TAU;
        match self.dim {
            1 => Grid::line(0.0, tau, n, Boundary::Periodic),
            _ => Grid::cube(0.0, tau, n, Boundary::Periodic),
        }
    }

    /// Largest wavenumber present in quadratic products of the fields.
    pub fn k_max(&self) -> f64 {
        let k = self
            .phase_modes
            .iter()
            .chain(&self.vortex_modes)
            .chain(&self.density_modes)
            .map(Mode::k_norm)
            .fold(0.0, f64::max);
        2.0 * k
    }

    /// `(phi, grad phi, lap phi)` or their time derivatives when `rate`.
    fn phase_parts(&self, p: [f64; 3], t: f64, rate: bool) -> (f64, [f64; 3], f64) {
        let mut phi = 0.0;
        let mut grad = [0.0; 3];
        let mut lap = 0.0;
        for m in &self.phase_modes {
            let (g, dg) = m.envelope(t);
            let c = if rate { dg } else { g } * m.amp[0];
            let (s, co) = m.arg(p).sin_cos();
            phi += c * s;
            for a in 0..3 {
                grad[a] += c * co * m.k[a];
            }
            lap -= c * s * m.k2();
        }
        (phi, grad, lap)
    }

    fn vortex(&self, p: [f64; 3], t: f64, rate: bool) -> [f64; 3] {
        let mut out = [0.0; 3];
        for m in &self.vortex_modes {
            let (g, dg) = m.envelope(t);
            let c = if rate { dg } else { g } * m.arg(p).cos();
            let kw = cross(m.k, m.amp);
            for a in 0..3 {
                out[a] += c * kw[a];
            }
        }
        out
    }

    fn log_density(&self, p: [f64; 3]) -> (f64, [f64; 3]) {
        let mut s = 0.0;
        let mut grad = [0.0; 3];
        for m in &self.density_modes {
            let (sn, co) = m.arg(p).sin_cos();
            s += m.amp[0] * sn;
            for a in 0..3 {
                grad[a] += m.amp[0] * co * m.k[a];
            }
        }
        (s, grad)
    }

    fn velocity(&self, p: [f64; 3], t: f64, rate: bool) -> [f64; 3] {
        let (_, gphi, _) = self.phase_parts(p, t, rate);
        let a = self.vortex(p, t, rate);
        let (al, ga) = (self.c.alpha, self.c.gamma);
        [
            -2.0 * al * gphi[0] + ga * a[0],
            -2.0 * al * gphi[1] + ga * a[1],
            -2.0 * al * gphi[2] + ga * a[2],
        ]
    }
}

impl Scenario for SyntheticFlow {
    fn name(&self) -> &str {
        "synthetic"
    }

    fn default_grid(&self) -> Result<Grid> {
        self.grid(if self.dim == 1 { 128 } else { 32 })
    }

    fn snapshot(&self, grid: &Grid, t: f64) -> Result<Snapshot> {
        if grid.boundary() != Boundary::Periodic {
            return Err(Error::WrongBoundary(Boundary::Periodic));
        }
        grid.require_dim(self.dim)?;
        let f = ScalarField::from_fn(grid, |p| self.f0 * self.log_density(p).0.exp());
        let v = VectorField::from_fn(grid, |p| self.velocity(p, t, false));
        let df_dt = match self.flux {
            FluxDerivative::Analytic => ScalarField::from_fn(grid, |p| {
                let (s, gs) = self.log_density(p);
                let vel = self.velocity(p, t, false);
                let (_, _, lap) = self.phase_parts(p, t, false);
                let div_v = -2.0 * self.c.alpha * lap;
                let gsv = gs[0] * vel[0] + gs[1] * vel[1] + gs[2] * vel[2];
                -self.f0 * s.exp() * (gsv + div_v)
            }),
            FluxDerivative::Discrete => divergence(&f.scaled_vector(&v)?)?.scale(-1.0),
        };
        Ok(Snapshot {
            t,
            df_dt,
            dv_dt: VectorField::from_fn(grid, |p| self.velocity(p, t, true)),
            phi: ScalarField::from_fn(grid, |p| self.phase_parts(p, t, false).0),
            dphi_dt: ScalarField::from_fn(grid, |p| self.phase_parts(p, t, true).0),
            a_vec: VectorField::from_fn(grid, |p| self.vortex(p, t, false)),
            da_dt: VectorField::from_fn(grid, |p| self.vortex(p, t, true)),
            f,
            v,
        })
    }

    fn truncation(&self, grid: &Grid, _t: f64) -> f64 {
        truncation_scale(1.0, self.k_max(), grid.max_spacing())
    }
}

/// Random smooth periodic velocity field: six Fourier modes with random
/// vector amplitudes plus a random uniform part.
pub fn random_velocity(grid: &Grid, seed: u64) -> VectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<Mode> = (0..6)
        .map(|_| Mode::random(&mut rng, grid.dim(), 3, 1.0))
        .collect();
    let mean: [f64; 3] = [
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
    ];
    VectorField::from_fn(grid, |p| {
        let mut v = mean;
        for m in &modes {
            let s = m.arg(p).sin();
            for a in 0..3 {
                v[a] += m.amp[a] * s;
            }
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::continuity_residual;

    #[test]
    fn discrete_flux_closes_continuity() {
        let flow = SyntheticFlow::random(7, 3, Constants::default())
            .unwrap()
            .with_flux(FluxDerivative::Discrete);
        let g = flow.grid(12).unwrap();
        let s = flow.snapshot(&g, 0.4).unwrap();
        let r = continuity_residual(&s.f, &s.df_dt, &s.v).unwrap();
        assert!(r.max_abs() < 1e-13 * s.df_dt.max_abs());
    }

    #[test]
    fn vortex_part_is_divergence_free() {
        let flow = SyntheticFlow::random(3, 3, Constants::default()).unwrap();
        let g = flow.grid(32).unwrap();
        let s = flow.snapshot(&g, 0.0).unwrap();
        let div = divergence(&s.a_vec).unwrap().max_abs();
        assert!(div < 2.0 * flow.truncation(&g, 0.0) * s.a_vec.max_norm(), "{div}");
    }

    #[test]
    fn seeds_are_reproducible() {
        let c = Constants::default();
        let g = Grid::cube(0.0, 1.0, 4, Boundary::Periodic).unwrap();
        assert_eq!(random_velocity(&g, 5), random_velocity(&g, 5));
        let a = SyntheticFlow::random(9, 3, c).unwrap().snapshot(&g, 0.1).unwrap();
        let b = SyntheticFlow::random(9, 3, c).unwrap().snapshot(&g, 0.1).unwrap();
        assert_eq!(a.f, b.f);
    }

    #[test]
    fn time_derivatives_match_finite_differences() {
        let flow = SyntheticFlow::random(11, 3, Constants::default()).unwrap();
        let g = flow.grid(8).unwrap();
        let gaps = crate::scenarios::derivative_cross_check(&flow, &g, 0.3, 1e-4).unwrap();
        // Density is frozen by construction; the other rates are exact.
        for gap in &gaps[1..] {
            assert!(*gap < 1e-7, "{gaps:?}");
        }
    }
}
