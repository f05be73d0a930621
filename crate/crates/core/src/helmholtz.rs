//! Helmholtz split of a velocity field, `v = -alpha grad Phi + gamma A` with
//! `div A = 0`, together with the Poisson solvers it needs.
//!
//! On periodic grids every solve is spectral and uses the exact symbols of
//! the discrete stencils, so the discrete identities (recomposition,
//! `div A = 0`, `lap Phi = -g`) hold to rounding. On decaying grids the
//! solves are iterative: conjugate gradients with zero Dirichlet values for
//! Poisson problems and CGLS for the least-squares gradient fit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::ops::laplacian_raw;
use crate::fields::{
    divergence, gradient, gradient_adjoint, spectral, Boundary, Constants, Grid, ScalarField,
    VectorField,
};

/// Relative residual at which the iterative solvers stop.
pub const ITERATIVE_TOL: f64 = 1e-10;
/// Iteration cap of the iterative solvers.
pub const MAX_ITERATIONS: usize = 10_000;

/// The pair `(Phi, A)` of a Helmholtz split.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub phi_big: ScalarField,
    pub a_vec: VectorField,
    pub constants: Constants,
}

impl Decomposition {
    /// `-alpha grad Phi + gamma A`.
    pub fn recompose(&self) -> Result<VectorField> {
        let c = self.constants;
        gradient(&self.phi_big)?
            .scale(-c.alpha)
            .add(&self.a_vec.scale(c.gamma))
    }

    /// Wavefunction phase `phi = Phi / 2`.
    pub fn phase(&self) -> ScalarField {
        self.phi_big.scale(0.5)
    }
}

/// Solves `lap Phi = -source`.
///
/// Periodic grids: spectral solve against the compact Laplacian symbol; the
/// source must have zero mean and the result has zero mean. Decaying grids:
/// conjugate gradients on interior nodes with `Phi = 0` on the box edge.
pub fn solve_poisson(source: &ScalarField) -> Result<ScalarField> {
    let grid = *source.grid();
    grid.require_points(3)?;
    match grid.boundary() {
        Boundary::Periodic => {
            let mean = source.mean();
            let scale = source.max_abs();
            if mean.abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::PoissonSolvability { mean });
            }
            let spec = spectral::forward_real(source.data(), &grid);
            let phi_hat = spec
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let lam = spectral::laplacian_symbol(&grid, i);
                    if lam == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        -z / lam
                    }
                })
                .collect();
            ScalarField::from_vec(grid, spectral::inverse_real(phi_hat, &grid))
        }
        Boundary::Decaying => {
            let rhs: Vec<f64> = source
                .data()
                .iter()
                .enumerate()
                .map(|(i, v)| if grid.is_boundary(i) { 0.0 } else { *v })
                .collect();
            let sol = conjugate_gradient(|x| dirichlet_neg_laplacian(x, &grid), &rhs)?;
            ScalarField::from_vec(grid, sol)
        }
    }
}

/// `-lap` restricted to interior nodes with the boundary pinned at zero.
fn dirichlet_neg_laplacian(x: &[f64], grid: &Grid) -> Vec<f64> {
    let lap = laplacian_raw(x, grid).expect("grid size checked by caller");
    lap.iter()
        .enumerate()
        .map(|(i, v)| if grid.is_boundary(i) { 0.0 } else { -v })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients for a symmetric positive (semi-)definite operator.
fn conjugate_gradient(apply: impl Fn(&[f64]) -> Vec<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let mut x = vec![0.0; b.len()];
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for it in 0..MAX_ITERATIONS {
        if rr.sqrt() <= ITERATIVE_TOL * b_norm {
            log::debug!("cg converged after {it} iterations");
            return Ok(x);
        }
        let ap = apply(&p);
        let step = rr / dot(&p, &ap);
        for i in 0..x.len() {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        residual: rr.sqrt() / b_norm,
    })
}

/// Least-squares solution of `grad Phi = target` by CGLS, starting from zero.
fn gradient_least_squares(target: &VectorField) -> Result<ScalarField> {
    let grid = *target.grid();
    let mut x = ScalarField::zeros(&grid);
    let mut r = target.clone();
    let mut s = gradient_adjoint(&r)?;
    let s0 = s.data().iter().map(|v| v * v).sum::<f64>().sqrt();
    if s0 == 0.0 {
        return Ok(x);
    }
    let mut p = s.clone();
    let mut gamma = s0 * s0;
    for it in 0..MAX_ITERATIONS {
        if gamma.sqrt() <= ITERATIVE_TOL * s0 {
            log::debug!("cgls converged after {it} iterations");
            return Ok(x);
        }
        let q = gradient(&p)?;
        let qq: f64 = q.norm_sq().data().iter().sum();
        let step = gamma / qq;
        x = x.add(&p.scale(step))?;
        r = r.sub(&q.scale(step))?;
        s = gradient_adjoint(&r)?;
        let gamma_new: f64 = s.data().iter().map(|v| v * v).sum();
        p = s.add(&p.scale(gamma_new / gamma))?;
        gamma = gamma_new;
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        residual: gamma.sqrt() / s0,
    })
}

/// Finds `A` with `curl A = b` and `div A = 0`.
///
/// Periodic grids: spectral inversion of the discrete curl; `b` must be
/// discretely solenoidal with zero mean (a uniform field is not the curl of
/// any periodic field). Decaying grids: `A = (1/2) mean(b) x (r - r_c)` plus
/// a correction solving `lap A_f = -curl(b - mean(b))` with zero edge values.
pub fn solve_vector_potential(b_field: &VectorField) -> Result<VectorField> {
    let grid = *b_field.grid();
    grid.require_dim(3)?;
    grid.require_points(4)?;
    let b_max = b_field.max_norm();
    if b_max == 0.0 {
        return Ok(VectorField::zeros(&grid));
    }
    match grid.boundary() {
        Boundary::Periodic => {
            let max_div = divergence(b_field)?.max_abs();
            if max_div > 1e-8 * b_max / grid.min_spacing() {
                return Err(Error::NonSolenoidal { max_div });
            }
            let mean = b_field.mean();
            if mean.iter().any(|m| m.abs() > 1e-10 * b_max) {
                return Err(Error::UniformCurlOnPeriodicGrid { mean });
            }
            let spec: Vec<Vec<Complex64>> = (0..3)
                .map(|a| spectral::forward_real(b_field.component_data(a), &grid))
                .collect();
            let mut out = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; 3];
            for i in 0..grid.len() {
                let s = spectral::first_difference_symbol(&grid, i);
                let s2 = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
                if s2 == 0.0 {
                    continue;
                }
                let b = [spec[0][i], spec[1][i], spec[2][i]];
                let cross = [
                    b[2] * s[1] - b[1] * s[2],
                    b[0] * s[2] - b[2] * s[0],
                    b[1] * s[0] - b[0] * s[1],
                ];
                for a in 0..3 {
                    out[a][i] = Complex64::new(0.0, 1.0) * cross[a] / s2;
                }
            }
            let comps = out
                .into_iter()
                .map(|c| spectral::inverse_real(c, &grid))
                .collect();
            VectorField::from_components(grid, comps)
        }
        Boundary::Decaying => {
            // Sampled analytic fields carry O(h^2) stencil divergence, so
            // only clearly divergent input is rejected here.
            let max_div = divergence(b_field)?.max_abs_interior();
            let mean = b_field.mean();
            let rc = grid.center();
            let uniform = VectorField::from_fn(&grid, |p| {
                let r = [p[0] - rc[0], p[1] - rc[1], p[2] - rc[2]];
                [
                    0.5 * (mean[1] * r[2] - mean[2] * r[1]),
                    0.5 * (mean[2] * r[0] - mean[0] * r[2]),
                    0.5 * (mean[0] * r[1] - mean[1] * r[0]),
                ]
            });
            let fluct = b_field.sub(&VectorField::from_fn(&grid, |_| mean))?;
            if fluct.max_norm() <= 1e-14 * b_max {
                return Ok(uniform);
            }
            if max_div > 1e-2 * b_max / grid.min_spacing() {
                return Err(Error::NonSolenoidal { max_div });
            }
            let source = crate::fields::curl(&fluct)?;
            let comps = (0..3)
                .map(|a| solve_poisson(&source.component(a)).map(ScalarField::into_vec))
                .collect::<Result<Vec<_>>>()?;
            VectorField::from_components(grid, comps)?.add(&uniform)
        }
    }
}

/// Splits `v` into `-alpha grad Phi + gamma A`.
///
/// `Phi` is gauge-fixed to zero mean on periodic grids and to zero at the
/// first grid node on decaying grids. `A` absorbs whatever the discrete
/// gradient cannot represent and is discretely divergence-free on periodic
/// grids.
pub fn decompose(v: &VectorField, c: &Constants) -> Result<Decomposition> {
    c.validate()?;
    let grid = *v.grid();
    grid.require_points(3)?;
    let mut phi_big = match grid.boundary() {
        Boundary::Periodic => {
            let spec: Vec<Vec<Complex64>> = (0..grid.dim())
                .map(|a| spectral::forward_real(v.component_data(a), &grid))
                .collect();
            let phi_hat = (0..grid.len())
                .map(|i| {
                    let s = spectral::first_difference_symbol(&grid, i);
                    let s2: f64 = s.iter().map(|x| x * x).sum();
                    if s2 == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let sv: Complex64 = (0..grid.dim()).map(|a| spec[a][i] * s[a]).sum();
                    Complex64::new(0.0, 1.0) * sv / (c.alpha * s2)
                })
                .collect();
            ScalarField::from_vec(grid, spectral::inverse_real(phi_hat, &grid))?
        }
        Boundary::Decaying => gradient_least_squares(&v.scale(-1.0 / c.alpha))?,
    };
    match grid.boundary() {
        Boundary::Periodic => {
            let m = phi_big.mean();
            phi_big = phi_big.map(|x| x - m);
        }
        Boundary::Decaying => {
            let p0 = phi_big.data()[0];
            phi_big = phi_big.map(|x| x - p0);
        }
    }
    let rest = v.add(&gradient(&phi_big)?.scale(c.alpha))?;
    let a_vec = if c.gamma == 0.0 {
        if rest.max_norm() > 1e-12 * v.max_norm() {
            return Err(Error::ZeroGamma);
        }
        VectorField::zeros(&grid)
    } else {
        rest.scale(1.0 / c.gamma)
    };
    Ok(Decomposition {
        phi_big,
        a_vec,
        constants: *c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{curl, laplacian};
    use std::f64::consts::PI;

    fn periodic_cube(n: usize) -> Grid {
        Grid::cube(0.0, 2.0 * PI, n, Boundary::Periodic).unwrap()
    }

    #[test]
    fn poisson_zero_source() {
        let g = periodic_cube(8);
        let phi = solve_poisson(&ScalarField::zeros(&g)).unwrap();
        assert_eq!(phi.max_abs(), 0.0);
    }

    #[test]
    fn poisson_sine() {
        let g = Grid::line(0.0, 2.0 * PI, 64, Boundary::Periodic).unwrap();
        let s = ScalarField::from_fn(&g, |p| p[0].sin());
        let phi = solve_poisson(&s).unwrap();
        assert!(phi.sub(&s).unwrap().max_abs() < 5e-3);
        let res = laplacian(&phi).unwrap().add(&s).unwrap().max_abs();
        assert!(res < 1e-10);
    }

    #[test]
    fn poisson_rejects_nonzero_mean() {
        let g = periodic_cube(8);
        let s = ScalarField::constant(&g, 1.0);
        assert!(matches!(
            solve_poisson(&s),
            Err(Error::PoissonSolvability { .. })
        ));
    }

    #[test]
    fn poisson_decaying_interior_residual() {
        let g = Grid::cube(-4.0, 4.0, 20, Boundary::Decaying).unwrap();
        let s = ScalarField::from_fn(&g, |p| (-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])).exp());
        let phi = solve_poisson(&s).unwrap();
        let lap = laplacian(&phi).unwrap().add(&s).unwrap();
        let interior = lap.max_abs_interior();
        assert!(interior < 1e-8, "{interior}");
    }

    #[test]
    fn vector_potential_round_trip_periodic() {
        let g = periodic_cube(16);
        let a0 = VectorField::from_fn(&g, |p| {
            [(p[1] + 0.3).sin(), (p[2] - p[0]).cos(), (2.0 * p[0]).sin() * p[1].cos()]
        });
        let b = curl(&a0).unwrap();
        let a = solve_vector_potential(&b).unwrap();
        assert!(curl(&a).unwrap().sub(&b).unwrap().max_norm() < 1e-10);
        assert!(divergence(&a).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn vector_potential_uniform_field() {
        let g = periodic_cube(8);
        let b = VectorField::from_fn(&g, |_| [0.0, 0.0, 2.0]);
        assert!(matches!(
            solve_vector_potential(&b),
            Err(Error::UniformCurlOnPeriodicGrid { .. })
        ));
        let gd = g.with_boundary(Boundary::Decaying);
        let b = VectorField::from_fn(&gd, |_| [0.0, 0.0, 2.0]);
        let a = solve_vector_potential(&b).unwrap();
        assert!(curl(&a).unwrap().sub(&b).unwrap().max_norm() < 1e-12);
        assert!(divergence(&a).unwrap().max_abs() < 1e-12);
        assert_eq!(
            solve_vector_potential(&VectorField::zeros(&g)).unwrap().max_norm(),
            0.0
        );
    }

    #[test]
    fn vector_potential_rejects_divergent_input() {
        let g = periodic_cube(8);
        let b = VectorField::from_fn(&g, |p| [p[0].sin(), 0.0, 0.0]);
        assert!(matches!(
            solve_vector_potential(&b),
            Err(Error::NonSolenoidal { .. })
        ));
    }

    #[test]
    fn decompose_linear_velocity_decaying() {
        let c = Constants::default();
        let g = Grid::cube(-1.0, 1.0, 10, Boundary::Decaying).unwrap();
        let b = 0.7;
        let v = VectorField::from_fn(&g, |p| [b * p[0], b * p[1], b * p[2]]);
        let d = decompose(&v, &c).unwrap();
        let p0 = g.position(0);
        let r0 = p0[0] * p0[0] + p0[1] * p0[1] + p0[2] * p0[2];
        let ex = ScalarField::from_fn(&g, |p| -(b / c.alpha) * 0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - r0));
        assert!(d.phi_big.sub(&ex).unwrap().max_abs() < 1e-8);
        assert!(d.a_vec.max_norm() < 1e-8);
    }

    #[test]
    fn decompose_uniform_velocity_line() {
        let c = Constants::default();
        let g = Grid::line(-5.0, 5.0, 32, Boundary::Decaying).unwrap();
        let v = VectorField::from_fn(&g, |_| [3.0, 0.0, 0.0]);
        let d = decompose(&v, &c).unwrap();
        let x0 = g.position(0)[0];
        let ex = ScalarField::from_fn(&g, |p| -(3.0 / c.alpha) * (p[0] - x0));
        assert!(d.phi_big.sub(&ex).unwrap().max_abs() < 1e-8);
        assert!(d.recompose().unwrap().sub(&v).unwrap().max_norm() < 1e-10);
    }

    #[test]
    fn decompose_zero_velocity() {
        let g = periodic_cube(8);
        let d = decompose(&VectorField::zeros(&g), &Constants::default()).unwrap();
        assert_eq!(d.phi_big.max_abs(), 0.0);
        assert_eq!(d.a_vec.max_norm(), 0.0);
    }

    #[test]
    fn decompose_periodic_identities() {
        let c = Constants::default();
        let g = periodic_cube(16);
        let v = VectorField::from_fn(&g, |p| {
            [p[1].sin() + p[0].cos(), (p[0] + p[2]).sin(), 0.5 + p[2].cos() * p[1].sin()]
        });
        let d = decompose(&v, &c).unwrap();
        assert!(d.recompose().unwrap().sub(&v).unwrap().max_norm() < 1e-12);
        assert!(divergence(&d.a_vec).unwrap().max_abs() < 1e-12);
        assert!(d.phi_big.mean().abs() < 1e-14);
    }
}
