//! Material derivative, the Lorentz-type force law and density-weighted
//! (center-of-mass) averages with their integral identities.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{
    gradient, integrate, laplacian, Boundary, Constants, ScalarField, VectorField,
};
use crate::scenarios::Snapshot;

/// Boundary values must stay below this fraction of the interior maximum.
pub const BOUNDARY_FLOOR: f64 = 1e-10;

/// `v_t + (v . grad) v`.
pub fn material_derivative(v: &VectorField, dv_dt: &VectorField) -> Result<VectorField> {
    let grid = *v.grid();
    if dv_dt.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    let mut comps = Vec::with_capacity(grid.dim());
    for i in 0..grid.dim() {
        let g = gradient(&v.component(i))?;
        let adv = v.dot(&g)?;
        comps.push(
            dv_dt
                .component(i)
                .add(&adv)?
                .into_vec(),
        );
    }
    VectorField::from_components(grid, comps)
}

/// `dv/dt + gamma (E + v x B)`.
pub fn lorentz_residual(
    dv_dt_material: &VectorField,
    e: &VectorField,
    b: &VectorField,
    v: &VectorField,
    c: &Constants,
) -> Result<VectorField> {
    let force = e.add(&v.cross(b)?)?;
    dv_dt_material.add(&force.scale(c.gamma))
}

/// A residual and the magnitude it should be judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityGap {
    pub residual: f64,
    pub scale: f64,
}

impl IdentityGap {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComReport {
    /// `N = int f`.
    pub n_total: f64,
    /// `-gamma (<E> + <v x B>)`.
    pub com_accel: [f64; 3],
    pub mean_e: [f64; 3],
    pub mean_v_cross_b: [f64; 3],
    /// `<grad U>`.
    pub mean_grad_u: [f64; 3],
    /// Named integral identities:
    /// * `transport`: `int v div(f v) + int f (v.grad) v = 0`;
    /// * `force_balance`: `int f dv/dt = N com_accel`;
    /// * `quantum_force`: `int f grad(lap r / r) + 2 int lap r grad r = 0`, `r = |Psi|`;
    /// * `pressure_symmetry`: `int Y div Y = 0` for `Y = -grad r`;
    /// * `pressure_drop`: size of the quantum-pressure term in `<E>`;
    /// * `com_potential`: `com_accel / (2 alpha beta) = <grad U>`.
    pub identity_gaps: BTreeMap<String, IdentityGap>,
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn weighted_mean(f: &ScalarField, x: &VectorField, n: f64) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (a, slot) in out.iter_mut().enumerate().take(x.dim()) {
        *slot = integrate(&f.mul(&x.component(a))?) / n;
    }
    Ok(out)
}

fn vector_integral(x: &VectorField) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (a, slot) in out.iter_mut().enumerate().take(x.dim()) {
        *slot = integrate(&x.component(a));
    }
    out
}

fn abs_integral(x: &VectorField) -> f64 {
    integrate(&x.norm_sq().map(f64::sqrt))
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Density-weighted averages and the integral identities that hold for
/// fields decaying at the box edge.
pub fn com_diagnostics(
    snap: &Snapshot,
    e: &VectorField,
    b: &VectorField,
    u_pot: &ScalarField,
    c: &Constants,
) -> Result<ComReport> {
    let grid = *snap.grid();
    if grid.boundary() != Boundary::Decaying {
        return Err(Error::WrongBoundary(Boundary::Decaying));
    }
    let f = &snap.f;
    let interior = f.max_abs_interior();
    let edge = (0..grid.len())
        .filter(|&i| grid.is_boundary(i))
        .map(|i| f.data()[i].abs())
        .fold(0.0, f64::max);
    let ratio = if interior > 0.0 { edge / interior } else { f64::INFINITY };
    if !(ratio < BOUNDARY_FLOOR) {
        return Err(Error::BoundaryFloor { ratio });
    }

    let n = integrate(f);
    let v = &snap.v;
    let v_cross_b = v.cross(b)?;
    let mean_e = weighted_mean(f, e, n)?;
    let mean_v_cross_b = weighted_mean(f, &v_cross_b, n)?;
    let mut com_accel = [0.0; 3];
    for a in 0..3 {
        com_accel[a] = -c.gamma * (mean_e[a] + mean_v_cross_b[a]);
    }
    let mean_grad_u = weighted_mean(f, &gradient(u_pot)?, n)?;

    let mut gaps = BTreeMap::new();

    // int v div(f v) + int f (v.grad) v
    let div_fv = crate::fields::divergence(&f.scaled_vector(v)?)?;
    let t1 = div_fv.scaled_vector(v)?;
    let mat = material_derivative(v, &VectorField::zeros(&grid))?;
    let t2 = f.scaled_vector(&mat)?;
    gaps.insert(
        "transport".to_owned(),
        IdentityGap {
            residual: norm3(vector_integral(&t1.add(&t2)?)),
            scale: abs_integral(&t1) + abs_integral(&t2),
        },
    );

    // int f dv/dt = N com_accel
    let full_mat = material_derivative(v, &snap.dv_dt)?;
    let lhs = vector_integral(&f.scaled_vector(&full_mat)?);
    let rhs = [n * com_accel[0], n * com_accel[1], n * com_accel[2]];
    gaps.insert(
        "force_balance".to_owned(),
        IdentityGap {
            residual: norm3(sub3(lhs, rhs)),
            scale: abs_integral(&f.scaled_vector(&full_mat)?),
        },
    );

    // Quantum-pressure identities with r = |Psi| = sqrt(f).
    let r = f.map(f64::sqrt);
    let lap_r = laplacian(&r)?;
    let grad_r = gradient(&r)?;
    let q = lap_r.zip_with(&r, |l, r| l / r)?;
    let f_grad_q = f.scaled_vector(&gradient(&q)?)?;
    let lap_grad = lap_r.scaled_vector(&grad_r)?;
    let quantum = f_grad_q.add(&lap_grad.scale(2.0))?;
    gaps.insert(
        "quantum_force".to_owned(),
        IdentityGap {
            residual: norm3(vector_integral(&quantum)),
            scale: abs_integral(&f_grad_q) + 2.0 * abs_integral(&lap_grad),
        },
    );
    gaps.insert(
        "pressure_symmetry".to_owned(),
        IdentityGap {
            residual: norm3(vector_integral(&lap_grad)),
            scale: abs_integral(&lap_grad),
        },
    );
    let gamma = c.require_gamma()?;
    let k = 2.0 * c.alpha * c.alpha / gamma;
    let pressure = vector_integral(&f_grad_q.scale(k));
    gaps.insert(
        "pressure_drop".to_owned(),
        IdentityGap {
            residual: norm3(pressure) / n,
            scale: abs_integral(&f_grad_q.scale(k)) / n,
        },
    );

    let k2 = 1.0 / (2.0 * c.alpha * c.beta);
    let predicted = [com_accel[0] * k2, com_accel[1] * k2, com_accel[2] * k2];
    gaps.insert(
        "com_potential".to_owned(),
        IdentityGap {
            residual: norm3(sub3(predicted, mean_grad_u)),
            scale: norm3(predicted).max(norm3(mean_grad_u)),
        },
    );

    Ok(ComReport {
        n_total: n,
        com_accel,
        mean_e,
        mean_v_cross_b,
        mean_grad_u,
        identity_gaps: gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::reconstruct_potential;
    use crate::em::{electric_field, magnetic_field};
    use crate::fields::Grid;
    use crate::scenarios::{Example1, Scenario};

    #[test]
    fn steady_uniform_flow_has_no_acceleration() {
        let g = Grid::cube(-1.0, 1.0, 6, Boundary::Decaying).unwrap();
        let v = VectorField::from_fn(&g, |_| [1.0, 2.0, 3.0]);
        let m = material_derivative(&v, &VectorField::zeros(&g)).unwrap();
        assert!(m.max_norm() < 1e-12);
    }

    #[test]
    fn example1_force_law_and_com() {
        let c = Constants::default();
        let ex = Example1::new(2.0, 0.0, c).unwrap();
        let g = ex.default_grid().unwrap();
        let s = ex.snapshot(&g, 0.3).unwrap();
        let m = material_derivative(&s.v, &s.dv_dt).unwrap();
        for v in m.component_data(0) {
            assert!((v - 2.0).abs() < 1e-12);
        }
        let e = electric_field(&s, &c).unwrap();
        let b = magnetic_field(&s.v, &c).unwrap();
        assert!(lorentz_residual(&m, &e, &b, &s.v, &c).unwrap().max_norm() < 1e-10);
        let u = reconstruct_potential(&s.f, &s.phi, &s.dphi_dt, &s.a_vec, &c).unwrap();
        let rep = com_diagnostics(&s, &e, &b, &u, &c).unwrap();
        assert!((rep.n_total - std::f64::consts::PI.sqrt()).abs() < 1e-8);
        assert!((rep.com_accel[0] - 2.0).abs() < 1e-10);
        assert!(rep.identity_gaps["com_potential"].relative() < 1e-3);
    }

    #[test]
    fn symmetric_packet_has_zero_mean_force() {
        let c = Constants::default();
        let g = Grid::line(-10.0, 10.0, 201, Boundary::Decaying).unwrap();
        let ex = Example1::new(0.0, 0.0, c).unwrap();
        let s = ex.snapshot(&g, 0.0).unwrap();
        let u = ScalarField::from_fn(&g, |p| p[0] * p[0]);
        let e0 = VectorField::from_fn(&g, |_| [0.7, 0.0, 0.0]);
        let rep = com_diagnostics(&s, &e0, &VectorField::zeros(&g), &u, &c).unwrap();
        assert!(rep.mean_grad_u[0].abs() < 1e-12);
        assert!((rep.mean_e[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn non_decaying_field_rejected() {
        let c = Constants::default();
        let g = Grid::line(-2.0, 2.0, 32, Boundary::Decaying).unwrap();
        let s = Example1::new(1.0, 0.0, c).unwrap().snapshot(&g, 0.0).unwrap();
        let z = VectorField::zeros(&g);
        assert!(matches!(
            com_diagnostics(&s, &z, &z, &ScalarField::zeros(&g), &c),
            Err(Error::BoundaryFloor { .. })
        ));
        let gp = g.with_boundary(Boundary::Periodic);
        let sp = Example1::new(1.0, 0.0, c).unwrap().snapshot(&gp, 0.0).unwrap();
        assert!(matches!(
            com_diagnostics(&sp, &z, &z, &ScalarField::zeros(&g), &c),
            Err(Error::WrongBoundary(_))
        ));
    }
}
