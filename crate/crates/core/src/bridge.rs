//! The map between the kinetic description `(f, v)` and the wave description
//! `(Psi, U)`.
//!
//! Forward: `Psi = sqrt(f) e^{i phi}` with `phi = Phi/2`, and the real
//! potential
//!
//! ```text
//! U = -(1/beta) { phi_t + alpha [lap sqrt(f) / sqrt(f) - |grad phi|^2] + gamma (A, grad phi) }
//! ```
//!
//! makes `Psi` satisfy
//!
//! ```text
//! (i/beta) Psi_t = (alpha/beta) lap Psi - (i gamma/beta) (A, grad Psi) + U Psi
//! ```
//!
//! whenever `(f, v)` obeys the continuity equation. Inverse: `f = |Psi|^2`
//! and `v = -2 alpha grad phi + gamma A`.
//!
//! The advection term `(A, grad Psi)` is discretised in the skew-symmetric
//! form `(A.grad Psi + div(A Psi))/2`, which equals `A.grad Psi` for
//! divergence-free `A` and keeps the discrete spatial operator exactly
//! Hermitian.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::ops::{complex_gradient, complex_laplacian, partial};
use crate::fields::{
    divergence, gradient, laplacian, Boundary, ComplexField, Constants, ScalarField, VectorField,
};
use crate::scenarios::Snapshot;

/// Densities below this value are rejected (not regularised).
pub const DENSITY_FLOOR: f64 = 1e-200;
/// Wavefunction magnitudes below this value are rejected.
pub const AMPLITUDE_FLOOR: f64 = 1e-100;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Output of the forward map together with its residual diagnostics.
#[derive(Debug, Clone)]
pub struct BridgeResult {
    pub psi: ComplexField,
    pub dpsi_dt: ComplexField,
    pub u_pot: ScalarField,
    /// `U + gamma^2 |A|^2 / (4 alpha beta)`, the potential of the
    /// minimal-coupling form of the equation.
    pub u2_pot: ScalarField,
    pub phase: ScalarField,
    /// Max-norm of `(1/2 beta f)[f_t + div(f v)]`, the part of `U` that must
    /// vanish for a real potential.
    pub im_u_residual: f64,
    /// Max-norm of the node-wise Schrodinger residual.
    pub schrodinger_residual: f64,
    /// Max-norm of `U Psi`, the natural scale of the residual.
    pub u_psi_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliShift {
    /// `-(charge hbar / 2 mass) b0`.
    pub direct: f64,
    /// `v_s^2 / (4 alpha beta)` with the cyclotron velocity `v_s`.
    pub cyclotron: f64,
    pub v_s: f64,
}

/// Rejects negative densities and densities below [`DENSITY_FLOOR`].
pub fn check_density(f: &ScalarField) -> Result<()> {
    for (index, &value) in f.data().iter().enumerate() {
        if value < 0.0 {
            return Err(Error::NegativeDensity { index, value });
        }
        if !(value >= DENSITY_FLOOR) {
            return Err(Error::DensityBelowFloor {
                index,
                value,
                floor: DENSITY_FLOOR,
            });
        }
    }
    Ok(())
}

fn check_amplitude(psi: &ComplexField) -> Result<()> {
    for (index, z) in psi.data().iter().enumerate() {
        let magnitude = z.norm();
        if !(magnitude >= AMPLITUDE_FLOOR) {
            return Err(Error::VanishingWavefunction {
                index,
                magnitude,
                floor: AMPLITUDE_FLOOR,
            });
        }
    }
    Ok(())
}

/// `Psi = sqrt(f) e^{i phi}` node-wise.
pub fn assemble_psi(f: &ScalarField, phi: &ScalarField) -> Result<ComplexField> {
    if let Some((index, &value)) = f.data().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeDensity { index, value });
    }
    let re = f.zip_with(phi, |f, p| f.sqrt() * p.cos())?;
    let im = f.zip_with(phi, |f, p| f.sqrt() * p.sin())?;
    ComplexField::from_parts(&re, &im)
}

/// `Psi_t = (f_t / (2 sqrt f) + i sqrt(f) phi_t) e^{i phi}`.
pub fn psi_time_derivative(
    f: &ScalarField,
    df_dt: &ScalarField,
    phi: &ScalarField,
    dphi_dt: &ScalarField,
) -> Result<ComplexField> {
    let grid = *f.grid();
    for other in [df_dt, phi, dphi_dt] {
        if other.grid() != &grid {
            return Err(Error::GridMismatch);
        }
    }
    let data = (0..grid.len())
        .map(|i| {
            let rho = f.data()[i].sqrt();
            let amp = Complex64::new(df_dt.data()[i] / (2.0 * rho), rho * dphi_dt.data()[i]);
            amp * Complex64::from_polar(1.0, phi.data()[i])
        })
        .collect();
    ComplexField::from_vec(grid, data)
}

/// Phase difference `Arg(b / a)` in `(-pi, pi]`.
fn wrapped(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Continuous phase of `psi`, integrated from the first grid node (where it
/// equals the principal argument) along x, then y, then z using wrapped
/// neighbour differences. Agrees with `Arg(psi)` modulo `2 pi` everywhere.
pub fn phase_from_psi(psi: &ComplexField) -> Result<ScalarField> {
    check_amplitude(psi)?;
    let grid = *psi.grid();
    let z = psi.data();
    let [nx, ny, nz] = grid.shape();
    let mut out = vec![0.0; grid.len()];
    out[0] = z[0].arg();
    for i in 1..nx {
        let (a, b) = (grid.index(i - 1, 0, 0), grid.index(i, 0, 0));
        out[b] = out[a] + wrapped(z[a], z[b]);
    }
    for i in 0..nx {
        for j in 1..ny {
            let (a, b) = (grid.index(i, j - 1, 0), grid.index(i, j, 0));
            out[b] = out[a] + wrapped(z[a], z[b]);
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            for k in 1..nz {
                let (a, b) = (grid.index(i, j, k - 1), grid.index(i, j, k));
                out[b] = out[a] + wrapped(z[a], z[b]);
            }
        }
    }
    ScalarField::from_vec(grid, out)
}

/// Gradient of the phase of `psi` from wrapped neighbour differences; the
/// same stencils as [`gradient`] applied to the unwrapped phase, but immune
/// to `2 pi` jumps.
pub fn phase_gradient(psi: &ComplexField) -> Result<VectorField> {
    check_amplitude(psi)?;
    let grid = *psi.grid();
    grid.require_points(3)?;
    let z = psi.data();
    let mut comps = Vec::with_capacity(grid.dim());
    for axis in 0..grid.dim() {
        let n = grid.axis(axis).n;
        let h = grid.spacing(axis);
        let stride = grid.stride(axis);
        let mut out = vec![0.0; grid.len()];
        for idx in 0..grid.len() {
            let i = grid.unravel(idx)[axis];
            let base = idx - i * stride;
            let at = |m: usize| z[base + m * stride];
            let d = |m: usize, k: usize| wrapped(at(m), at(k));
            out[idx] = match grid.boundary() {
                Boundary::Periodic => {
                    (d(i, (i + 1) % n) + d((i + n - 1) % n, i)) / (2.0 * h)
                }
                Boundary::Decaying if i == 0 => (3.0 * d(0, 1) - d(1, 2)) / (2.0 * h),
                Boundary::Decaying if i + 1 == n => {
                    (3.0 * d(n - 2, n - 1) - d(n - 3, n - 2)) / (2.0 * h)
                }
                Boundary::Decaying => (d(i, i + 1) + d(i - 1, i)) / (2.0 * h),
            };
        }
        comps.push(out);
    }
    VectorField::from_components(grid, comps)
}

/// `v = -2 alpha grad phi + gamma A` with the phase gradient of `psi`.
pub fn velocity_from_psi(
    psi: &ComplexField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<VectorField> {
    phase_gradient(psi)?
        .scale(-2.0 * c.alpha)
        .add(&a_vec.scale(c.gamma))
}

/// `v = i alpha [grad Psi / Psi - conj(grad Psi / Psi)] + gamma A`, evaluated
/// directly from the complex gradient.
pub fn velocity_from_psi_direct(
    psi: &ComplexField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<VectorField> {
    check_amplitude(psi)?;
    let grid = *psi.grid();
    let grad = complex_gradient(psi)?;
    let comps = grad
        .iter()
        .map(|g| {
            g.iter()
                .zip(psi.data())
                .map(|(d, p)| -2.0 * c.alpha * (d / p).im)
                .collect()
        })
        .collect();
    VectorField::from_components(grid, comps)?.add(&a_vec.scale(c.gamma))
}

/// Real potential that makes `sqrt(f) e^{i phi}` satisfy the wave equation.
pub fn reconstruct_potential(
    f: &ScalarField,
    phi: &ScalarField,
    dphi_dt: &ScalarField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<ScalarField> {
    check_density(f)?;
    let rho = f.map(f64::sqrt);
    let quantum = laplacian(&rho)?.zip_with(&rho, |l, r| l / r)?;
    let grad_phi = gradient(phi)?;
    let kinetic = grad_phi.norm_sq();
    let vortex = a_vec.dot(&grad_phi)?;
    let inner = quantum.sub(&kinetic)?.scale(c.alpha);
    let total = dphi_dt.add(&inner)?.add(&vortex.scale(c.gamma))?;
    Ok(total.scale(-1.0 / c.beta))
}

/// `(1/2 beta f)[f_t + div(f v)]`: the imaginary part of the potential,
/// which vanishes exactly when `(f, v)` satisfies continuity.
pub fn im_u(
    f: &ScalarField,
    df_dt: &ScalarField,
    v: &VectorField,
    c: &Constants,
) -> Result<ScalarField> {
    check_density(f)?;
    let cont = continuity_residual(f, df_dt, v)?;
    cont.zip_with(f, |r, f| r / (2.0 * c.beta * f))
}

/// Expanded form of [`im_u`] with `v = -2 alpha grad phi + gamma A`:
/// `(1/2 beta f)[f_t - 2 alpha (grad f . grad phi + f lap phi) + gamma A . grad f]`.
/// Agrees with [`im_u`] up to truncation when `div A = 0`.
pub fn im_u_expanded(
    f: &ScalarField,
    df_dt: &ScalarField,
    phi: &ScalarField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<ScalarField> {
    check_density(f)?;
    let gf = gradient(f)?;
    let transport = gf
        .dot(&gradient(phi)?)?
        .add(&f.mul(&laplacian(phi)?)?)?
        .scale(-2.0 * c.alpha);
    let vortex = a_vec.dot(&gf)?.scale(c.gamma);
    df_dt
        .add(&transport)?
        .add(&vortex)?
        .zip_with(f, |r, f| r / (2.0 * c.beta * f))
}

/// `f_t + div(f v)` node-wise.
pub fn continuity_residual(
    f: &ScalarField,
    df_dt: &ScalarField,
    v: &VectorField,
) -> Result<ScalarField> {
    let flux = f.scaled_vector(v)?;
    df_dt.add(&divergence(&flux)?)
}

/// Skew-symmetric advection `(A.grad Psi + div(A Psi)) / 2`.
pub fn advection(a_vec: &VectorField, psi: &ComplexField) -> Result<ComplexField> {
    let grid = *psi.grid();
    if a_vec.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    if a_vec.max_norm() == 0.0 {
        return ComplexField::from_vec(grid, out);
    }
    let grad = complex_gradient(psi)?;
    for axis in 0..grid.dim() {
        let a = a_vec.component_data(axis);
        let a_psi: Vec<Complex64> = a.iter().zip(psi.data()).map(|(x, p)| p * *x).collect();
        let d_a_psi = partial(&a_psi, &grid, axis)?;
        for i in 0..grid.len() {
            out[i] += 0.5 * (grad[axis][i] * a[i] + d_a_psi[i]);
        }
    }
    ComplexField::from_vec(grid, out)
}

fn spatial_part(psi: &ComplexField, a_vec: &VectorField, c: &Constants) -> Result<ComplexField> {
    let lap = complex_laplacian(psi)?;
    let adv = advection(a_vec, psi)?;
    lap.scale((c.alpha / c.beta).into())
        .sub(&adv.scale(I * (c.gamma / c.beta)))
}

/// `calL Psi = -(i/beta) Psi_t + (alpha/beta) lap Psi - (i gamma/beta)(A, grad Psi)`.
/// For a bridge-produced pair, `calL Psi = -U Psi`.
#[allow(non_snake_case)]
pub fn apply_script_L(
    psi: &ComplexField,
    dpsi_dt: &ComplexField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<ComplexField> {
    spatial_part(psi, a_vec, c)?.add(&dpsi_dt.scale(-I / c.beta))
}

/// `L Psi = (1/beta) Psi_t + i (alpha/beta) lap Psi + (gamma/beta)(A, grad Psi)`,
/// identically `i calL Psi`.
#[allow(non_snake_case)]
pub fn apply_L(
    psi: &ComplexField,
    dpsi_dt: &ComplexField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<ComplexField> {
    let lap = complex_laplacian(psi)?;
    let adv = advection(a_vec, psi)?;
    dpsi_dt
        .scale((1.0 / c.beta).into())
        .add(&lap.scale(I * (c.alpha / c.beta)))?
        .add(&adv.scale((c.gamma / c.beta).into()))
}

/// `R = (i/beta) Psi_t - (alpha/beta) lap Psi + (i gamma/beta)(A, grad Psi) - U Psi`.
pub fn schrodinger_residual(
    psi: &ComplexField,
    dpsi_dt: &ComplexField,
    u_pot: &ScalarField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<ComplexField> {
    let l = apply_script_L(psi, dpsi_dt, a_vec, c)?;
    let u_psi = psi.mul_real(u_pot)?;
    Ok(l.add(&u_psi)?.scale((-1.0).into()))
}

/// `U + gamma^2 |A|^2 / (4 alpha beta)`.
pub fn minimal_coupling_potential(
    u_pot: &ScalarField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<ScalarField> {
    let k = c.gamma * c.gamma / (4.0 * c.alpha * c.beta);
    u_pot.add(&a_vec.norm_sq().scale(k))
}

/// Residual of the minimal-coupling form
/// `(i/beta) Psi_t = -alpha beta (p - gamma A / (2 alpha beta))^2 Psi + U2 Psi`
/// with `p = -(i/beta) grad`, evaluated by applying the shifted momentum
/// twice. Independent of the skew advection used by [`schrodinger_residual`].
pub fn minimal_coupling_residual(
    psi: &ComplexField,
    dpsi_dt: &ComplexField,
    u2_pot: &ScalarField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<ComplexField> {
    let grid = *psi.grid();
    let kappa = c.gamma / (2.0 * c.alpha * c.beta);
    let grad = complex_gradient(psi)?;
    let mut squared = vec![Complex64::new(0.0, 0.0); grid.len()];
    for axis in 0..grid.dim() {
        let a = a_vec.component_data(axis);
        let w: Vec<Complex64> = (0..grid.len())
            .map(|i| -I / c.beta * grad[axis][i] - psi.data()[i] * (kappa * a[i]))
            .collect();
        let dw = partial(&w, &grid, axis)?;
        for i in 0..grid.len() {
            squared[i] += -I / c.beta * dw[i] - w[i] * (kappa * a[i]);
        }
    }
    let data = (0..grid.len())
        .map(|i| {
            I / c.beta * dpsi_dt.data()[i] + c.alpha * c.beta * squared[i]
                - psi.data()[i] * u2_pot.data()[i]
        })
        .collect();
    ComplexField::from_vec(grid, data)
}

/// Runs the forward map on a snapshot and evaluates every residual.
pub fn forward(snap: &Snapshot, c: &Constants) -> Result<BridgeResult> {
    c.validate()?;
    check_density(&snap.f)?;
    let psi = assemble_psi(&snap.f, &snap.phi)?;
    let dpsi_dt = psi_time_derivative(&snap.f, &snap.df_dt, &snap.phi, &snap.dphi_dt)?;
    let u_pot = reconstruct_potential(&snap.f, &snap.phi, &snap.dphi_dt, &snap.a_vec, c)?;
    let u2_pot = minimal_coupling_potential(&u_pot, &snap.a_vec, c)?;
    let im = im_u(&snap.f, &snap.df_dt, &snap.v, c)?;
    let res = schrodinger_residual(&psi, &dpsi_dt, &u_pot, &snap.a_vec, c)?;
    let u_psi_scale = psi.mul_real(&u_pot)?.max_abs();
    Ok(BridgeResult {
        im_u_residual: im.max_abs(),
        schrodinger_residual: res.max_abs(),
        u_psi_scale,
        psi,
        dpsi_dt,
        u_pot,
        u2_pot,
        phase: snap.phi.clone(),
    })
}

/// Inverse map: `(|Psi|^2, v)` from a wavefunction and vortex component.
pub fn inverse(
    psi: &ComplexField,
    a_vec: &VectorField,
    c: &Constants,
) -> Result<(ScalarField, VectorField)> {
    Ok((psi.norm_sqr(), velocity_from_psi(psi, a_vec, c)?))
}

fn check_physical(c: &Constants, mass: f64) -> Result<()> {
    let expected = -1.0 / (2.0 * mass * c.beta);
    if !(mass > 0.0) || (c.alpha - expected).abs() > 1e-12 * expected.abs() {
        return Err(Error::NonPhysicalConstants);
    }
    Ok(())
}

/// Energy shift of one spin component in a uniform field `b0`:
/// `-(charge hbar / 2 mass) b0` with `hbar = 1/beta`.
pub fn pauli_shift(b0: f64, c: &Constants, mass: f64, charge: f64) -> Result<f64> {
    check_physical(c, mass)?;
    Ok(-(charge * c.hbar() / (2.0 * mass)) * b0)
}

/// Both evaluations of the shift: the direct formula and
/// `v_s^2 / (4 alpha beta)` with the cyclotron velocity
/// `v_s = charge b0 r / mass`, `r = hbar / (mass c_light)`. They coincide
/// when `v_s = c_light`.
pub fn pauli_shift_cyclotron(
    b0: f64,
    c: &Constants,
    mass: f64,
    charge: f64,
    c_light: f64,
) -> Result<PauliShift> {
    let direct = pauli_shift(b0, c, mass, charge)?;
    if !(c_light > 0.0) {
        return Err(Error::InvalidConstants("speed of light must be positive".into()));
    }
    let r = c.hbar() / (mass * c_light);
    let v_s = charge * b0 * r / mass;
    Ok(PauliShift {
        direct,
        cyclotron: v_s * v_s / (4.0 * c.alpha * c.beta),
        v_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{inner_product, Grid};
    use std::f64::consts::PI;

    fn line(n: usize) -> Grid {
        Grid::line(0.0, 2.0 * PI, n, Boundary::Periodic).unwrap()
    }

    #[test]
    fn assemble_constant_density() {
        let g = line(8);
        let psi = assemble_psi(&ScalarField::constant(&g, 4.0), &ScalarField::zeros(&g)).unwrap();
        assert!(psi.data().iter().all(|z| *z == Complex64::new(2.0, 0.0)));
        assert!(matches!(
            assemble_psi(&ScalarField::constant(&g, -1.0), &ScalarField::zeros(&g)),
            Err(Error::NegativeDensity { .. })
        ));
    }

    #[test]
    fn phase_of_real_positive_is_zero() {
        let g = line(16);
        let psi = ComplexField::from_fn(&g, |p| Complex64::new(1.0 + p[0], 0.0));
        assert_eq!(phase_from_psi(&psi).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn phase_unwraps_multiple_branches() {
        let g = line(64);
        let psi = ComplexField::from_fn(&g, |p| Complex64::from_polar(1.0, 3.0 * p[0]));
        let phi = phase_from_psi(&psi).unwrap();
        for (idx, p) in g.positions().enumerate() {
            assert!((phi.data()[idx] - 3.0 * p[0]).abs() < 1e-12);
            let diff = phi.data()[idx] - psi.data()[idx].arg();
            let k = (diff / (2.0 * PI)).round();
            assert!((diff - 2.0 * PI * k).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_psi_rejected() {
        let g = line(8);
        let psi = ComplexField::zeros(&g);
        assert!(matches!(
            phase_from_psi(&psi),
            Err(Error::VanishingWavefunction { .. })
        ));
    }

    #[test]
    fn real_psi_gives_pure_vortex_velocity() {
        let c = Constants::default();
        let g = Grid::cube(0.0, 2.0 * PI, 8, Boundary::Periodic).unwrap();
        let psi = ComplexField::from_fn(&g, |p| Complex64::new(2.0 + p[1].sin(), 0.0));
        let a = VectorField::from_fn(&g, |p| [p[2].sin(), 0.0, p[0].cos()]);
        let v = velocity_from_psi(&psi, &a, &c).unwrap();
        assert!(v.sub(&a.scale(c.gamma)).unwrap().max_norm() < 1e-15);
    }

    #[test]
    fn constant_state_has_zero_potential_and_residual() {
        let c = Constants::default();
        let g = line(16);
        let f = ScalarField::constant(&g, 2.0);
        let z = ScalarField::zeros(&g);
        let a = VectorField::zeros(&g);
        let u = reconstruct_potential(&f, &z, &z, &a, &c).unwrap();
        assert_eq!(u.max_abs(), 0.0);
        let psi = assemble_psi(&f, &z).unwrap();
        let r = schrodinger_residual(&psi, &ComplexField::zeros(&g), &u, &a, &c).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn static_continuity_is_zero() {
        let g = line(16);
        let f = ScalarField::from_fn(&g, |p| 1.0 + 0.5 * p[0].sin());
        let r = continuity_residual(&f, &ScalarField::zeros(&g), &VectorField::zeros(&g)).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn l_is_i_script_l() {
        let c = Constants::new(0.3, -1.7, 0.9, 1.0, 1.0).unwrap();
        let g = Grid::cube(0.0, 1.0, 6, Boundary::Periodic).unwrap();
        let psi = ComplexField::from_fn(&g, |p| Complex64::new(p[0].sin(), p[1] * p[2]));
        let dpsi = ComplexField::from_fn(&g, |p| Complex64::new(p[2], -p[0]));
        let a = VectorField::from_fn(&g, |p| [p[1], p[2].cos(), 0.2]);
        let l = apply_L(&psi, &dpsi, &a, &c).unwrap();
        let sl = apply_script_L(&psi, &dpsi, &a, &c).unwrap().scale(I);
        assert!(l.sub(&sl).unwrap().max_abs() < 1e-13 * l.max_abs());
    }

    #[test]
    fn spatial_script_l_is_hermitian() {
        let c = Constants::default();
        let g = Grid::cube(0.0, 1.0, 6, Boundary::Periodic).unwrap();
        let p1 = ComplexField::from_fn(&g, |p| Complex64::new(p[0] + p[1], p[2].sin()));
        let p2 = ComplexField::from_fn(&g, |p| Complex64::new(p[2].cos(), p[0] * p[1]));
        let a = VectorField::from_fn(&g, |p| [p[1].sin(), p[0] * p[2], 1.0]);
        let zero = ComplexField::zeros(&g);
        let l1 = apply_script_L(&p1, &zero, &a, &c).unwrap();
        let l2 = apply_script_L(&p2, &zero, &a, &c).unwrap();
        let lhs = inner_product(&p1, &l2).unwrap();
        let rhs = inner_product(&l1, &p2).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn pauli_examples() {
        let c = Constants::physical(1.0, 1.0, 1.0).unwrap();
        assert_eq!(pauli_shift(0.0, &c, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(pauli_shift(1.0, &c, 1.0, 1.0).unwrap(), -0.5);
        let both = pauli_shift_cyclotron(1.0, &c, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(both.direct, both.cyclotron);
        let c2 = Constants::new(-0.7, 1.0, -1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            pauli_shift(1.0, &c2, 1.0, 1.0),
            Err(Error::NonPhysicalConstants)
        ));
    }

    #[test]
    fn pauli_routes_agree_when_cyclotron_speed_is_light_speed() {
        let (hbar, m, e) = (0.7, 1.9, 1.3);
        let c = Constants::physical(hbar, m, e).unwrap();
        let c_light = 2.5;
        // Choose b0 so that v_s = c_light.
        let b0 = c_light * c_light * m * m / (e * hbar);
        let s = pauli_shift_cyclotron(b0, &c, m, e, c_light).unwrap();
        assert!((s.v_s - c_light).abs() < 1e-12 * c_light);
        assert!((s.direct - s.cyclotron).abs() < 1e-12 * s.direct.abs());
    }
}
