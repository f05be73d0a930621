//! Second-order finite-difference vector calculus and quadrature.
//!
//! Every operator is built from two one-dimensional stencils (first and second
//! derivative) applied along grid lines. Periodic grids wrap; decaying grids
//! switch to one-sided second-order formulas on the first and last node of
//! each line, so every operator is second-order accurate everywhere.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::field::{same_grid, ComplexField, ScalarField, VectorField};
use super::grid::{Boundary, Grid};
use crate::error::{Error, Result};

/// Anything a stencil can be applied to: reals and complex numbers.
pub trait Sample: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Sample for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Sample for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

/// Weights of a one-dimensional stencil at a single node (at most 4 taps).
#[derive(Debug, Clone, Copy)]
struct Stencil {
    idx: [usize; 4],
    w: [f64; 4],
    len: usize,
}

impl Stencil {
    fn new(taps: &[(usize, f64)]) -> Self {
        let mut s = Self {
            idx: [0; 4],
            w: [0.0; 4],
            len: taps.len(),
        };
        for (k, &(i, w)) in taps.iter().enumerate() {
            s.idx[k] = i;
            s.w[k] = w;
        }
        s
    }

    fn taps(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.idx[..self.len].iter().copied().zip(self.w[..self.len].iter().copied())
    }
}

fn first_stencil(i: usize, n: usize, h: f64, boundary: Boundary) -> Stencil {
    let c = 0.5 / h;
    match boundary {
        Boundary::Periodic => Stencil::new(&[((i + n - 1) % n, -c), ((i + 1) % n, c)]),
        Boundary::Decaying if i == 0 => Stencil::new(&[(0, -3.0 * c), (1, 4.0 * c), (2, -c)]),
        Boundary::Decaying if i + 1 == n => {
            Stencil::new(&[(n - 1, 3.0 * c), (n - 2, -4.0 * c), (n - 3, c)])
        }
        Boundary::Decaying => Stencil::new(&[(i - 1, -c), (i + 1, c)]),
    }
}

fn second_stencil(i: usize, n: usize, h: f64, boundary: Boundary) -> Stencil {
    let c = 1.0 / (h * h);
    match boundary {
        Boundary::Periodic => Stencil::new(&[
            ((i + n - 1) % n, c),
            (i, -2.0 * c),
            ((i + 1) % n, c),
        ]),
        Boundary::Decaying if i == 0 => {
            Stencil::new(&[(0, 2.0 * c), (1, -5.0 * c), (2, 4.0 * c), (3, -c)])
        }
        Boundary::Decaying if i + 1 == n => Stencil::new(&[
            (n - 1, 2.0 * c),
            (n - 2, -5.0 * c),
            (n - 3, 4.0 * c),
            (n - 4, -c),
        ]),
        Boundary::Decaying => Stencil::new(&[(i - 1, c), (i, -2.0 * c), (i + 1, c)]),
    }
}

/// Flat indices of the first node of every grid line running along `axis`.
fn line_starts(grid: &Grid, axis: usize) -> impl Iterator<Item = usize> + '_ {
    (0..grid.len()).filter(move |&idx| grid.unravel(idx)[axis] == 0)
}

fn required_first(boundary: Boundary) -> usize {
    match boundary {
        Boundary::Periodic => 3,
        Boundary::Decaying => 3,
    }
}

fn required_second(boundary: Boundary) -> usize {
    match boundary {
        Boundary::Periodic => 3,
        Boundary::Decaying => 4,
    }
}

fn apply_along<T: Sample>(
    data: &[T],
    grid: &Grid,
    axis: usize,
    stencil: fn(usize, usize, f64, Boundary) -> Stencil,
) -> Vec<T> {
    let n = grid.axis(axis).n;
    let h = grid.spacing(axis);
    let stride = grid.stride(axis);
    let stencils: Vec<Stencil> = (0..n).map(|i| stencil(i, n, h, grid.boundary())).collect();
    let mut out = vec![T::zero(); data.len()];
    for start in line_starts(grid, axis) {
        for (i, st) in stencils.iter().enumerate() {
            out[start + i * stride] = st
                .taps()
                .fold(T::zero(), |acc, (j, w)| acc + data[start + j * stride] * w);
        }
    }
    out
}

/// First derivative along `axis` of raw samples laid out on `grid`.
pub fn partial<T: Sample>(data: &[T], grid: &Grid, axis: usize) -> Result<Vec<T>> {
    check_axis(grid, axis, required_first(grid.boundary()))?;
    Ok(apply_along(data, grid, axis, first_stencil))
}

/// Second derivative along `axis` of raw samples laid out on `grid`.
pub fn partial2<T: Sample>(data: &[T], grid: &Grid, axis: usize) -> Result<Vec<T>> {
    check_axis(grid, axis, required_second(grid.boundary()))?;
    Ok(apply_along(data, grid, axis, second_stencil))
}

/// Transpose of [`partial`] with respect to the plain Euclidean sum.
pub fn partial_adjoint(data: &[f64], grid: &Grid, axis: usize) -> Result<Vec<f64>> {
    check_axis(grid, axis, required_first(grid.boundary()))?;
    let n = grid.axis(axis).n;
    let h = grid.spacing(axis);
    let stride = grid.stride(axis);
    let mut out = vec![0.0; data.len()];
    for start in line_starts(grid, axis) {
        for i in 0..n {
            let wi = data[start + i * stride];
            for (j, w) in first_stencil(i, n, h, grid.boundary()).taps() {
                out[start + j * stride] += w * wi;
            }
        }
    }
    Ok(out)
}

fn check_axis(grid: &Grid, axis: usize, required: usize) -> Result<()> {
    let points = grid.axis(axis).n;
    if points < required {
        return Err(Error::GridTooSmall {
            axis,
            points,
            required,
        });
    }
    Ok(())
}

pub fn gradient(s: &ScalarField) -> Result<VectorField> {
    let grid = *s.grid();
    let comps = (0..grid.dim())
        .map(|a| partial(s.data(), &grid, a))
        .collect::<Result<Vec<_>>>()?;
    VectorField::from_components(grid, comps)
}

pub fn divergence(v: &VectorField) -> Result<ScalarField> {
    let grid = *v.grid();
    let mut out = vec![0.0; grid.len()];
    for a in 0..grid.dim() {
        for (o, d) in out.iter_mut().zip(partial(v.component_data(a), &grid, a)?) {
            *o += d;
        }
    }
    ScalarField::from_vec(grid, out)
}

pub fn curl(v: &VectorField) -> Result<VectorField> {
    let grid = *v.grid();
    grid.require_dim(3)?;
    let d = |comp: usize, axis: usize| partial(v.component_data(comp), &grid, axis);
    let diff = |a: Vec<f64>, b: Vec<f64>| a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let cx = diff(d(2, 1)?, d(1, 2)?);
    let cy = diff(d(0, 2)?, d(2, 0)?);
    let cz = diff(d(1, 0)?, d(0, 1)?);
    VectorField::from_components(grid, vec![cx, cy, cz])
}

pub fn laplacian(s: &ScalarField) -> Result<ScalarField> {
    let grid = *s.grid();
    ScalarField::from_vec(grid, laplacian_raw(s.data(), &grid)?)
}

pub(crate) fn laplacian_raw<T: Sample>(data: &[T], grid: &Grid) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); grid.len()];
    for a in 0..grid.dim() {
        for (o, d) in out.iter_mut().zip(partial2(data, grid, a)?) {
            *o = *o + d;
        }
    }
    Ok(out)
}

/// Transpose of [`gradient`]: the map `w -> G^T w` with `G` the discrete
/// gradient, under the plain node sum. On periodic grids this is `-div`.
pub fn gradient_adjoint(w: &VectorField) -> Result<ScalarField> {
    let grid = *w.grid();
    let mut out = vec![0.0; grid.len()];
    for a in 0..grid.dim() {
        for (o, d) in out
            .iter_mut()
            .zip(partial_adjoint(w.component_data(a), &grid, a)?)
        {
            *o += d;
        }
    }
    ScalarField::from_vec(grid, out)
}

/// Gradient of a complex field, one complex array per spatial axis.
pub fn complex_gradient(psi: &ComplexField) -> Result<Vec<Vec<Complex64>>> {
    let grid = *psi.grid();
    (0..grid.dim())
        .map(|a| partial(psi.data(), &grid, a))
        .collect()
}

pub fn complex_laplacian(psi: &ComplexField) -> Result<ComplexField> {
    let grid = *psi.grid();
    ComplexField::from_vec(grid, laplacian_raw(psi.data(), &grid)?)
}

/// Midpoint-rule integral: node sum times cell volume.
pub fn integrate(s: &ScalarField) -> f64 {
    s.data().iter().sum::<f64>() * s.grid().cell_volume()
}

/// `<a, b> = sum conj(a) b dV`.
pub fn inner_product(a: &ComplexField, b: &ComplexField) -> Result<Complex64> {
    same_grid(a.grid(), b.grid())?;
    let sum: Complex64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.grid().cell_volume())
}

/// Leading truncation error of a second-order stencil acting on a field of
/// size `magnitude` whose highest resolved wavenumber is `k_max`.
pub fn truncation_scale(magnitude: f64, k_max: f64, h: f64) -> f64 {
    magnitude * (k_max * h).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn periodic_line(n: usize) -> Grid {
        Grid::line(0.0, 2.0 * PI, n, Boundary::Periodic).unwrap()
    }

    fn periodic_cube(n: usize) -> Grid {
        Grid::cube(0.0, 2.0 * PI, n, Boundary::Periodic).unwrap()
    }

    fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
        a.sub(b).unwrap().max_abs()
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let g = Grid::cube(-1.0, 1.0, 6, Boundary::Decaying).unwrap();
        let s = ScalarField::constant(&g, 3.5);
        assert!(gradient(&s).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn gradient_exact_on_linear_field() {
        let g = Grid::line(-1.0, 1.0, 9, Boundary::Decaying).unwrap();
        let s = ScalarField::from_fn(&g, |p| p[0]);
        let gr = gradient(&s).unwrap();
        for v in gr.component_data(0) {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_of_sine() {
        let g = periodic_line(64);
        let s = ScalarField::from_fn(&g, |p| p[0].sin());
        let ex = ScalarField::from_fn(&g, |p| p[0].cos());
        assert!(max_diff(&gradient(&s).unwrap().component(0), &ex) < 5e-3);
    }

    #[test]
    fn divergence_examples() {
        let g = Grid::cube(-1.0, 1.0, 6, Boundary::Decaying).unwrap();
        let v = VectorField::from_fn(&g, |p| p);
        let d = divergence(&v).unwrap();
        assert!(d.data().iter().all(|x| (x - 3.0).abs() < 1e-12));
        let c = VectorField::from_fn(&g, |_| [1.0, -2.0, 0.5]);
        assert!(divergence(&c).unwrap().max_abs() < 1e-12);

        let gp = periodic_cube(64);
        let v = VectorField::from_fn(&gp, |p| [p[0].sin(), 0.0, 0.0]);
        let ex = ScalarField::from_fn(&gp, |p| p[0].cos());
        assert!(max_diff(&divergence(&v).unwrap(), &ex) < 5e-3);
    }

    #[test]
    fn curl_examples() {
        let g = Grid::cube(-1.0, 1.0, 6, Boundary::Decaying).unwrap();
        let v = VectorField::from_fn(&g, |p| [-p[1], p[0], 0.0]);
        let c = curl(&v).unwrap();
        for idx in 0..g.len() {
            let w = c.at(idx);
            assert!(w[0].abs() < 1e-12 && w[1].abs() < 1e-12 && (w[2] - 2.0).abs() < 1e-12);
        }

        let gp = periodic_cube(64);
        let v = VectorField::from_fn(&gp, |p| [0.0, p[0].sin(), 0.0]);
        let c = curl(&v).unwrap();
        let ex = ScalarField::from_fn(&gp, |p| p[0].cos());
        assert!(max_diff(&c.component(2), &ex) < 5e-3);
        assert!(c.component(0).max_abs() < 1e-12);

        let line = periodic_line(8);
        assert!(matches!(
            curl(&VectorField::zeros(&line)),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn laplacian_examples() {
        let g = Grid::line(-1.0, 1.0, 10, Boundary::Decaying).unwrap();
        let s = ScalarField::from_fn(&g, |p| p[0] * p[0]);
        assert!(laplacian(&s).unwrap().data().iter().all(|x| (x - 2.0).abs() < 1e-10));

        let gp = periodic_line(64);
        let s = ScalarField::from_fn(&gp, |p| p[0].sin());
        assert!(max_diff(&laplacian(&s).unwrap(), &s.scale(-1.0)) < 5e-3);
    }

    #[test]
    fn grid_too_small() {
        let g = Grid::line(0.0, 1.0, 3, Boundary::Decaying).unwrap();
        let s = ScalarField::zeros(&g);
        assert!(gradient(&s).is_ok());
        assert!(matches!(laplacian(&s), Err(Error::GridTooSmall { .. })));
        let g2 = Grid::line(0.0, 1.0, 2, Boundary::Periodic).unwrap();
        assert!(gradient(&ScalarField::zeros(&g2)).is_err());
    }

    #[test]
    fn integrate_examples() {
        let g = Grid::cube(0.0, 1.0, 5, Boundary::Decaying).unwrap();
        assert!((integrate(&ScalarField::constant(&g, 1.0)) - 1.0).abs() < 1e-12);
        let g = Grid::line(-8.0, 8.0, 256, Boundary::Decaying).unwrap();
        let s = ScalarField::from_fn(&g, |p| (-p[0] * p[0]).exp());
        assert!((integrate(&s) - PI.sqrt()).abs() < 1e-6);
        let gp = periodic_line(64);
        assert!(integrate(&ScalarField::from_fn(&gp, |p| p[0].sin())).abs() < 1e-12);
    }

    #[test]
    fn inner_product_orthogonality() {
        let g = periodic_line(64);
        let e1 = ComplexField::from_fn(&g, |p| Complex64::from_polar(1.0, p[0]));
        let e2 = ComplexField::from_fn(&g, |p| Complex64::from_polar(1.0, 2.0 * p[0]));
        assert!(inner_product(&e1, &e2).unwrap().norm() < 1e-12);
        let n = inner_product(&e1, &e1).unwrap();
        assert!((n.re - integrate(&e1.norm_sqr())).abs() < 1e-12 && n.im.abs() < 1e-15);
    }

    #[test]
    fn gradient_adjoint_is_transpose() {
        for boundary in [Boundary::Periodic, Boundary::Decaying] {
            let g = Grid::cube(0.0, 1.0, 7, boundary).unwrap();
            let s = ScalarField::from_fn(&g, |p| (3.0 * p[0] + p[1] * p[2]).sin());
            let w = VectorField::from_fn(&g, |p| [p[1].cos(), p[0] * p[2], (p[0] - p[2]).exp()]);
            let lhs: f64 = gradient(&s).unwrap().dot(&w).unwrap().data().iter().sum();
            let rhs: f64 = s.mul(&gradient_adjoint(&w).unwrap()).unwrap().data().iter().sum();
            assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn second_order_convergence() {
        let err = |n: usize| {
            let g = Grid::line(-3.0, 3.0, n, Boundary::Decaying).unwrap();
            let s = ScalarField::from_fn(&g, |p| (-p[0] * p[0]).exp() * (2.0 * p[0]).sin());
            let ex = ScalarField::from_fn(&g, |p| {
                let x = p[0];
                (-x * x).exp() * (2.0 * (2.0 * x).cos() - 2.0 * x * (2.0 * x).sin())
            });
            max_diff(&gradient(&s).unwrap().component(0), &ex)
        };
        let ratio = err(100) / err(200);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }
}
