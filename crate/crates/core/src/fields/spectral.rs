//! FFT helpers for periodic grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::grid::Grid;

/// In-place multidimensional DFT over the active axes of `grid`.
/// The inverse transform is normalized, so forward followed by inverse is
/// the identity.
pub fn fft(data: &mut [Complex64], grid: &Grid, direction: FftDirection) {
    let mut planner = FftPlanner::new();
    for axis in 0..grid.dim() {
        let n = grid.axis(axis).n;
        if n == 1 {
            continue;
        }
        let plan = planner.plan_fft(n, direction);
        let stride = grid.stride(axis);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for start in 0..grid.len() {
            if grid.unravel(start)[axis] != 0 {
                continue;
            }
            for (i, slot) in line.iter_mut().enumerate() {
                *slot = data[start + i * stride];
            }
            plan.process_with_scratch(&mut line, &mut scratch);
            for (i, v) in line.iter().enumerate() {
                data[start + i * stride] = *v;
            }
        }
    }
    if direction == FftDirection::Inverse {
        let scale = 1.0 / grid.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

pub fn forward_real(data: &[f64], grid: &Grid) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut out, grid, FftDirection::Forward);
    out
}

/// Inverse transform keeping only the real part.
pub fn inverse_real(mut spectrum: Vec<Complex64>, grid: &Grid) -> Vec<f64> {
    fft(&mut spectrum, grid, FftDirection::Inverse);
    spectrum.into_iter().map(|z| z.re).collect()
}

/// Per-node mode angles `theta_a = 2 pi m_a / n_a` for every active axis.
pub fn mode_angles(grid: &Grid, idx: usize) -> [f64; 3] {
    let ijk = grid.unravel(idx);
    let mut theta = [0.0; 3];
    for (a, t) in theta.iter_mut().enumerate().take(grid.dim()) {
        *t = 2.0 * PI * ijk[a] as f64 / grid.axis(a).n as f64;
    }
    theta
}

/// Symbol of the central first-difference operator divided by `i`:
/// `D e^{i theta j} = i s e^{i theta j}` with `s = sin(theta)/h`.
pub fn first_difference_symbol(grid: &Grid, idx: usize) -> [f64; 3] {
    let theta = mode_angles(grid, idx);
    let mut s = [0.0; 3];
    for a in 0..grid.dim() {
        s[a] = theta[a].sin() / grid.spacing(a);
    }
    s
}

/// Symbol of the compact three-point Laplacian (non-positive).
pub fn laplacian_symbol(grid: &Grid, idx: usize) -> f64 {
    let theta = mode_angles(grid, idx);
    (0..grid.dim())
        .map(|a| -(2.0 - 2.0 * theta[a].cos()) / grid.spacing(a).powi(2))
        .sum()
}
