use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Real samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    data: Vec<f64>,
}

/// Vector samples on a grid. In 1D only the x-component is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    comps: Vec<Vec<f64>>,
}

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    data: Vec<Complex64>,
}

pub(crate) fn same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, v| m.max(v.abs()))
}

impl ScalarField {
    pub fn from_vec(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} nodes",
                data.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, data })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let data = grid.positions().map(f).collect();
        Self { grid: *grid, data }
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self {
            grid: *grid,
            data: vec![value; grid.len()],
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self.data.iter().copied())
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Max-norm over nodes that are not on the box edge.
    pub fn max_abs_interior(&self) -> f64 {
        max_abs(
            self.data
                .iter()
                .enumerate()
                .filter(|(idx, _)| !self.grid.is_boundary(*idx))
                .map(|(_, v)| *v),
        )
    }

    pub fn scaled_vector(&self, v: &VectorField) -> Result<VectorField> {
        same_grid(&self.grid, v.grid())?;
        let comps = v
            .comps
            .iter()
            .map(|c| c.iter().zip(&self.data).map(|(a, s)| a * s).collect())
            .collect();
        Ok(VectorField {
            grid: self.grid,
            comps,
        })
    }
}

impl VectorField {
    pub fn from_components(grid: Grid, comps: Vec<Vec<f64>>) -> Result<Self> {
        if comps.len() != grid.dim() {
            return Err(Error::InvalidGrid(format!(
                "{} components for a {}D grid",
                comps.len(),
                grid.dim()
            )));
        }
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::InvalidGrid("component length mismatch".into()));
        }
        Ok(Self { grid, comps })
    }

    pub fn from_scalars(comps: &[ScalarField]) -> Result<Self> {
        let grid = *comps
            .first()
            .ok_or_else(|| Error::InvalidGrid("no components".into()))?
            .grid();
        for c in comps {
            same_grid(&grid, c.grid())?;
        }
        Self::from_components(grid, comps.iter().map(|c| c.data.clone()).collect())
    }

    /// Samples `f`; components beyond the grid dimension are dropped.
    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut comps = vec![Vec::with_capacity(grid.len()); grid.dim()];
        for p in grid.positions() {
            let v = f(p);
            for (a, c) in comps.iter_mut().enumerate() {
                c.push(v[a]);
            }
        }
        Self { grid: *grid, comps }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: *grid,
            comps: vec![vec![0.0; grid.len()]; grid.dim()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, a: usize) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: self.comps[a].clone(),
        }
    }

    pub fn component_data(&self, a: usize) -> &[f64] {
        &self.comps[a]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    /// Node value padded with zeros to three components.
    pub fn at(&self, idx: usize) -> [f64; 3] {
        let mut v = [0.0; 3];
        for (a, c) in self.comps.iter().enumerate() {
            v[a] = c[idx];
        }
        v
    }

    pub fn map_nodes(&self, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(&self.grid);
        for idx in 0..self.grid.len() {
            let v = f(self.at(idx));
            for (a, c) in out.comps.iter_mut().enumerate() {
                c[idx] = v[a];
            }
        }
        out
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Ok(Self {
            grid: self.grid,
            comps,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            comps: self
                .comps
                .iter()
                .map(|c| c.iter().map(|v| s * v).collect())
                .collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> Result<ScalarField> {
        same_grid(&self.grid, &other.grid)?;
        let mut data = vec![0.0; self.grid.len()];
        for (a, b) in self.comps.iter().zip(&other.comps) {
            for ((d, x), y) in data.iter_mut().zip(a).zip(b) {
                *d += x * y;
            }
        }
        Ok(ScalarField {
            grid: self.grid,
            data,
        })
    }

    pub fn norm_sq(&self) -> ScalarField {
        self.dot(self).expect("same grid")
    }

    /// Node-wise cross product; identically zero in 1D.
    pub fn cross(&self, other: &Self) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        if self.grid.dim() == 1 {
            return Ok(Self::zeros(&self.grid));
        }
        let mut out = Self::zeros(&self.grid);
        for idx in 0..self.grid.len() {
            let a = self.at(idx);
            let b = other.at(idx);
            out.comps[0][idx] = a[1] * b[2] - a[2] * b[1];
            out.comps[1][idx] = a[2] * b[0] - a[0] * b[2];
            out.comps[2][idx] = a[0] * b[1] - a[1] * b[0];
        }
        Ok(out)
    }

    /// Largest node-wise Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        self.norm_sq().data.iter().fold(0.0_f64, |m, v| m.max(*v)).sqrt()
    }

    pub fn max_norm_interior(&self) -> f64 {
        self.norm_sq().map(f64::sqrt).max_abs_interior()
    }

    pub fn mean(&self) -> [f64; 3] {
        let mut m = [0.0; 3];
        for (a, c) in self.comps.iter().enumerate() {
            m[a] = c.iter().sum::<f64>() / c.len() as f64;
        }
        m
    }
}

impl ComplexField {
    pub fn from_vec(grid: Grid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} nodes",
                data.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, data })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        Self {
            grid: *grid,
            data: grid.positions().map(f).collect(),
        }
    }

    pub fn from_parts(re: &ScalarField, im: &ScalarField) -> Result<Self> {
        same_grid(re.grid(), im.grid())?;
        Ok(Self {
            grid: re.grid,
            data: re
                .data
                .iter()
                .zip(&im.data)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect(),
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: *grid,
            data: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn re(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: self.data.iter().map(|z| z.re).collect(),
        }
    }

    pub fn im(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: self.data.iter().map(|z| z.im).collect(),
        }
    }

    pub fn abs(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: self.data.iter().map(|z| z.norm()).collect(),
        }
    }

    pub fn norm_sqr(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: self.data.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| s * z)
    }

    pub fn mul_real(&self, s: &ScalarField) -> Result<Self> {
        same_grid(&self.grid, s.grid())?;
        Ok(Self {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&s.data)
                .map(|(z, r)| z * r)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self.data.iter().map(|z| z.norm()))
    }

    pub fn max_abs_interior(&self) -> f64 {
        self.abs().max_abs_interior()
    }
}
