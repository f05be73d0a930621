use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Fields wrap around; stencils use neighbours across the seam.
    Periodic,
    /// Fields are assumed negligible at the box edges; stencils switch to
    /// one-sided second-order formulas on the first and last node.
    Decaying,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }
}

/// Uniform Cartesian grid in one or three dimensions.
///
/// Nodes sit at `lo + i*h` with `h = (hi - lo)/n`, `i = 0..n`, so `hi` itself
/// is never a node. Storage is row-major with x slowest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    axes: [Axis; 3],
    boundary: Boundary,
}

const DUMMY_AXIS: Axis = Axis {
    lo: 0.0,
    hi: 1.0,
    n: 1,
};

impl Grid {
    pub fn new(dim: usize, axes: &[Axis], boundary: Boundary) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 3, got {dim}")));
        }
        if axes.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "expected {dim} axes, got {}",
                axes.len()
            )));
        }
        let mut all = [DUMMY_AXIS; 3];
        for (a, axis) in axes.iter().enumerate() {
            if axis.n == 0 {
                return Err(Error::InvalidGrid(format!("axis {a} has no points")));
            }
            if !(axis.hi > axis.lo) || !axis.lo.is_finite() || !axis.hi.is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "axis {a} extent [{}, {}] is empty or not finite",
                    axis.lo, axis.hi
                )));
            }
            all[a] = *axis;
        }
        Ok(Self {
            dim,
            axes: all,
            boundary,
        })
    }

    pub fn line(lo: f64, hi: f64, n: usize, boundary: Boundary) -> Result<Self> {
        Self::new(1, &[Axis { lo, hi, n }], boundary)
    }

    /// Cube `[lo, hi)^3` with `n` points per axis.
    pub fn cube(lo: f64, hi: f64, n: usize, boundary: Boundary) -> Result<Self> {
        let axis = Axis { lo, hi, n };
        Self::new(3, &[axis; 3], boundary)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn axis(&self, a: usize) -> &Axis {
        &self.axes[a]
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes[..self.dim]
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.axes[0].n, self.axes[1].n, self.axes[2].n]
    }

    pub fn spacing(&self, a: usize) -> f64 {
        self.axes[a].spacing()
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes().iter().map(Axis::spacing).fold(0.0, f64::max)
    }

    pub fn min_spacing(&self) -> f64 {
        self.axes()
            .iter()
            .map(Axis::spacing)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.axes[0].n * self.axes[1].n * self.axes[2].n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes().iter().map(Axis::spacing).product()
    }

    /// Distance in the flat array between neighbours along axis `a`.
    pub fn stride(&self, a: usize) -> usize {
        match a {
            0 => self.axes[1].n * self.axes[2].n,
            1 => self.axes[2].n,
            _ => 1,
        }
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.axes[1].n + j) * self.axes[2].n + k
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let nz = self.axes[2].n;
        let ny = self.axes[1].n;
        [idx / (ny * nz), (idx / nz) % ny, idx % nz]
    }

    /// Physical position of a node; unused coordinates are zero in 1D.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let ijk = self.unravel(idx);
        let mut p = [0.0; 3];
        for (a, slot) in p.iter_mut().enumerate().take(self.dim) {
            *slot = self.axes[a].coord(ijk[a]);
        }
        p
    }

    pub fn positions(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        (0..self.len()).map(|idx| self.position(idx))
    }

    pub fn center(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for (a, slot) in c.iter_mut().enumerate().take(self.dim) {
            let axis = &self.axes[a];
            *slot = 0.5 * (axis.lo + axis.hi - axis.spacing());
        }
        c
    }

    /// True when the node touches the box edge along any active axis.
    pub fn is_boundary(&self, idx: usize) -> bool {
        let ijk = self.unravel(idx);
        (0..self.dim).any(|a| ijk[a] == 0 || ijk[a] + 1 == self.axes[a].n)
    }

    pub fn require_points(&self, required: usize) -> Result<()> {
        for (a, axis) in self.axes().iter().enumerate() {
            if axis.n < required {
                return Err(Error::GridTooSmall {
                    axis: a,
                    points: axis.n,
                    required,
                });
            }
        }
        Ok(())
    }

    pub fn require_dim(&self, required: usize) -> Result<()> {
        if self.dim != required {
            return Err(Error::WrongDimension {
                required,
                found: self.dim,
            });
        }
        Ok(())
    }

    /// Same grid with every axis refined by `factor` (h divided by `factor`).
    pub fn refined(&self, factor: usize) -> Self {
        let mut out = *self;
        for axis in out.axes.iter_mut().take(self.dim) {
            axis.n *= factor;
        }
        out
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Self {
        Self { boundary, ..*self }
    }
}

/// Serializable grid description with the same extent on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        let axis = Axis {
            lo: self.lo,
            hi: self.hi,
            n: self.n,
        };
        Grid::new(self.dim, &vec![axis; self.dim.min(3)], self.boundary)
    }
}

impl From<&Grid> for GridSpec {
    fn from(g: &Grid) -> Self {
        let a = g.axis(0);
        Self {
            dim: g.dim(),
            lo: a.lo,
            hi: a.hi,
            n: a.n,
            boundary: g.boundary(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let g = Grid::cube(-2.0, 2.0, 5, Boundary::Decaying).unwrap();
        assert_eq!(GridSpec::from(&g).build().unwrap(), g);
        let bad = GridSpec {
            dim: 2,
            lo: 0.0,
            hi: 1.0,
            n: 4,
            boundary: Boundary::Periodic,
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn spacing_and_positions() {
        let g = Grid::line(-1.0, 1.0, 4, Boundary::Periodic).unwrap();
        assert_eq!(g.spacing(0), 0.5);
        let xs: Vec<f64> = g.positions().map(|p| p[0]).collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5]);
    }

    #[test]
    fn row_major_round_trip() {
        let g = Grid::new(
            3,
            &[
                Axis { lo: 0.0, hi: 1.0, n: 3 },
                Axis { lo: 0.0, hi: 1.0, n: 4 },
                Axis { lo: 0.0, hi: 1.0, n: 5 },
            ],
            Boundary::Decaying,
        )
        .unwrap();
        for idx in 0..g.len() {
            let [i, j, k] = g.unravel(idx);
            assert_eq!(g.index(i, j, k), idx);
        }
        assert_eq!(g.stride(0), 20);
        assert_eq!(g.stride(2), 1);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::line(1.0, 1.0, 4, Boundary::Periodic).is_err());
        assert!(Grid::line(0.0, 1.0, 0, Boundary::Periodic).is_err());
        assert!(Grid::new(2, &[DUMMY_AXIS; 2], Boundary::Periodic).is_err());
    }
}
