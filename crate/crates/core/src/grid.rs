//! Uniform tensor grids on `[-L, L]^n` and the fields sampled on them.
//!
//! Values are stored row-major: in 2-D the flat index is `i0 * N + i1`, with
//! axis 0 the slow index. Cell centers sit at `-L + (i + 1/2) h`, so an even
//! `N` never places a node at the origin.

use crate::error::{Error, Result};

/// Uniform grid with `N` cells per axis on the box `[-L, L]^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    half_width: f64,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half width must be positive, got {half_width}")));
        }
        if points_per_axis < 8 || points_per_axis % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least 8, got {points_per_axis}"
            )));
        }
        Ok(Self { dim, half_width, points_per_axis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Cell width `h = 2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// `h^n`, the quadrature weight of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of cells, `N^n`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell-center coordinate along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    /// Per-axis indices of a flat index (unused axes are 0).
    pub fn multi_index(&self, idx: usize) -> [usize; 2] {
        match self.dim {
            1 => [idx, 0],
            _ => [idx / self.points_per_axis, idx % self.points_per_axis],
        }
    }

    pub fn flat_index(&self, multi: [usize; 2]) -> usize {
        match self.dim {
            1 => multi[0],
            _ => multi[0] * self.points_per_axis + multi[1],
        }
    }

    /// Cell-center position (unused axes are 0).
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let m = self.multi_index(idx);
        match self.dim {
            1 => [self.coord(m[0]), 0.0],
            _ => [self.coord(m[0]), self.coord(m[1])],
        }
    }

    pub fn radius(&self, idx: usize) -> f64 {
        let p = self.point(idx);
        (p[0] * p[0] + p[1] * p[1]).sqrt()
    }

    /// Flat-index stride of one step along `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        if self.dim == 2 && axis == 0 {
            self.points_per_axis
        } else {
            1
        }
    }

    /// Same grid refined by a factor of two (half the spacing).
    pub fn refined(&self) -> Self {
        Self { points_per_axis: 2 * self.points_per_axis, ..*self }
    }

    pub(crate) fn same_as(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.points_per_axis == other.points_per_axis
            && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }
}

/// What a field represents; densities are checked for nonnegativity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Density,
    Pressure,
    Generic,
}

impl FieldKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldKind::Density => "density",
            FieldKind::Pressure => "pressure",
            FieldKind::Generic => "generic",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "density" => Some(FieldKind::Density),
            "pressure" => Some(FieldKind::Pressure),
            "generic" => Some(FieldKind::Generic),
            _ => None,
        }
    }
}

/// Grid function with quadrature-based accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    kind: FieldKind,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>, kind: FieldKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!("non-finite value at index {bad}")));
        }
        if kind == FieldKind::Density {
            if let Some(neg) = values.iter().position(|&v| v < 0.0) {
                return Err(Error::InvalidField(format!(
                    "density is negative ({}) at index {neg}",
                    values[neg]
                )));
            }
        }
        Ok(Self { grid, values, kind })
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>, kind: FieldKind) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values, kind }
    }

    pub fn zeros(grid: Grid, kind: FieldKind) -> Self {
        Self { grid, values: vec![0.0; grid.len()], kind }
    }

    /// Samples `f` at the cell centers.
    pub fn from_fn(grid: Grid, kind: FieldKind, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let dim = grid.dim();
        let values = (0..grid.len()).map(|i| f(&grid.point(i)[..dim])).collect();
        Self::new(grid, values, kind)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: FieldKind) -> Result<Self> {
        if kind == FieldKind::Density && self.values.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidField("density must be nonnegative".into()));
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `h^n Σ values`.
    pub fn mass(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().sum::<f64>()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete `L^p` norm `(h^n Σ |v|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v.abs().powf(p)).sum();
        (self.grid.cell_volume() * sum).powf(1.0 / p)
    }

    /// `h^n Σ f g`.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let dot: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(self.grid.cell_volume() * dot)
    }

    /// `h^n Σ |y|^2 v`.
    pub fn second_moment(&self) -> f64 {
        let g = &self.grid;
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let r = g.radius(i);
                r * r * v
            })
            .sum();
        g.cell_volume() * sum
    }

    /// `h^n Σ |f - g|`.
    pub fn l1_distance(&self, other: &Field) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let sum: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).sum();
        Ok(self.grid.cell_volume() * sum)
    }

    pub fn linf_distance(&self, other: &Field) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.grid.same_as(grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(3, 1.0, 16).is_err());
        assert!(Grid::new(1, 0.0, 16).is_err());
        assert!(Grid::new(1, 1.0, 15).is_err());
        assert!(Grid::new(1, 1.0, 6).is_err());
        assert!(Grid::new(2, 1.0, 8).is_ok());
    }

    #[test]
    fn coordinates_are_cell_centers() {
        let g = Grid::new(1, 1.0, 8).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.coord(0), -0.875);
        assert_eq!(g.coord(7), 0.875);
        let g2 = Grid::new(2, 2.0, 8).unwrap();
        assert_eq!(g2.len(), 64);
        assert_eq!(g2.multi_index(9), [1, 1]);
        assert_eq!(g2.flat_index([3, 5]), 29);
        assert_eq!(g2.stride(0), 8);
        assert_eq!(g2.stride(1), 1);
    }

    #[test]
    fn density_must_be_nonnegative() {
        let g = Grid::new(1, 1.0, 8).unwrap();
        let mut v = vec![1.0; 8];
        v[3] = -1e-3;
        assert!(Field::new(g, v.clone(), FieldKind::Density).is_err());
        assert!(Field::new(g, v, FieldKind::Generic).is_ok());
        assert!(Field::new(g, vec![1.0; 7], FieldKind::Generic).is_err());
    }

    #[test]
    fn mass_and_norms() {
        let g = Grid::new(1, 1.0, 8).unwrap();
        let f = Field::from_fn(g, FieldKind::Density, |_| 2.0).unwrap();
        assert!((f.mass() - 4.0).abs() < 1e-14);
        assert!((f.lp_norm(2.0) - (8.0f64).sqrt()).abs() < 1e-14);
        assert_eq!(f.linf(), 2.0);
    }
}
