//! Centered finite differences at cell centers.

use crate::grid::{Field, FieldKind};

/// Second-order gradient, one component per axis. Periodic grids wrap;
/// otherwise the first and last cells use one-sided second-order stencils.
pub fn gradient(f: &Field, periodic: bool) -> Vec<Field> {
    let grid = *f.grid();
    let n = grid.points_per_axis();
    let inv2h = 0.5 / grid.spacing();
    let v = f.values();
    (0..grid.dim())
        .map(|axis| {
            let stride = grid.stride(axis);
            let out = (0..grid.len())
                .map(|idx| {
                    let i = grid.multi_index(idx)[axis];
                    let at = |k: usize| v[idx - i * stride + k * stride];
                    if i > 0 && i < n - 1 {
                        (at(i + 1) - at(i - 1)) * inv2h
                    } else if periodic {
                        (at((i + 1) % n) - at((i + n - 1) % n)) * inv2h
                    } else if i == 0 {
                        (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h
                    } else {
                        (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv2h
                    }
                })
                .collect();
            Field::from_parts(grid, out, FieldKind::Generic)
        })
        .collect()
}
