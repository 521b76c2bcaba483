use super::from_simplices;
use crate::complex::{Cell, CellComplex, ComplexKind};
use crate::error::{GarlandError, Result};

fn check_size(m: usize, n: usize) -> Result<()> {
    if m < 3 || n < 3 {
        return Err(GarlandError::Parameter(format!(
            "torus needs at least 3 rows and 3 columns, got {m}x{n}"
        )));
    }
    Ok(())
}

/// `m × n` grid of squares on the torus.
///
/// Vertex `(i, j)` has id `i n + j`; then come the horizontal edges
/// `(i, j) → (i, j+1)`, the vertical edges `(i, j) → (i+1, j)` and the squares
/// with lower-left corner `(i, j)`, each block in the same order.
pub fn torus_cubical(m: usize, n: usize) -> Result<CellComplex> {
    check_size(m, n)?;
    let mn = (m * n) as u64;
    let at = |i: usize, j: usize| ((i % m) * n + (j % n)) as u64;
    let mut cells = Vec::with_capacity(4 * m * n);
    for i in 0..m {
        for j in 0..n {
            cells.push(Cell {
                id: at(i, j),
                dim: 0,
                facets: vec![],
            });
        }
    }
    for i in 0..m {
        for j in 0..n {
            cells.push(Cell {
                id: mn + at(i, j),
                dim: 1,
                facets: vec![at(i, j), at(i, j + 1)],
            });
        }
    }
    for i in 0..m {
        for j in 0..n {
            cells.push(Cell {
                id: 2 * mn + at(i, j),
                dim: 1,
                facets: vec![at(i, j), at(i + 1, j)],
            });
        }
    }
    let h = |i: usize, j: usize| mn + at(i, j);
    let v = |i: usize, j: usize| 2 * mn + at(i, j);
    for i in 0..m {
        for j in 0..n {
            cells.push(Cell {
                id: 3 * mn + at(i, j),
                dim: 2,
                facets: vec![v(i, j), v(i, j + 1), h(i, j), h(i + 1, j)],
            });
        }
    }
    Ok(CellComplex::new(ComplexKind::Cubical, cells))
}

/// The grid torus with every square split along the diagonal from `(i, j)`
/// to `(i+1, j+1)`.
pub fn torus_simplicial(m: usize, n: usize) -> Result<CellComplex> {
    check_size(m, n)?;
    let at = |i: usize, j: usize| (i % m) * n + (j % n);
    let mut triangles = Vec::with_capacity(2 * m * n);
    for i in 0..m {
        for j in 0..n {
            triangles.push(vec![at(i, j), at(i, j + 1), at(i + 1, j + 1)]);
            triangles.push(vec![at(i, j), at(i + 1, j), at(i + 1, j + 1)]);
        }
    }
    Ok(from_simplices(&triangles))
}
