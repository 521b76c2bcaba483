use super::{from_cube_faces, from_simplices, Coord};
use crate::complex::CellComplex;
use crate::error::{GarlandError, Result};

/// The cycle `C_n` as a simplicial 1-complex.
pub fn cycle(n: usize) -> Result<CellComplex> {
    if n < 3 {
        return Err(GarlandError::Parameter(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Ok(from_simplices(&edges))
}

/// The standard `d`-simplex with all faces.
pub fn simplex(d: usize) -> CellComplex {
    from_simplices(&[(0..=d).collect()])
}

/// The standard `d`-cube with all faces.
pub fn cube(d: usize) -> CellComplex {
    from_cube_faces(&[vec![Coord::Free; d]])
}

/// The 1-skeleton `Q_r` of the `r`-cube as a cubical complex.
pub fn cube_skeleton(r: usize) -> Result<CellComplex> {
    if r == 0 {
        return Err(GarlandError::Parameter("cube skeleton needs r >= 1".into()));
    }
    let mut edges = Vec::new();
    for v in 0..(1u64 << r) {
        for axis in 0..r {
            if v >> axis & 1 == 0 {
                let face = (0..r)
                    .map(|i| match (i == axis, v >> i & 1) {
                        (true, _) => Coord::Free,
                        (false, 0) => Coord::Zero,
                        _ => Coord::One,
                    })
                    .collect();
                edges.push(face);
            }
        }
    }
    Ok(from_cube_faces(&edges))
}

/// Boundary of the `n`-dimensional cross-polytope: vertices `±e_i` (ids
/// `2i` and `2i+1`), simplices choosing one sign per axis.
pub fn cross_polytope(n: usize) -> Result<CellComplex> {
    if n == 0 {
        return Err(GarlandError::Parameter(
            "cross-polytope needs n >= 1".into(),
        ));
    }
    let facets: Vec<Vec<usize>> = (0..(1usize << n))
        .map(|signs| (0..n).map(|i| 2 * i + (signs >> i & 1)).collect())
        .collect();
    Ok(from_simplices(&facets))
}

/// Library complexes by name: `cycle`, `cube-skeleton`, `cross-polytope`,
/// `simplex`, `cube`.
pub fn small_library(name: &str, param: usize) -> Result<CellComplex> {
    match name {
        "cycle" => cycle(param),
        "cube-skeleton" => cube_skeleton(param),
        "cross-polytope" => cross_polytope(param),
        "simplex" => Ok(simplex(param)),
        "cube" => Ok(cube(param)),
        _ => Err(GarlandError::Parameter(format!(
            "unknown library complex '{name}'"
        ))),
    }
}
