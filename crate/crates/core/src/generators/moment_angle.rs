use std::collections::{BTreeSet, HashMap};

use super::{from_cube_faces, Coord, CubeFace};
use crate::complex::{CellComplex, ComplexKind};
use crate::error::{GarlandError, Result};

/// Vertex sets of the cells of a simplicial complex, as positions in the
/// list of its 0-cells. Fails unless every `d`-cell has `d + 1` vertices and
/// distinct cells have distinct vertex sets.
pub fn vertex_sets(k: &CellComplex) -> Result<(Vec<u64>, Vec<BTreeSet<usize>>)> {
    if k.kind != ComplexKind::Simplicial {
        return Err(GarlandError::NotVertexComplex(
            "complex is not simplicial".into(),
        ));
    }
    let vertices: Vec<u64> = k
        .cells
        .iter()
        .filter(|c| c.dim == 0)
        .map(|c| c.id)
        .collect();
    let by_id: HashMap<u64, usize> = k.cells.iter().enumerate().map(|(i, c)| (c.id, i)).collect();
    let vpos: HashMap<u64, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut memo: Vec<Option<BTreeSet<usize>>> = vec![None; k.cells.len()];
    let mut order: Vec<usize> = (0..k.cells.len()).collect();
    order.sort_by_key(|&i| k.cells[i].dim);
    for i in order {
        let cell = &k.cells[i];
        let set = if cell.dim == 0 {
            BTreeSet::from([vpos[&cell.id]])
        } else {
            let mut s = BTreeSet::new();
            for f in &cell.facets {
                let j = *by_id
                    .get(f)
                    .ok_or_else(|| GarlandError::NotVertexComplex(format!("dangling facet {f}")))?;
                let fs = memo[j].as_ref().ok_or_else(|| {
                    GarlandError::NotVertexComplex(format!(
                        "facet {f} of cell {} is not lower-dimensional",
                        cell.id
                    ))
                })?;
                s.extend(fs);
            }
            s
        };
        if set.len() != cell.dim + 1 {
            return Err(GarlandError::NotVertexComplex(format!(
                "cell {} of dimension {} spans {} vertices",
                cell.id,
                cell.dim,
                set.len()
            )));
        }
        memo[i] = Some(set);
    }
    let sets: Vec<BTreeSet<usize>> = memo
        .into_iter()
        .map(|s| s.expect("all cells visited"))
        .collect();
    let distinct: BTreeSet<&BTreeSet<usize>> = sets.iter().collect();
    if distinct.len() != sets.len() {
        return Err(GarlandError::NotVertexComplex(
            "two cells share a vertex set".into(),
        ));
    }
    Ok((vertices, sets))
}

/// Moment-angle complex `X_K ⊂ [0,1]^V`: the cells `[0,1]^σ × {0}^ω × {1}^ν`
/// for `σ ∈ K ∪ {∅}` and `ν ⊆ V ∖ σ`, coordinates in vertex-list order.
pub fn moment_angle(k: &CellComplex) -> Result<CellComplex> {
    let (vertices, sets) = vertex_sets(k)?;
    let n = vertices.len();
    if n > 20 {
        return Err(GarlandError::Parameter(format!(
            "{n} vertices is too many for a moment-angle complex"
        )));
    }
    let mut maximal: Vec<CubeFace> = Vec::new();
    let all_sigma = std::iter::once(BTreeSet::new()).chain(sets);
    for sigma in all_sigma {
        let rest: Vec<usize> = (0..n).filter(|v| !sigma.contains(v)).collect();
        for mask in 0u64..(1u64 << rest.len()) {
            let mut face = vec![Coord::Zero; n];
            for &v in &sigma {
                face[v] = Coord::Free;
            }
            for (i, &v) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    face[v] = Coord::One;
                }
            }
            maximal.push(face);
        }
    }
    Ok(from_cube_faces(&maximal))
}
