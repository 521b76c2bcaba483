//! Deterministic constructions and seeded random models.

mod library;
mod moment_angle;
mod random;
mod torus;

use std::collections::{BTreeSet, HashMap};

use crate::complex::{Cell, CellComplex, ComplexKind};

pub use library::{cross_polytope, cube, cube_skeleton, cycle, simplex, small_library};
pub use moment_angle::{moment_angle, vertex_sets};
pub use random::{
    opposite_facets_identified, random_complex, random_cubical, random_simplicial, Model,
    RandomModelParams, Sample, DEFAULT_REJECTION_CAP,
};
pub use torus::{torus_cubical, torus_simplicial};

/// Simplicial complex generated by the given simplices (vertex lists), with
/// all faces. Cells are numbered by dimension, then lexicographically by
/// sorted vertex list; vertex `v` gets id `v` when the vertices are `0..n`.
pub fn from_simplices(simplices: &[Vec<usize>]) -> CellComplex {
    let mut faces: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        let n = s.len();
        for mask in 1u64..(1u64 << n) {
            let face: Vec<usize> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| s[i])
                .collect();
            faces.insert((face.len() - 1, face));
        }
    }
    let ids: HashMap<&Vec<usize>, u64> = faces
        .iter()
        .enumerate()
        .map(|(i, (_, f))| (f, i as u64))
        .collect();
    let cells = faces
        .iter()
        .map(|(dim, f)| Cell {
            id: ids[f],
            dim: *dim,
            facets: if *dim == 0 {
                Vec::new()
            } else {
                (0..f.len())
                    .map(|i| {
                        let mut g = f.clone();
                        g.remove(i);
                        ids[&g]
                    })
                    .collect()
            },
        })
        .collect();
    CellComplex::new(ComplexKind::Simplicial, cells)
}

/// A face of the standard cube `[0,1]^n`: per coordinate `0`, `1` or free.
pub type CubeFace = Vec<Coord>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Zero,
    One,
    Free,
}

/// Facets of a cube face: per free axis in order, side 0 then side 1.
pub fn cube_face_facets(face: &[Coord]) -> Vec<CubeFace> {
    let mut out = Vec::new();
    for (i, c) in face.iter().enumerate() {
        if *c == Coord::Free {
            for side in [Coord::Zero, Coord::One] {
                let mut f = face.to_vec();
                f[i] = side;
                out.push(f);
            }
        }
    }
    out
}

/// Cubical subcomplex of `[0,1]^n` generated by the given faces, with all
/// their faces. Cells are numbered by dimension, then lexicographically.
pub fn from_cube_faces(generators: &[CubeFace]) -> CellComplex {
    let mut faces: BTreeSet<(usize, CubeFace)> = BTreeSet::new();
    let mut stack: Vec<CubeFace> = generators.to_vec();
    while let Some(f) = stack.pop() {
        let dim = f.iter().filter(|&&c| c == Coord::Free).count();
        if faces.insert((dim, f.clone())) {
            stack.extend(cube_face_facets(&f));
        }
    }
    let ids: HashMap<&CubeFace, u64> = faces
        .iter()
        .enumerate()
        .map(|(i, (_, f))| (f, i as u64))
        .collect();
    let cells = faces
        .iter()
        .map(|(dim, f)| Cell {
            id: ids[f],
            dim: *dim,
            facets: cube_face_facets(f).iter().map(|g| ids[g]).collect(),
        })
        .collect();
    CellComplex::new(ComplexKind::Cubical, cells)
}
