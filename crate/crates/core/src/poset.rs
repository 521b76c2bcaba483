//! Signed face posets.
//!
//! Cells are addressed by their position in the source complex (a dense
//! index); the original ids are kept for reporting.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{validate, CellComplex, ComplexKind};
use crate::error::{GarlandError, Result};

/// A signed cover relation `p ⋖ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub p: usize,
    pub q: usize,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct FacePoset {
    kind: ComplexKind,
    ids: Vec<u64>,
    dims: Vec<usize>,
    facets: Vec<Vec<(usize, i8)>>,
    cofacets: Vec<Vec<(usize, i8)>>,
    index: HashMap<u64, usize>,
}

/// Builds the signed face poset of a validated complex.
pub fn face_poset(complex: &CellComplex) -> Result<FacePoset> {
    let report = validate(complex);
    if !report.ok {
        return Err(GarlandError::InvalidComplex(Box::new(report)));
    }
    FacePoset::from_complex_unchecked(complex)
}

impl FacePoset {
    /// Builds the poset without running the validator. Only dangling facet ids
    /// are rejected; signs follow the facet order whatever it is. Intended for
    /// inspecting broken complexes.
    pub fn from_complex_unchecked(complex: &CellComplex) -> Result<FacePoset> {
        let n = complex.cells.len();
        let index: HashMap<u64, usize> = complex
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id, i))
            .collect();
        let mut facets = Vec::with_capacity(n);
        let mut cofacets = vec![Vec::new(); n];
        for (q, cell) in complex.cells.iter().enumerate() {
            let mut fs = Vec::with_capacity(cell.facets.len());
            for (slot, f) in cell.facets.iter().enumerate() {
                let p = *index.get(f).ok_or_else(|| {
                    GarlandError::Parse(format!("dangling facet id {f} in cell {}", cell.id))
                })?;
                let sign = complex.kind.facet_sign(slot);
                fs.push((p, sign));
                cofacets[p].push((q, sign));
            }
            facets.push(fs);
        }
        Ok(FacePoset {
            kind: complex.kind,
            ids: complex.cells.iter().map(|c| c.id).collect(),
            dims: complex.cells.iter().map(|c| c.dim).collect(),
            facets,
            cofacets,
            index,
        })
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, cell: usize) -> u64 {
        self.ids[cell]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn dim(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.dims.iter().copied().max()
    }

    /// Facets of `cell` in listed order, with incidence signs.
    pub fn facets(&self, cell: usize) -> &[(usize, i8)] {
        &self.facets[cell]
    }

    /// Cells having `cell` as a facet, in source order, with incidence signs.
    pub fn cofacets(&self, cell: usize) -> &[(usize, i8)] {
        &self.cofacets[cell]
    }

    /// Incidence sign of `p` in `q`, or `None` when `p` is not a facet of `q`.
    pub fn sign(&self, p: usize, q: usize) -> Option<i8> {
        self.facets[q]
            .iter()
            .find(|(f, _)| *f == p)
            .map(|(_, s)| *s)
    }

    pub fn covers(&self) -> impl Iterator<Item = Cover> + '_ {
        self.facets
            .iter()
            .enumerate()
            .flat_map(|(q, fs)| fs.iter().map(move |&(p, sign)| Cover { p, q, sign }))
    }

    /// `P^k` by the covered-element count: simplicial cells covering `k + 1`
    /// elements (a vertex covers the empty face) and cubical cells covering
    /// `2k` elements.
    pub fn rank_cells(&self, k: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.rank_of(c) == Some(k))
            .collect()
    }

    /// Rank by covered count, `None` for cells in no rank class.
    pub fn rank_of(&self, cell: usize) -> Option<usize> {
        let mut distinct: Vec<usize> = self.facets[cell].iter().map(|(p, _)| *p).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let covered = distinct.len();
        let dim = self.dims[cell];
        let expected = match self.kind {
            ComplexKind::Simplicial => dim + 1,
            ComplexKind::Cubical => 2 * dim,
        };
        let covered = match self.kind {
            ComplexKind::Simplicial if dim == 0 => 1,
            _ => covered,
        };
        (covered == expected).then_some(dim)
    }

    /// All cells below or equal to `cell`.
    pub fn down_set(&self, cell: usize) -> Vec<usize> {
        let mut out = vec![cell];
        let mut i = 0;
        while i < out.len() {
            let c = out[i];
            for &(f, _) in &self.facets[c] {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
            i += 1;
        }
        out
    }

    /// Checks every corank-2 interval for exactly two middles with cancelling
    /// signs and returns the offending `(bottom, top)` pairs.
    pub fn boundary_squared_failures(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for top in 0..self.len() {
            let mut acc: Vec<(usize, i64, usize)> = Vec::new();
            for &(mid, s1) in &self.facets[top] {
                for &(low, s2) in &self.facets[mid] {
                    match acc.iter_mut().find(|(l, _, _)| *l == low) {
                        Some(e) => {
                            e.1 += (s1 * s2) as i64;
                            e.2 += 1;
                        }
                        None => acc.push((low, (s1 * s2) as i64, 1)),
                    }
                }
            }
            bad.extend(
                acc.into_iter()
                    .filter(|(_, s, n)| *s != 0 || *n != 2)
                    .map(|(l, _, _)| (l, top)),
            );
        }
        bad
    }
}
