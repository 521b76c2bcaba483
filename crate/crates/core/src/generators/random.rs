//! Random regular complexes glued from copies of a simplex or cube.
//!
//! Every facet direction gets an independent uniform bijection from the
//! top cells to `[h] × [d]` (Fisher–Yates on the seeded stream, one
//! permutation per direction in direction order); facets landing in the same
//! `[h]` class are identified by the canonical frame-preserving map.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CellComplex, ComplexKind};
use crate::error::{GarlandError, Result};
use crate::rng::SeededRng;
use crate::unionfind::UnionFind;

/// Default cap on conditioning attempts for `zbox`.
pub const DEFAULT_REJECTION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ydelta,
    Ybox,
    Zbox,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Ydelta => "ydelta",
            Model::Ybox => "ybox",
            Model::Zbox => "zbox",
        }
    }

    pub fn kind(self) -> ComplexKind {
        match self {
            Model::Ydelta => ComplexKind::Simplicial,
            Model::Ybox | Model::Zbox => ComplexKind::Cubical,
        }
    }

    /// Dimension of the sampled complexes.
    pub fn dim(self, k: usize) -> usize {
        match self {
            Model::Ydelta => k - 1,
            Model::Ybox | Model::Zbox => k,
        }
    }
}

impl std::str::FromStr for Model {
    type Err = GarlandError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ydelta" => Ok(Model::Ydelta),
            "ybox" => Ok(Model::Ybox),
            "zbox" => Ok(Model::Zbox),
            _ => Err(GarlandError::Parameter(format!("unknown model '{s}'"))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomModelParams {
    pub model: Model,
    pub h: usize,
    pub d: usize,
    pub k: usize,
    pub seed: u64,
}

impl RandomModelParams {
    pub fn check(&self) -> Result<()> {
        let min_k = if self.model == Model::Ydelta { 2 } else { 1 };
        if self.h == 0 || self.d == 0 || self.k < min_k {
            return Err(GarlandError::Parameter(format!(
                "{} needs h, d >= 1 and k >= {min_k}",
                self.model
            )));
        }
        if self.k > 12 {
            return Err(GarlandError::Parameter(format!(
                "k = {} is too large",
                self.k
            )));
        }
        Ok(())
    }

    /// Number of top cells: `hd`, or `2hd` for `zbox`.
    pub fn cell_count(&self) -> usize {
        match self.model {
            Model::Zbox => 2 * self.h * self.d,
            _ => self.h * self.d,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub complex: CellComplex,
    /// Draws of the gluing data, including the accepted one.
    pub attempts: u64,
}

/// Class in `[h]` of every top cell, from one uniform bijection onto
/// `[h] × [d]`.
fn draw_classes(rng: &mut SeededRng, cells: usize, d: usize) -> Vec<usize> {
    rng.permutation(cells).into_iter().map(|x| x / d).collect()
}

/// Turns a union-find over `(cell, face type)` elements into a complex.
/// Classes are numbered by dimension, then by their smallest element.
fn assemble(
    kind: ComplexKind,
    types: usize,
    cells: usize,
    uf: &mut UnionFind,
    dim_of: impl Fn(usize) -> Option<usize>,
    facets_of: impl Fn(usize) -> Vec<usize>,
) -> CellComplex {
    let mut first: HashMap<usize, usize> = HashMap::new();
    for f in 0..cells {
        for t in 0..types {
            if dim_of(t).is_none() {
                continue;
            }
            let e = f * types + t;
            first.entry(uf.find(e)).or_insert(e);
        }
    }
    let mut reps: Vec<(usize, usize)> = first
        .values()
        .map(|&e| (dim_of(e % types).expect("typed element"), e))
        .collect();
    reps.sort_unstable();
    let id_of_root: HashMap<usize, u64> = reps
        .iter()
        .enumerate()
        .map(|(i, &(_, e))| (uf.find(e), i as u64))
        .collect();
    let out = reps
        .iter()
        .enumerate()
        .map(|(i, &(dim, e))| {
            let (f, t) = (e / types, e % types);
            Cell {
                id: i as u64,
                dim,
                facets: facets_of(t)
                    .into_iter()
                    .map(|s| id_of_root[&uf.find(f * types + s)])
                    .collect(),
            }
        })
        .collect();
    CellComplex::new(kind, out)
}

/// `Y^Δ_{h,d,k}`: `hd` copies of the `(k-1)`-simplex.
///
/// A face of the simplex on vertices `[k]` is named by the set `U` of
/// vertices it omits; `(F, U) ~ (F', U)` when some `K ∈ U` puts `F` and `F'`
/// in the same class.
pub fn random_simplicial(p: &RandomModelParams) -> Result<Sample> {
    p.check()?;
    if p.model != Model::Ydelta {
        return Err(GarlandError::Parameter(format!(
            "{} is not a simplicial model",
            p.model
        )));
    }
    let (k, cells) = (p.k, p.cell_count());
    let types = 1usize << k;
    let mut rng = SeededRng::new(p.seed);
    let classes: Vec<Vec<usize>> = (0..k).map(|_| draw_classes(&mut rng, cells, p.d)).collect();
    let mut uf = UnionFind::new(cells * types);
    for (axis, class) in classes.iter().enumerate() {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); p.h];
        for (f, &c) in class.iter().enumerate() {
            members[c].push(f);
        }
        for u in (0..types - 1).filter(|u| u >> axis & 1 == 1) {
            for m in &members {
                for w in m.windows(2) {
                    uf.union(w[0] * types + u, w[1] * types + u);
                }
            }
        }
    }
    let dim_of = |u: usize| (u != types - 1).then(|| k - 1 - u.count_ones() as usize);
    let facets_of = |u: usize| -> Vec<usize> {
        if u.count_ones() as usize == k - 1 {
            return Vec::new();
        }
        (0..k)
            .filter(|v| u >> v & 1 == 0)
            .map(|v| u | 1 << v)
            .collect()
    };
    let complex = assemble(
        ComplexKind::Simplicial,
        types,
        cells,
        &mut uf,
        dim_of,
        facets_of,
    );
    Ok(Sample {
        complex,
        attempts: 1,
    })
}

const ZERO: usize = 0;
const ONE: usize = 1;
const FREE: usize = 2;

fn digit(t: usize, axis: usize) -> usize {
    t / 3usize.pow(axis as u32) % 3
}

fn with_digit(t: usize, axis: usize, v: usize) -> usize {
    let w = 3usize.pow(axis as u32);
    t - digit(t, axis) * w + v * w
}

/// Whether some top cube lists the same cell as both facets of one axis.
pub fn opposite_facets_identified(c: &CellComplex) -> bool {
    let top = c.dim().unwrap_or(0);
    c.kind == ComplexKind::Cubical
        && c.cells
            .iter()
            .filter(|cell| cell.dim == top && top > 0)
            .any(|cell| cell.facets.chunks(2).any(|p| p[0] == p[1]))
}

/// `Y^□_{h,d,k}` (same-side gluing of `hd` cubes) and `Z^□_{h,d,k}` (`2hd`
/// cubes, facets of either side with equal class glued by translation,
/// conditioned on no cube meeting itself across an axis).
pub fn random_cubical(p: &RandomModelParams, cap: u64) -> Result<Sample> {
    p.check()?;
    let (k, cells, d) = (p.k, p.cell_count(), p.d);
    let types = 3usize.pow(k as u32);
    let mut rng = SeededRng::new(p.seed);
    let mut attempts = 0u64;
    // labels[axis][side][cube]
    let labels: Vec<[Vec<usize>; 2]> = loop {
        attempts += 1;
        let labels: Vec<[Vec<usize>; 2]> = (0..k)
            .map(|_| {
                let zero = draw_classes(&mut rng, cells, d);
                let one = draw_classes(&mut rng, cells, d);
                [zero, one]
            })
            .collect();
        match p.model {
            Model::Ybox => break labels,
            Model::Zbox => {
                let clash = labels
                    .iter()
                    .any(|[z, o]| z.iter().zip(o).any(|(a, b)| a == b));
                if !clash {
                    break labels;
                }
                if attempts >= cap {
                    return Err(GarlandError::RejectionCap {
                        attempts,
                        reason: "opposite facets identified in every draw".into(),
                    });
                }
            }
            Model::Ydelta => {
                return Err(GarlandError::Parameter(
                    "ydelta is not a cubical model".into(),
                ))
            }
        }
    };

    let classes = cells / d;
    let mut uf = UnionFind::new(cells * types);
    for (axis, sides) in labels.iter().enumerate() {
        // members of each class as (cube, side)
        let mut members: Vec<Vec<(usize, usize)>> = vec![Vec::new(); classes];
        for (side, lab) in sides.iter().enumerate() {
            for (f, &c) in lab.iter().enumerate() {
                members[c].push((f, side));
            }
        }
        for t in (0..types).filter(|&t| digit(t, axis) == ZERO) {
            for m in &members {
                let elems: Vec<usize> = m
                    .iter()
                    .map(|&(f, side)| f * types + with_digit(t, axis, side))
                    .collect();
                match p.model {
                    Model::Zbox => {
                        for w in elems.windows(2) {
                            uf.union(w[0], w[1]);
                        }
                    }
                    _ => {
                        for side in [ZERO, ONE] {
                            let same: Vec<usize> = m
                                .iter()
                                .zip(&elems)
                                .filter(|((_, s), _)| *s == side)
                                .map(|(_, &e)| e)
                                .collect();
                            for w in same.windows(2) {
                                uf.union(w[0], w[1]);
                            }
                        }
                    }
                }
            }
        }
    }
    let dim_of = |t: usize| Some((0..k).filter(|&a| digit(t, a) == FREE).count());
    let facets_of = |t: usize| -> Vec<usize> {
        (0..k)
            .filter(|&a| digit(t, a) == FREE)
            .flat_map(|a| [with_digit(t, a, ZERO), with_digit(t, a, ONE)])
            .collect()
    };
    let complex = assemble(
        ComplexKind::Cubical,
        types,
        cells,
        &mut uf,
        dim_of,
        facets_of,
    );
    Ok(Sample { complex, attempts })
}

pub fn random_complex(p: &RandomModelParams, cap: u64) -> Result<Sample> {
    match p.model {
        Model::Ydelta => random_simplicial(p),
        Model::Ybox | Model::Zbox => random_cubical(p, cap),
    }
}
