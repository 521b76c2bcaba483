//! Reduced rational cohomology of cell complexes and the classes of link
//! components in it.

use serde::Serialize;

use crate::error::{GarlandError, Result};
use crate::garland::{ComponentKind, GarlandPoset, LowerFace};
use crate::linalg::rational::{IntMatrix, RankMode};
use crate::poset::FacePoset;

/// Coboundary matrices of the augmented cochain complex.
#[derive(Debug, Clone)]
pub struct CochainData {
    /// Cells of each dimension, as poset indices.
    pub cells: Vec<Vec<usize>>,
    /// `delta[d + 1]` is `δ_d : C^d → C^{d+1}` with rows the `(d+1)`-cells;
    /// `delta[0]` is the augmentation `C^{-1} = Q → C^0`.
    pub delta: Vec<IntMatrix>,
}

impl CochainData {
    pub fn new(fp: &FacePoset) -> Self {
        let top = fp.max_dim().unwrap_or(0);
        let cells: Vec<Vec<usize>> = (0..=top).map(|d| fp.rank_cells(d)).collect();
        let mut delta = Vec::with_capacity(top + 1);
        let mut aug = IntMatrix::zeros(cells[0].len(), 1);
        for i in 0..cells[0].len() {
            aug.set(i, 0, 1);
        }
        delta.push(aug);
        for d in 0..top {
            delta.push(coboundary(fp, &cells[d], &cells[d + 1]));
        }
        CochainData { cells, delta }
    }

    pub fn top(&self) -> usize {
        self.cells.len() - 1
    }

    /// `δ_d`, for `d ≥ -1`; `None` above the top dimension.
    pub fn delta(&self, d: isize) -> Option<&IntMatrix> {
        self.delta.get((d + 1) as usize)
    }

    fn rank(&self, d: isize, mode: RankMode) -> usize {
        self.delta(d).map_or(0, |m| m.rank(mode))
    }

    /// Reduced Betti number in degree `d ≥ 0`.
    pub fn betti(&self, d: usize, mode: RankMode) -> usize {
        let Some(cells) = self.cells.get(d) else {
            return 0;
        };
        cells.len() - self.rank(d as isize, mode) - self.rank(d as isize - 1, mode)
    }

    pub fn betti_all(&self, mode: RankMode) -> Vec<usize> {
        (0..=self.top()).map(|d| self.betti(d, mode)).collect()
    }

    /// Largest absolute entry of `δ_{d+1} δ_d` over all degrees.
    pub fn delta_squared_defect(&self) -> i64 {
        self.delta
            .windows(2)
            .map(|w| {
                let m = w[1].mul(&w[0]);
                m.data.iter().map(|v| v.abs()).max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}

fn coboundary(fp: &FacePoset, lower: &[usize], upper: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(upper.len(), lower.len());
    for (i, &q) in upper.iter().enumerate() {
        for &(p, s) in fp.facets(q) {
            if let Ok(j) = lower.binary_search(&p) {
                m.add(i, j, s as i64);
            }
        }
    }
    m
}

pub fn betti(fp: &FacePoset, d: usize, mode: RankMode) -> usize {
    CochainData::new(fp).betti(d, mode)
}

/// `δ_a = Σ_{b > a} w(a, b) b*` as a vector over `S⁰`; checks that it is a
/// cocycle.
pub fn connecting_class(g: &GarlandPoset, fp: &FacePoset, a: usize) -> Result<Vec<i64>> {
    let mut v = vec![0i64; g.s_zero.len()];
    for (b, below) in g.below_zero.iter().enumerate() {
        for &(x, w) in below {
            if x == a {
                v[b] += w as i64;
            }
        }
    }
    for (c, below) in g.below_one.iter().enumerate() {
        let s: i64 = below.iter().map(|&(b, w)| w as i64 * v[b]).sum();
        if s != 0 {
            return Err(GarlandError::LinkGraph(format!(
                "class of component {a} is not a cocycle at cell {}",
                fp.id(g.s_one[c])
            )));
        }
    }
    Ok(v)
}

/// Dimensions of the spans of geometric classes (L), transversal classes (T)
/// and both, in `H^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LtDims {
    pub dim_l: usize,
    pub dim_t: usize,
    #[serde(rename = "dimLplusT")]
    pub dim_lt: usize,
}

fn columns_matrix(rows: usize, cols: &[Vec<i64>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

pub fn lt_dims(
    g: &GarlandPoset,
    fp: &FacePoset,
    cochains: &CochainData,
    mode: RankMode,
) -> Result<LtDims> {
    let k = g.level;
    let image = cochains.delta(k as isize - 1).expect("level below top");
    let base = image.rank(mode);
    let mut geometric = Vec::new();
    let mut transversal = Vec::new();
    for (a, (kind, _)) in g.s_minus.iter().enumerate() {
        let class = connecting_class(g, fp, a)?;
        match kind {
            ComponentKind::Geometric => geometric.push(class),
            ComponentKind::Transversal => transversal.push(class),
        }
    }
    let n = g.s_zero.len();
    let span = |cols: &[Vec<i64>]| image.hstack(&columns_matrix(n, cols)).rank(mode) - base;
    let both: Vec<Vec<i64>> = geometric.iter().chain(&transversal).cloned().collect();
    Ok(LtDims {
        dim_l: span(&geometric),
        dim_t: span(&transversal),
        dim_lt: span(&both),
    })
}

/// For every `p ∈ P^{k-1}`, the classes of the components over `p` sum to
/// `δ(p*)`.
pub fn sum_relation_holds(g: &GarlandPoset, fp: &FacePoset) -> Result<bool> {
    let mut sums: std::collections::HashMap<LowerFace, Vec<i64>> = Default::default();
    for (a, &(_, pi)) in g.s_minus.iter().enumerate() {
        if pi == LowerFace::Phi {
            continue;
        }
        let class = connecting_class(g, fp, a)?;
        let entry = sums.entry(pi).or_insert_with(|| vec![0; class.len()]);
        for (x, y) in entry.iter_mut().zip(class) {
            *x += y;
        }
    }
    for (pi, sum) in sums {
        let expected: Vec<i64> = g
            .s_zero
            .iter()
            .map(|&b| match pi {
                LowerFace::Cell(p) => fp.sign(p, b).map_or(0, |s| s as i64),
                _ => 1,
            })
            .collect();
        if sum != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CohomologyReport {
    pub level: usize,
    /// Reduced Betti numbers indexed by degree.
    pub betti: Vec<usize>,
    pub dim_l: usize,
    pub dim_t: usize,
    #[serde(rename = "dimLplusT")]
    pub dim_lt: usize,
    #[serde(rename = "h0B")]
    pub h0b: usize,
    pub consistent: bool,
    pub mode: &'static str,
}

impl CohomologyReport {
    pub fn betti_at_level(&self) -> usize {
        self.betti.get(self.level).copied().unwrap_or(0)
    }
}

/// Betti numbers, L/T dimensions and the consistency flag
/// `h⁰(B) = b_k − dim(L + T)`.
pub fn cohomology_report(
    g: &GarlandPoset,
    fp: &FacePoset,
    h0b: usize,
    mode: RankMode,
) -> Result<CohomologyReport> {
    let cochains = CochainData::new(fp);
    let betti = cochains.betti_all(mode);
    let lt = lt_dims(g, fp, &cochains, mode)?;
    let bk = betti.get(g.level).copied().unwrap_or(0);
    Ok(CohomologyReport {
        level: g.level,
        consistent: bk >= lt.dim_lt && h0b == bk - lt.dim_lt,
        betti,
        dim_l: lt.dim_l,
        dim_t: lt.dim_t,
        dim_lt: lt.dim_lt,
        h0b,
        mode: mode.label(),
    })
}
