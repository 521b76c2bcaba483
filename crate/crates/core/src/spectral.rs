//! Normalized Laplacians of link-graph components and the spectral criterion.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complex::ComplexKind;
use crate::error::{GarlandError, Result};
use crate::garland::{ComponentKind, LinkGraph};
use crate::linalg::rational::rational_to_f64;
use crate::linalg::{symmetric_eigenvalues, SymMatrix};

/// Default half-width of the band around the threshold inside which the
/// comparison is reported as inconclusive.
pub const DEFAULT_BAND: f64 = 1e-7;

/// Default tolerance below which a gap counts as equal to the threshold.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Finite multigraph; loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(
            edges.iter().all(|&(u, v)| u < n && v < n),
            "edge endpoint out of range"
        );
        Multigraph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    /// 1-skeleton of the `r`-cube.
    pub fn hypercube(r: usize) -> Self {
        let n = 1usize << r;
        let mut edges = Vec::new();
        for v in 0..n {
            for bit in 0..r {
                let w = v ^ (1 << bit);
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        Multigraph::new(n, edges)
    }

    /// Degrees with multiplicity; a loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn component_count(&self) -> usize {
        let mut uf = crate::unionfind::UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.labels().1
    }
}

/// `D^{-1/2} (D - A) D^{-1/2}` with multi-edge adjacency counts; a loop adds
/// 2 to both the degree and the diagonal adjacency entry.
pub fn normalized_laplacian(g: &Multigraph) -> Result<SymMatrix> {
    let deg = g.degrees();
    if g.n > 1 {
        if let Some(v) = deg.iter().position(|&d| d == 0) {
            return Err(GarlandError::LinkGraph(format!(
                "isolated vertex {v} in a component with {} vertices",
                g.n
            )));
        }
    }
    let mut adj = SymMatrix::zeros(g.n);
    for &(u, v) in &g.edges {
        if u == v {
            adj.add(u, u, 2.0);
        } else {
            adj.add(u, v, 1.0);
        }
    }
    let mut l = SymMatrix::zeros(g.n);
    for i in 0..g.n {
        if deg[i] == 0 {
            continue;
        }
        for j in i..g.n {
            if deg[j] == 0 {
                continue;
            }
            let scale = ((deg[i] * deg[j]) as f64).sqrt();
            let d = if i == j { deg[i] as f64 } else { 0.0 };
            l.set(i, j, (d - adj.get(i, j)) / scale);
        }
    }
    Ok(l)
}

pub fn spectrum(g: &Multigraph) -> Result<Vec<f64>> {
    symmetric_eigenvalues(&normalized_laplacian(g)?)
}

/// Second-smallest eigenvalue; `+∞` for a single vertex.
pub fn spectral_gap(g: &Multigraph) -> Result<f64> {
    Ok(gap_of(&spectrum(g)?))
}

fn gap_of(eigenvalues: &[f64]) -> f64 {
    eigenvalues.get(1).copied().unwrap_or(f64::INFINITY)
}

/// `k/(k+1)` for simplicial and `2k/(2k+1)` for cubical complexes.
pub fn threshold(k: usize, kind: ComplexKind) -> BigRational {
    let (num, den) = match kind {
        ComplexKind::Simplicial => (k, k + 1),
        ComplexKind::Cubical => (2 * k, 2 * k + 1),
    };
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Serializes non-finite floats as the strings `"inf"` / `"-inf"`.
pub fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn serialize_rational<S: Serializer>(
    v: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentSpectrum {
    pub id: usize,
    pub kind: ComponentKind,
    pub size: usize,
    pub edge_count: usize,
    #[serde(serialize_with = "serialize_extended")]
    pub gap: f64,
    /// Multiplicity of eigenvalue 0 within tolerance.
    pub zero_multiplicity: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralReport {
    pub components: Vec<ComponentSpectrum>,
    #[serde(serialize_with = "serialize_extended")]
    pub min_gap: f64,
    pub tol: f64,
}

/// Spectra of all components, solved concurrently and ordered by id.
pub fn spectral_report(lg: &LinkGraph, tol: f64) -> Result<SpectralReport> {
    let components = lg
        .components
        .par_iter()
        .map(|c| {
            let g = c.to_multigraph();
            let eigenvalues = spectrum(&g)?;
            Ok(ComponentSpectrum {
                id: c.id,
                kind: c.kind,
                size: g.n,
                edge_count: g.edges.len(),
                gap: gap_of(&eigenvalues),
                zero_multiplicity: eigenvalues.iter().filter(|v| v.abs() <= tol).count(),
                eigenvalues,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_gap = components
        .iter()
        .map(|c| c.gap)
        .fold(f64::INFINITY, f64::min);
    Ok(SpectralReport {
        components,
        min_gap,
        tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentVerdict {
    pub id: usize,
    #[serde(serialize_with = "serialize_extended")]
    pub gap: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionVerdict {
    #[serde(serialize_with = "serialize_rational")]
    pub threshold: BigRational,
    pub threshold_value: f64,
    pub band: f64,
    pub per_component: Vec<ComponentVerdict>,
    pub overall: Status,
}

/// Compares one gap with the threshold. Gaps within `tol` of the threshold
/// count as equal and fail the strict inequality; gaps within `band` but
/// farther than `tol` are inconclusive.
pub fn classify(gap: f64, threshold: f64, tol: f64, band: f64) -> Status {
    let d = gap - threshold;
    if d.abs() <= tol {
        Status::Fails
    } else if d.abs() < band {
        Status::Inconclusive
    } else if d > 0.0 {
        Status::Holds
    } else {
        Status::Fails
    }
}

pub fn evaluate_criterion(
    report: &SpectralReport,
    k: usize,
    kind: ComplexKind,
    tol: f64,
    band: f64,
) -> CriterionVerdict {
    let thr = threshold(k, kind);
    let thr_value = rational_to_f64(&thr);
    let per_component: Vec<ComponentVerdict> = report
        .components
        .iter()
        .map(|c| ComponentVerdict {
            id: c.id,
            gap: c.gap,
            status: classify(c.gap, thr_value, tol, band),
        })
        .collect();
    let overall = if per_component.iter().any(|c| c.status == Status::Fails) {
        Status::Fails
    } else if per_component
        .iter()
        .any(|c| c.status == Status::Inconclusive)
    {
        Status::Inconclusive
    } else {
        Status::Holds
    };
    CriterionVerdict {
        threshold: thr,
        threshold_value: thr_value,
        band,
        per_component,
        overall,
    }
}
