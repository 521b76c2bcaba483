//! Explicit finite-dimensional Garland structure of a Garland poset.
//!
//! Ambient spaces have orthonormal bases of chains: degree 0 uses triples
//! `(a, b, c)` with `a < b < c`, degrees −1 and 1 use pairs `(a, c)` (standing
//! for `(a, a, c)` and `(a, c, c)`). Sums of basis vectors give
//!
//! * `z_a = Σ_c z_{aac}`, `z_{ab} = Σ_c z_{abc}`, `z_{ac} = z_{acc}`,
//! * `z_b = Σ_a z_{ab}`, `z_c = Σ_a z_{ac}`,
//!
//! and `A^i` is spanned by the `z_{ax}`, `B^i` by the `z_x`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GarlandError, Result};
use crate::garland::{check_axioms, Constants, GarlandPoset};
use crate::linalg::dense::{complement_basis, reduce_pencil, Dense};
use crate::linalg::rational::{max_abs_f64, rational_to_f64, IntMatrix, QMatrix, RankMode};
use crate::linalg::{symmetric_eigenvalues, SymMatrix};
use crate::rng::SeededRng;
use crate::spectral::serialize_extended;

/// Tolerance for the floating-point identities.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ExplicitGarlandStructure {
    pub constants: Constants,
    pub n_minus: usize,
    pub n_zero: usize,
    pub n_one: usize,
    /// Pairs `(a, c)` with `a < c`, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    /// Triples `(a, b, c)` with `a < b < c`, lexicographic.
    pub triples: Vec<(usize, usize, usize)>,
    /// `a0` on the basis vector of each pair: `(triple, w_ab)`.
    pub a0: Vec<Vec<(usize, i64)>>,
    /// `a1` on the basis vector of each triple: `(pair, w_bc)`.
    pub a1: Vec<(usize, i64)>,
    /// `w(a, b)` for each `b`.
    pub w_ab: Vec<Vec<(usize, i64)>>,
    /// `w(b, c)` for each `c`.
    pub w_bc: Vec<Vec<(usize, i64)>>,
    /// Number of `c > b`, the degree of `b` in every link graph containing it.
    pub degree: Vec<usize>,
}

/// Assembles the structure; the poset must satisfy the axioms.
pub fn assemble(g: &GarlandPoset) -> Result<ExplicitGarlandStructure> {
    let report = check_axioms(g);
    if !report.all_pass() {
        return Err(GarlandError::Axiom(Box::new(report)));
    }
    Ok(assemble_unchecked(g))
}

/// Assembles the structure without checking the axioms.
pub fn assemble_unchecked(g: &GarlandPoset) -> ExplicitGarlandStructure {
    let n_minus = g.s_minus.len();
    let n_zero = g.s_zero.len();
    let n_one = g.s_one.len();
    let w_ab: Vec<Vec<(usize, i64)>> = g
        .below_zero
        .iter()
        .map(|v| v.iter().map(|&(a, w)| (a, w as i64)).collect())
        .collect();
    let w_bc: Vec<Vec<(usize, i64)>> = g
        .below_one
        .iter()
        .map(|v| v.iter().map(|&(b, w)| (b, w as i64)).collect())
        .collect();

    let mut triples = Vec::new();
    for (c, below) in w_bc.iter().enumerate() {
        for &(b, _) in below {
            for &(a, _) in &w_ab[b] {
                triples.push((a, b, c));
            }
        }
    }
    triples.sort_unstable();
    triples.dedup();
    let mut pairs: Vec<(usize, usize)> = triples.iter().map(|&(a, _, c)| (a, c)).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let mut a0 = vec![Vec::new(); pairs.len()];
    let mut a1 = Vec::with_capacity(triples.len());
    for (t, &(a, b, c)) in triples.iter().enumerate() {
        let p = pair_index[&(a, c)];
        let wab = w_ab[b].iter().find(|(x, _)| *x == a).map_or(0, |(_, w)| *w);
        let wbc = w_bc[c].iter().find(|(x, _)| *x == b).map_or(0, |(_, w)| *w);
        a0[p].push((t, wab));
        a1.push((p, wbc));
    }

    ExplicitGarlandStructure {
        constants: g.constants,
        n_minus,
        n_zero,
        n_one,
        pairs,
        triples,
        a0,
        a1,
        w_ab,
        w_bc,
        degree: g.up_degree(),
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ExplicitGarlandStructure {
    pub fn dim_ambient(&self) -> (usize, usize, usize) {
        (self.pairs.len(), self.triples.len(), self.pairs.len())
    }

    /// Triples supporting `z_b`, per `b`.
    fn z_zero_support(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_zero];
        for (t, &(_, b, _)) in self.triples.iter().enumerate() {
            out[b].push(t);
        }
        out
    }

    /// Pairs supporting `z_c`, per `c`.
    fn z_one_support(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_one];
        for (p, &(_, c)) in self.pairs.iter().enumerate() {
            out[c].push(p);
        }
        out
    }

    /// Coefficients of `b0 z_a` in the basis `z_b`, by the projection
    /// formula: `b0[b][a] = w_ab / n0`.
    pub fn b0(&self) -> QMatrix {
        let n0 = self.constants.n0 as i64;
        let mut m = QMatrix::zeros(self.n_zero, self.n_minus);
        for (b, ws) in self.w_ab.iter().enumerate() {
            for &(a, w) in ws {
                m.set(b, a, frac(w, n0));
            }
        }
        m
    }

    /// Coefficients of `b1 z_b` in the basis `z_c`: `b1[c][b] = (n0/n1) w_bc`.
    pub fn b1(&self) -> QMatrix {
        let Constants { n0, n1, .. } = self.constants;
        let mut m = QMatrix::zeros(self.n_one, self.n_zero);
        for (c, ws) in self.w_bc.iter().enumerate() {
            for &(b, w) in ws {
                m.set(c, b, frac(w * n0 as i64, n1 as i64));
            }
        }
        m
    }

    /// Integer matrix of `w(b, c)`, rows `c`, columns `b`.
    fn w_bc_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n_one, self.n_zero);
        for (c, ws) in self.w_bc.iter().enumerate() {
            for &(b, w) in ws {
                m.add(c, b, w);
            }
        }
        m
    }

    /// Coefficients of `a1 φ` on the pair basis for `φ = Σ x_b z_b`.
    fn a1_of_b_combination(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.pairs.len()];
        for (t, &(_, b, _)) in self.triples.iter().enumerate() {
            let (p, w) = self.a1[t];
            out[p] += w as f64 * x[b];
        }
        out
    }
}

fn qmul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    assert_eq!(a.cols, b.rows);
    let mut out = QMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if y.is_zero() {
                    continue;
                }
                let v = out.get(i, j) + x * y;
                out.set(i, j, v);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Identity {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

impl Identity {
    fn exact(name: &str, residual: f64) -> Self {
        Identity {
            name: name.to_string(),
            residual,
            pass: residual == 0.0,
        }
    }

    fn approx(name: &str, residual: f64) -> Self {
        Identity {
            name: name.to_string(),
            residual,
            pass: residual < IDENTITY_TOL,
        }
    }
}

/// Least-squares coefficients `X = G⁻¹ Zᵀ` of the projection onto the span
/// of the columns of `Z`, where `Z` has 0/1 entries given by column
/// supports over an ambient space of size `n`. The Gram matrix is formed and
/// solved generically.
fn ls_coefficients(supports: &[Vec<usize>], n: usize) -> Option<QMatrix> {
    let m = supports.len();
    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, s) in supports.iter().enumerate() {
        for &t in s {
            owner[t].push(j);
        }
    }
    let mut gram = QMatrix::zeros(m, m);
    for row in &owner {
        for &i in row {
            for &j in row {
                let v = gram.get(i, j) + BigRational::one();
                gram.set(i, j, v);
            }
        }
    }
    let mut zt = QMatrix::zeros(m, n);
    for (t, row) in owner.iter().enumerate() {
        for &j in row {
            zt.set(j, t, BigRational::one());
        }
    }
    gram.solve(&zt)
}

/// Checks that `P = Z X` is an idempotent, self-adjoint projection given the
/// least-squares coefficients `X`. Returns the largest residual entries of
/// `XZ − I` and `P − Pᵀ`.
fn projection_residuals(supports: &[Vec<usize>], x: &QMatrix) -> (f64, f64) {
    let m = supports.len();
    let n = x.cols;
    let mut owner = vec![usize::MAX; n];
    let mut unique = true;
    for (j, s) in supports.iter().enumerate() {
        for &t in s {
            if owner[t] != usize::MAX {
                unique = false;
            }
            owner[t] = j;
        }
    }
    let mut idem: f64 = 0.0;
    for i in 0..m {
        for (j, s) in supports.iter().enumerate() {
            let mut v = BigRational::zero();
            for &t in s {
                v += x.get(i, t);
            }
            if i == j {
                v -= BigRational::one();
            }
            idem = idem.max(max_abs_f64([&v]));
        }
    }
    // with disjoint supports, P[t][u] = X[owner(t)][u]
    let mut sym: f64 = if unique { 0.0 } else { f64::INFINITY };
    if unique {
        let entry = |t: usize, u: usize| {
            if owner[t] == usize::MAX {
                BigRational::zero()
            } else {
                x.get(owner[t], u).clone()
            }
        };
        for t in 0..n {
            for u in (t + 1)..n {
                let d = entry(t, u) - entry(u, t);
                if !d.is_zero() {
                    sym = sym.max(max_abs_f64([&d]));
                }
            }
        }
    }
    (idem, sym)
}

/// Exact checks that `A` and `B` are complexes and that the projections are
/// the coefficient formulas, plus norm and adjointness checks.
pub fn verify_complex_identities(e: &ExplicitGarlandStructure, seed: u64) -> Vec<Identity> {
    let Constants { n0, n1, .. } = e.constants;
    let mut out = Vec::new();

    // a1 a0 on each pair basis vector
    let mut a1a0: i64 = 0;
    for col in &e.a0 {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(t, w) in col {
            let (p, w2) = e.a1[t];
            *acc.entry(p).or_default() += w * w2;
        }
        a1a0 = a1a0.max(acc.values().map(|v| v.abs()).max().unwrap_or(0));
    }
    out.push(Identity::exact("a1*a0 = 0", a1a0 as f64));

    let b0 = e.b0();
    let b1 = e.b1();
    let b1b0 = qmul(&b1, &b0);
    out.push(Identity::exact("b1*b0 = 0", max_abs_f64(&b1b0.data)));

    // norms of the spanning vectors
    let supp0 = e.z_zero_support();
    let supp1 = e.z_one_support();
    let mut norm_ab = 0usize;
    let mut ab_support: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, &(a, b, _)) in e.triples.iter().enumerate() {
        ab_support.entry((a, b)).or_default().push(t);
    }
    for (&(_, b), ts) in &ab_support {
        norm_ab = norm_ab.max(ts.len().abs_diff(e.degree[b]));
    }
    out.push(Identity::exact("|z_ab|^2 = deg b", norm_ab as f64));
    let norm_b = supp0
        .iter()
        .enumerate()
        .map(|(b, s)| s.len().abs_diff(n0 * e.degree[b]))
        .max()
        .unwrap_or(0);
    out.push(Identity::exact("|z_b|^2 = n0 deg b", norm_b as f64));
    let norm_c = supp1
        .iter()
        .map(|s| s.len().abs_diff(n1))
        .max()
        .unwrap_or(0);
    out.push(Identity::exact("|z_c|^2 = n1", norm_c as f64));

    // generic least squares onto span(z_b) and span(z_c)
    let x0 = ls_coefficients(&supp0, e.triples.len());
    let x1 = ls_coefficients(&supp1, e.pairs.len());
    let (coef0, idem0, sym0, b0_formula) = match &x0 {
        Some(x) => {
            // projection of z_ab must be z_b / n0
            let mut r: f64 = 0.0;
            for (&(_, b), ts) in &ab_support {
                for bb in 0..e.n_zero {
                    let mut v = BigRational::zero();
                    for &t in ts {
                        v += x.get(bb, t);
                    }
                    if bb == b {
                        v -= frac(1, n0 as i64);
                    }
                    r = r.max(max_abs_f64([&v]));
                }
            }
            // proj(a0 z_a) against the formula b0
            let mut f: f64 = 0.0;
            for a in 0..e.n_minus {
                let mut coeffs = vec![BigRational::zero(); e.n_zero];
                for (p, &(pa, _)) in e.pairs.iter().enumerate() {
                    if pa != a {
                        continue;
                    }
                    for &(t, w) in &e.a0[p] {
                        for (bb, cf) in coeffs.iter_mut().enumerate() {
                            *cf += x.get(bb, t) * q(w);
                        }
                    }
                }
                for (bb, cf) in coeffs.iter().enumerate() {
                    f = f.max(max_abs_f64([&(cf - b0.get(bb, a))]));
                }
            }
            let (i, s) = projection_residuals(&supp0, x);
            (r, i, s, f)
        }
        None => (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY),
    };
    out.push(Identity::exact("proj_B0(z_ab) = z_b/n0", coef0));
    out.push(Identity::exact("b0 = proj_B0 a0", b0_formula));
    out.push(Identity::exact("proj_B0 idempotent", idem0));
    out.push(Identity::exact("proj_B0 self-adjoint", sym0));

    let (coef1, idem1, sym1, b1_formula) = match &x1 {
        Some(x) => {
            let mut r: f64 = 0.0;
            for (p, &(_, c)) in e.pairs.iter().enumerate() {
                for cc in 0..e.n_one {
                    let mut v = x.get(cc, p).clone();
                    if cc == c {
                        v -= frac(1, n1 as i64);
                    }
                    r = r.max(max_abs_f64([&v]));
                }
            }
            // proj(a1 z_b) against the formula b1
            let mut f: f64 = 0.0;
            for (b, s) in supp0.iter().enumerate() {
                let mut coeffs = vec![BigRational::zero(); e.n_one];
                for &t in s {
                    let (p, w) = e.a1[t];
                    for (cc, cf) in coeffs.iter_mut().enumerate() {
                        *cf += x.get(cc, p) * q(w);
                    }
                }
                for (cc, cf) in coeffs.iter().enumerate() {
                    f = f.max(max_abs_f64([&(cf - b1.get(cc, b))]));
                }
            }
            let (i, s) = projection_residuals(&supp1, x);
            (r, i, s, f)
        }
        None => (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY),
    };
    out.push(Identity::exact("proj_B1(z_ac) = z_c/n1", coef1));
    out.push(Identity::exact("b1 = proj_B1 a1", b1_formula));
    out.push(Identity::exact("proj_B1 idempotent", idem1));
    out.push(Identity::exact("proj_B1 self-adjoint", sym1));

    // <a1 u, v> = <u, a1ᵀ v> on seeded integer vectors
    let mut rng = SeededRng::new(seed);
    let mut adj: i64 = 0;
    for _ in 0..8 {
        let u: Vec<i64> = (0..e.triples.len())
            .map(|_| rng.below(7) as i64 - 3)
            .collect();
        let v: Vec<i64> = (0..e.pairs.len())
            .map(|_| rng.below(7) as i64 - 3)
            .collect();
        let mut a1u = vec![0i64; e.pairs.len()];
        for (t, &(p, w)) in e.a1.iter().enumerate() {
            a1u[p] += w * u[t];
        }
        let lhs: i64 = a1u.iter().zip(&v).map(|(x, y)| x * y).sum();
        let mut a1tv = vec![0i64; e.triples.len()];
        for (t, &(p, w)) in e.a1.iter().enumerate() {
            a1tv[t] += w * v[p];
        }
        let rhs: i64 = u.iter().zip(&a1tv).map(|(x, y)| x * y).sum();
        adj = adj.max((lhs - rhs).abs());
    }
    out.push(Identity::exact("<a1 u, v> = <u, a1* v>", adj as f64));

    out
}

/// Smallest eigenvalue of `a1* a1` on `ker(a0*) ∩ A_a⁰`, per block, with the
/// full block spectrum.
pub fn block_spectra(e: &ExplicitGarlandStructure) -> Result<Vec<Vec<f64>>> {
    let mut bs_of: Vec<Vec<(usize, i64)>> = vec![Vec::new(); e.n_minus];
    for (b, ws) in e.w_ab.iter().enumerate() {
        for &(a, w) in ws {
            bs_of[a].push((b, w));
        }
    }
    let mut above: Vec<Vec<(usize, i64)>> = vec![Vec::new(); e.n_zero];
    for (c, ws) in e.w_bc.iter().enumerate() {
        for &(b, w) in ws {
            above[b].push((c, w));
        }
    }
    bs_of
        .par_iter()
        .map(|bs| {
            let m = bs.len();
            if m <= 1 {
                return Ok(Vec::new());
            }
            let pos: HashMap<usize, usize> =
                bs.iter().enumerate().map(|(i, &(b, _))| (b, i)).collect();
            // Q = Mᵀ M with M[c][b] = w_bc over the c above a
            let mut cols_of_c: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
            for &(b, _) in bs {
                for &(c, w) in &above[b] {
                    cols_of_c.entry(c).or_default().push((pos[&b], w as f64));
                }
            }
            let mut quad = SymMatrix::zeros(m);
            for entries in cols_of_c.values() {
                for &(i, wi) in entries {
                    for &(j, wj) in entries {
                        if i <= j {
                            quad.add(i, j, wi * wj);
                        }
                    }
                }
            }
            let deg: Vec<f64> = bs.iter().map(|&(b, _)| e.degree[b] as f64).collect();
            // y = D^{1/2} x; constraint <y, D^{1/2} w> = 0
            let mut scaled = SymMatrix::zeros(m);
            for i in 0..m {
                for j in i..m {
                    scaled.set(i, j, quad.get(i, j) / (deg[i] * deg[j]).sqrt());
                }
            }
            let u: Vec<f64> = bs
                .iter()
                .zip(&deg)
                .map(|(&(_, w), d)| w as f64 * d.sqrt())
                .collect();
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let u: Vec<f64> = u.iter().map(|x| x / norm).collect();
            let basis = complement_basis(&u);
            symmetric_eigenvalues(&basis.congruence(&scaled))
        })
        .collect()
}

fn min_or_inf(v: &[f64]) -> f64 {
    v.first().copied().unwrap_or(f64::INFINITY)
}

/// `α` overall and per block.
pub fn alpha(e: &ExplicitGarlandStructure) -> Result<(f64, Vec<f64>)> {
    let per_a: Vec<f64> = block_spectra(e)?.iter().map(|s| min_or_inf(s)).collect();
    let overall = per_a.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((overall, per_a))
}

/// Rational basis of `ker(b1)` in `z_b` coordinates.
pub fn ker_b1(e: &ExplicitGarlandStructure) -> Vec<Vec<BigRational>> {
    QMatrix::from_int(&e.w_bc_matrix()).kernel()
}

/// Largest value of `‖a1 φ‖² / ‖φ‖²` over nonzero `φ ∈ ker(b1)`;
/// `−∞` when the kernel is zero.
pub fn beta(e: &ExplicitGarlandStructure) -> Result<f64> {
    let kernel = ker_b1(e);
    let r = kernel.len();
    if r == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let n0 = e.constants.n0 as f64;
    let mut k = Dense::zeros(e.n_zero, r);
    for (j, v) in kernel.iter().enumerate() {
        let scale = max_abs_f64(v).max(1.0);
        for (b, x) in v.iter().enumerate() {
            k.set(b, j, rational_to_f64(x) / scale);
        }
    }
    let mut quad = SymMatrix::zeros(r);
    let mut gram = SymMatrix::zeros(r);
    let images: Vec<Vec<f64>> = (0..r)
        .map(|j| {
            let x: Vec<f64> = (0..e.n_zero).map(|b| k.get(b, j)).collect();
            e.a1_of_b_combination(&x)
        })
        .collect();
    for i in 0..r {
        for j in i..r {
            let qv: f64 = images[i].iter().zip(&images[j]).map(|(x, y)| x * y).sum();
            let gv: f64 = (0..e.n_zero)
                .map(|b| k.get(b, i) * k.get(b, j) * n0 * e.degree[b] as f64)
                .sum();
            quad.set(i, j, qv);
            gram.set(i, j, gv);
        }
    }
    let reduced = reduce_pencil(&quad, &gram).ok_or_else(|| {
        GarlandError::LinkGraph("kernel Gram matrix is not positive definite".into())
    })?;
    let eig = symmetric_eigenvalues(&reduced)?;
    Ok(*eig.last().expect("nonempty kernel"))
}

/// `|(‖a1φ‖² − κ‖b1φ‖²)/‖φ‖² − (n0 − n010)/n0|` for `φ = Σ x_b z_b`.
pub fn rayleigh_residual(e: &ExplicitGarlandStructure, x: &[f64]) -> Result<f64> {
    let Constants { n0, n1, n010 } = e.constants;
    let (n0, n1, n010) = (n0 as f64, n1 as f64, n010 as f64);
    let phi_sq: f64 = x
        .iter()
        .enumerate()
        .map(|(b, v)| v * v * n0 * e.degree[b] as f64)
        .sum();
    if phi_sq == 0.0 {
        return Err(GarlandError::Parameter("zero vector".into()));
    }
    let a1_sq: f64 = e.a1_of_b_combination(x).iter().map(|v| v * v).sum();
    let b1_sq: f64 = e
        .w_bc
        .iter()
        .map(|ws| {
            let s: f64 = ws.iter().map(|&(b, w)| w as f64 * x[b]).sum();
            (n0 / n1) * (n0 / n1) * n1 * s * s
        })
        .sum();
    let kappa = n010 * n1 / (n0 * n0);
    Ok(((a1_sq - kappa * b1_sq) / phi_sq - (n0 - n010) / n0).abs())
}

/// Largest Rayleigh residual over `count` seeded random vectors.
pub fn random_rayleigh(e: &ExplicitGarlandStructure, count: usize, seed: u64) -> Result<f64> {
    let mut rng = SeededRng::new(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let x: Vec<f64> = (0..e.n_zero).map(|_| 2.0 * rng.unit() - 1.0).collect();
        worst = worst.max(rayleigh_residual(e, &x)?);
    }
    Ok(worst)
}

/// `dim(ker b1 ∩ ker b0*)`, the dimension of `H⁰(B)`.
pub fn h0_dim(e: &ExplicitGarlandStructure, mode: RankMode) -> usize {
    // b0* = G₋₁⁻¹ b0ᵀ G₀, so ker b0* is cut out by Σ_b w_ab deg(b) x_b = 0
    let mut m = IntMatrix::zeros(e.n_one + e.n_minus, e.n_zero);
    for (c, ws) in e.w_bc.iter().enumerate() {
        for &(b, w) in ws {
            m.add(c, b, w);
        }
    }
    for (b, ws) in e.w_ab.iter().enumerate() {
        for &(a, w) in ws {
            m.add(e.n_one + a, b, w * e.degree[b] as i64);
        }
    }
    e.n_zero - m.rank(mode)
}

/// `dim ker b1 − rank b0`, computed independently of [`h0_dim`].
pub fn h0_dim_quotient(e: &ExplicitGarlandStructure, mode: RankMode) -> usize {
    let ker = e.n_zero - e.w_bc_matrix().rank(mode);
    let mut b0 = IntMatrix::zeros(e.n_zero, e.n_minus);
    for (b, ws) in e.w_ab.iter().enumerate() {
        for &(a, w) in ws {
            b0.add(b, a, w);
        }
    }
    ker - b0.rank(mode)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockReport {
    /// Every triple belongs to exactly one block.
    pub orthogonal: bool,
    /// Per block: `dim ker(a1|A_a⁰) = rank(a0|A_a)`.
    pub exact: Vec<bool>,
    pub all_exact: bool,
}

pub fn verify_block_decomposition(e: &ExplicitGarlandStructure, mode: RankMode) -> BlockReport {
    let mut seen = vec![false; e.triples.len()];
    let mut orthogonal = true;
    let mut per_block: Vec<Vec<usize>> = vec![Vec::new(); e.n_minus];
    for (t, &(a, _, _)) in e.triples.iter().enumerate() {
        if seen[t] {
            orthogonal = false;
        }
        seen[t] = true;
        per_block[a].push(t);
    }
    let exact: Vec<bool> = per_block
        .par_iter()
        .enumerate()
        .map(|(a, ts)| {
            let mut bs: Vec<usize> = ts.iter().map(|&t| e.triples[t].1).collect();
            bs.sort_unstable();
            bs.dedup();
            let mut cs: Vec<usize> = ts.iter().map(|&t| e.triples[t].2).collect();
            cs.sort_unstable();
            cs.dedup();
            let mut a1 = IntMatrix::zeros(cs.len(), bs.len());
            for &t in ts {
                let (_, b, c) = e.triples[t];
                let (_, w) = e.a1[t];
                a1.set(
                    cs.binary_search(&c).expect("c in block"),
                    bs.binary_search(&b).expect("b in block"),
                    w,
                );
            }
            let mut a0 = IntMatrix::zeros(bs.len(), 1);
            for (i, &b) in bs.iter().enumerate() {
                let w = e.w_ab[b]
                    .iter()
                    .find(|(x, _)| *x == a)
                    .map_or(0, |(_, w)| *w);
                a0.set(i, 0, w);
            }
            a1.nullity(mode) == a0.rank(mode) && a1.mul(&a0).is_zero()
        })
        .collect();
    BlockReport {
        orthogonal,
        all_exact: exact.iter().all(|&x| x),
        exact,
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AlphaBetaReport {
    #[serde(serialize_with = "serialize_extended")]
    pub alpha: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub beta: f64,
    /// `(n0 − n010)/n0`.
    pub beta_bound: f64,
    #[serde(rename = "h0B")]
    pub h0b: usize,
    pub per_a: Vec<f64>,
    pub identities: Vec<Identity>,
    pub blocks_exact: bool,
}

impl AlphaBetaReport {
    /// `β < α ⇒ h⁰(B) = 0`.
    pub fn theorem_holds(&self) -> bool {
        self.beta >= self.alpha || self.beta.is_nan() || self.h0b == 0
    }
}

/// Full exactness-lab run: identities, `α`, `β`, `h⁰(B)` and block exactness.
pub fn analyze_structure(
    e: &ExplicitGarlandStructure,
    mode: RankMode,
    seed: u64,
    rayleigh_samples: usize,
) -> Result<AlphaBetaReport> {
    let mut identities = verify_complex_identities(e, seed);
    let (alpha, per_a) = alpha(e)?;
    let beta = beta(e)?;
    let h0b = h0_dim(e, mode);
    let quotient = h0_dim_quotient(e, mode);
    identities.push(Identity::exact(
        "dim(ker b1 ∩ ker b0*) = dim ker b1 − rank b0",
        h0b.abs_diff(quotient) as f64,
    ));
    if rayleigh_samples > 0 && e.n_zero > 0 {
        identities.push(Identity::approx(
            "Rayleigh identity",
            random_rayleigh(e, rayleigh_samples, seed)?,
        ));
    }
    let blocks = verify_block_decomposition(e, mode);
    identities.push(Identity::exact(
        "blocks A_a orthogonal",
        if blocks.orthogonal { 0.0 } else { 1.0 },
    ));
    identities.push(Identity::exact(
        "every block A_a exact",
        blocks.exact.iter().filter(|&&x| !x).count() as f64,
    ));
    let Constants { n0, n010, .. } = e.constants;
    Ok(AlphaBetaReport {
        alpha,
        beta,
        beta_bound: (n0 - n010) as f64 / n0 as f64,
        h0b,
        per_a,
        identities,
        blocks_exact: blocks.all_exact,
    })
}
