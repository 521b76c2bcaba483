//! Exact linear algebra over the rationals.
//!
//! Ranks use fraction-free (Bareiss) elimination on integer matrices, first
//! in checked `i128` arithmetic and on overflow again with big integers.
//! Kernels use Gauss–Jordan reduction over `BigRational`. A modular rank
//! (random 62-bit prime) is available for large instances; it can only
//! under-estimate the rational rank, and does so with negligible probability.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// How ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "prime")]
pub enum RankMode {
    Exact,
    Modular(u64),
}

impl RankMode {
    pub fn label(&self) -> &'static str {
        match self {
            RankMode::Exact => "exact",
            RankMode::Modular(_) => "probabilistic",
        }
    }
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        if self.rows == 0 {
            return other.clone();
        }
        if other.rows == 0 {
            return self.clone();
        }
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn rank(&self, mode: RankMode) -> usize {
        match mode {
            RankMode::Exact => bareiss_rank(self),
            RankMode::Modular(p) => modular_rank(self, p),
        }
    }

    pub fn nullity(&self, mode: RankMode) -> usize {
        self.cols - self.rank(mode)
    }
}

/// Rank by fraction-free elimination.
pub fn bareiss_rank(m: &IntMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let small: Vec<i128> = m.data.iter().map(|&v| v as i128).collect();
    match bareiss_checked(small, m.rows, m.cols) {
        Some(r) => r,
        None => bareiss_big(m),
    }
}

fn bareiss_checked(mut a: Vec<i128>, rows: usize, cols: usize) -> Option<usize> {
    let mut prev: i128 = 1;
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + col] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let p = a[r * cols + col];
        for i in (r + 1)..rows {
            let f = a[i * cols + col];
            for j in (col + 1)..cols {
                let x = p.checked_mul(a[i * cols + j])?;
                let y = f.checked_mul(a[r * cols + j])?;
                a[i * cols + j] = x.checked_sub(y)? / prev;
            }
            a[i * cols + col] = 0;
        }
        prev = p;
        r += 1;
    }
    Some(r)
}

fn bareiss_big(m: &IntMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<BigInt> = m.data.iter().map(|&v| BigInt::from(v)).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i * cols + col].is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let p = a[r * cols + col].clone();
        for i in (r + 1)..rows {
            let f = a[i * cols + col].clone();
            if f.is_zero() {
                for j in (col + 1)..cols {
                    let v = &p * &a[i * cols + j] / &prev;
                    a[i * cols + j] = v;
                }
                continue;
            }
            for j in (col + 1)..cols {
                let v = (&p * &a[i * cols + j] - &f * &a[r * cols + j]) / &prev;
                a[i * cols + j] = v;
            }
            a[i * cols + col] = BigInt::zero();
        }
        prev = p;
        r += 1;
    }
    r
}

/// Rank modulo the prime `p` (`p < 2^63`).
pub fn modular_rank(m: &IntMatrix, p: u64) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let pi = p as i128;
    let mut a: Vec<u64> = m
        .data
        .iter()
        .map(|&v| (v as i128).rem_euclid(pi) as u64)
        .collect();
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + col] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = pow_mod(a[r * cols + col], p - 2, p);
        for i in (r + 1)..rows {
            let f = mulmod(a[i * cols + col], inv);
            if f == 0 {
                continue;
            }
            for j in col..cols {
                let sub = mulmod(f, a[r * cols + j]);
                a[i * cols + j] = (a[i * cols + j] + p - sub) % p;
            }
        }
        r += 1;
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// First prime at or above a 62-bit value derived from `seed`.
pub fn prime_from_seed(seed: u64) -> u64 {
    let mut n = (crate::rng::splitmix64(seed) >> 2) | (1 << 61) | 1;
    while !is_prime_u64(n) {
        n += 2;
    }
    n
}

/// Dense matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        QMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m
                .data
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !self.data[i * cols + col].is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = self.data[r * cols + col].recip();
            for j in col..cols {
                let v = &self.data[r * cols + j] * &inv;
                self.data[r * cols + j] = v;
            }
            for i in 0..rows {
                if i == r || self.data[i * cols + col].is_zero() {
                    continue;
                }
                let f = self.data[i * cols + col].clone();
                for j in col..cols {
                    if self.data[r * cols + j].is_zero() {
                        continue;
                    }
                    let v = &self.data[i * cols + j] - &f * &self.data[r * cols + j];
                    self.data[i * cols + j] = v;
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `M X = B` for square invertible `M`; `None` when singular.
    pub fn solve(&self, b: &QMatrix) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.rows, self.rows);
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, n + b.cols);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..b.cols {
                aug.set(i, n + j, b.get(i, j).clone());
            }
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let mut x = QMatrix::zeros(n, b.cols);
        for i in 0..n {
            for j in 0..b.cols {
                x.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(x)
    }
}

/// Largest absolute value among rationals, as `f64` (0 for an empty list).
pub fn max_abs_f64<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> f64 {
    values
        .into_iter()
        .map(|v| v.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

pub fn rational_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
