//! Small dense helpers used around the eigensolver.

use super::jacobi::SymMatrix;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows);
        let mut out = Dense::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Dense {
        let mut out = Dense::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// `Bᵀ S B` for symmetric `S`, returned symmetrized.
    pub fn congruence(&self, s: &SymMatrix) -> SymMatrix {
        assert_eq!(s.n(), self.rows);
        let sm = Dense {
            rows: s.n(),
            cols: s.n(),
            data: s.as_row_major().to_vec(),
        };
        let out = self.transpose().mul(&sm).mul(self);
        SymMatrix::from_row_major(out.rows, out.data)
    }
}

/// Orthonormal basis of the complement of the unit vector `u`, as the
/// columns of an `n × (n-1)` matrix (Householder reflection).
pub fn complement_basis(u: &[f64]) -> Dense {
    let n = u.len();
    let mut v = u.to_vec();
    let alpha = if u[0] >= 0.0 { -1.0 } else { 1.0 };
    v[0] -= alpha;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let mut h = Dense::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            h.set(i, j, id - 2.0 * v[i] * v[j] / vv);
        }
    }
    // H e_0 = alpha u, so the remaining columns span u⊥.
    let mut out = Dense::zeros(n, n.saturating_sub(1));
    for i in 0..n {
        for j in 1..n {
            out.set(i, j - 1, h.get(i, j));
        }
    }
    out
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(s: &SymMatrix) -> Option<Dense> {
    let n = s.n();
    let mut l = Dense::zeros(n, n);
    for j in 0..n {
        let mut d = s.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d <= 0.0 {
            return None;
        }
        let d = d.sqrt();
        l.set(j, j, d);
        for i in (j + 1)..n {
            let mut v = s.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / d);
        }
    }
    Some(l)
}

/// Inverse of a lower-triangular matrix.
pub fn lower_inverse(l: &Dense) -> Dense {
    let n = l.rows;
    let mut inv = Dense::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut v = if i == col { 1.0 } else { 0.0 };
            for k in col..i {
                v -= l.get(i, k) * inv.get(k, col);
            }
            inv.set(i, col, v / l.get(i, i));
        }
    }
    inv
}

/// Reduces the pencil `(Q, G)` with `G` positive definite to the standard
/// symmetric matrix `L⁻¹ Q L⁻ᵀ` sharing its generalized eigenvalues.
pub fn reduce_pencil(q: &SymMatrix, g: &SymMatrix) -> Option<SymMatrix> {
    let l = cholesky(g)?;
    let linv = lower_inverse(&l);
    Some(linv.transpose().congruence(q))
}
