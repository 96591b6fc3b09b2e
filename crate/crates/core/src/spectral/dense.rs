//! Small dense symmetric kernels kept independent of the main eigen path:
//! Cholesky factorization and the cyclic Jacobi rotation eigensolver.

use serde::{Deserialize, Serialize};

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    /// Builds from a row-major buffer, symmetrizing `(a + a^T) / 2`.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        let mut m = Self { dim, data };
        for i in 0..dim {
            for j in (i + 1)..dim {
                let s = 0.5 * (m.get(i, j) + m.get(j, i));
                m.set(i, j, s);
                m.set(j, i, s);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest `|a_ij - a_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst / scale
    }
}

/// Lower-triangular Cholesky factor, or `None` if a pivot is not positive.
pub fn cholesky(a: &SymMatrix) -> Option<Vec<f64>> {
    let n = a.dim();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Some(l)
}

/// `L^{-1} A L^{-T}` for a lower-triangular `l`.
pub fn congruence_inverse(l: &[f64], a: &SymMatrix) -> SymMatrix {
    let n = a.dim();
    // X = L^{-1} A (column-wise forward substitution)
    let mut x = a.as_slice().to_vec();
    for c in 0..n {
        for i in 0..n {
            let mut s = x[i * n + c];
            for k in 0..i {
                s -= l[i * n + k] * x[k * n + c];
            }
            x[i * n + c] = s / l[i * n + i];
        }
    }
    // Y = X L^{-T}, i.e. solve L Y^T = X^T row by row
    let mut y = vec![0.0; n * n];
    for r in 0..n {
        for i in 0..n {
            let mut s = x[r * n + i];
            for k in 0..i {
                s -= l[i * n + k] * y[r * n + k];
            }
            y[r * n + i] = s / l[i * n + i];
        }
    }
    SymMatrix::from_row_major(n, y)
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(a: &SymMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut m = a.as_slice().to_vec();
    let norm: f64 = m.iter().map(|v| v * v).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest generalized eigenvalue of `(a, b)` with `b` positive definite.
pub fn generalized_max_eigenvalue(a: &SymMatrix, b: &SymMatrix) -> Option<f64> {
    let l = cholesky(b)?;
    let c = congruence_inverse(&l, a);
    jacobi_eigenvalues(&c).last().copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_matrix() {
        // eigenvalues of [[2,1,0],[1,2,1],[0,1,2]] are 2 - sqrt2, 2, 2 + sqrt2
        let a = SymMatrix::from_row_major(3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let ev = jacobi_eigenvalues(&a);
        let s = 2f64.sqrt();
        for (got, want) in ev.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn generalized_diagonal() {
        let a = SymMatrix::from_row_major(2, vec![4.0, 0.0, 0.0, 9.0]);
        let b = SymMatrix::from_row_major(2, vec![2.0, 0.0, 0.0, 1.0]);
        assert!((generalized_max_eigenvalue(&a, &b).unwrap() - 9.0).abs() < 1e-14);
        let bad = SymMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 1.0]);
        assert!(cholesky(&bad).is_none());
    }
}
