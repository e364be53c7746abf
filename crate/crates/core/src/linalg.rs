//! Small dense real linear algebra: row-major square matrices, cyclic Jacobi
//! eigendecomposition and Cholesky solves.

use alloc::vec;
use alloc::vec::Vec;
use libm::{fabs, sqrt};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// uᵀ M v
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for j in 0..self.n {
                row += self[(i, j)] * v[j];
            }
            acc += u[i] * row;
        }
        acc
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenpairs of a real symmetric matrix, eigenvalues descending; column k of
/// `vectors` is the k-th eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.n).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Cyclic Jacobi rotations until the off-diagonal mass is below 1e-30 of the
/// Frobenius norm (or 100 sweeps). Eigenvector signs are fixed so that the
/// largest-magnitude component is positive.
pub fn symmetric_eigen(a: &Matrix) -> SymmetricEigen {
    let n = a.n;
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let frob: f64 = m.data.iter().map(|x| x * x).sum();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off <= 1e-30 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (fabs(theta) + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n);
    for (k, &src) in order.iter().enumerate() {
        let mut big = 0.0f64;
        let mut sign = 1.0;
        for i in 0..n {
            let x = v[(i, src)];
            if fabs(x) > big + 1e-12 {
                big = fabs(x);
                sign = x.signum();
            }
        }
        for i in 0..n {
            vectors[(i, k)] = sign * v[(i, src)];
        }
    }
    SymmetricEigen { values, vectors }
}

/// Solve A x = b for symmetric positive definite A. Returns `None` if the
/// factorisation meets a non-positive pivot.
pub fn cholesky_solve(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.n;
    let mut l = Matrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = sqrt(d);
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_reconstructs_matrix() {
        let a = Matrix::from_fn(4, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let e = symmetric_eigen(&a);
        for i in 0..4 {
            for j in 0..4 {
                let r: f64 = (0..4)
                    .map(|k| e.values[k] * e.vectors[(i, k)] * e.vectors[(j, k)])
                    .sum();
                assert!(fabs(r - a[(i, j)]) < 1e-14);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_of_diagonal_is_exact() {
        let a = Matrix::from_fn(3, |i, j| if i == j { [2.0, 5.0, -1.0][i] } else { 0.0 });
        let e = symmetric_eigen(&a);
        assert_eq!(e.values, vec![5.0, 2.0, -1.0]);
        assert_eq!(e.vector(0), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let a = Matrix::from_fn(3, |i, j| if i == j { 4.0 } else { 1.0 });
        let x = cholesky_solve(&a, &[6.0, 6.0, 6.0]).unwrap();
        for xi in x {
            assert!(fabs(xi - 1.0) < 1e-15);
        }
        let bad = Matrix::from_fn(2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(cholesky_solve(&bad, &[1.0, 1.0]).is_none());
    }
}
