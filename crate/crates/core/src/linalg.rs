//! Elimination kernels shared by the tensor layer: fraction-free rank,
//! float rank via singular values, linear solves and an incremental span.

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};
use crate::tensor::Tensor;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

/// Exact rank by Bareiss fraction-free elimination.
///
/// Row denominators are cleared first (this leaves the rank unchanged), then
/// the elimination runs over `BigInt` with exact divisions only.
pub(crate) fn exact_rank(m: &Tensor) -> usize {
    let (rows, cols) = (m.shape()[0], m.shape()[1]);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut lcm = BigInt::from(1);
            for j in 0..cols {
                let r = m.get(&[i, j]).as_rational().expect("exact backend");
                let d = r.denom();
                lcm = num_integer::lcm(lcm, d.clone());
            }
            (0..cols)
                .map(|j| {
                    let r = m.get(&[i, j]).as_rational().unwrap();
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .collect();

    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                let (q, r) = num_integer::div_rem(num, prev.clone());
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Float rank: number of singular values strictly above `eps`.
pub(crate) fn float_rank(m: &Tensor, eps: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > eps).count()
}

/// Singular values by one-sided (Hestenes) Jacobi: columns are rotated in
/// pairs until mutually orthogonal, then their norms are the singular
/// values. Working on the matrix itself rather than on `A^H A` keeps tiny
/// singular values at machine-precision accuracy.
pub(crate) fn singular_values(m: &Tensor) -> Vec<f64> {
    let (rows, cols) = (m.shape()[0], m.shape()[1]);
    let mut a: Vec<Vec<Complex64>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| m.get(&[i, j]).as_complex().expect("float backend"))
                .collect()
        })
        .collect();
    let tol = 1e-15;
    for _sweep in 0..60 {
        let mut converged = true;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for row in a.iter() {
                    alpha += row[p].norm_sqr();
                    beta += row[q].norm_sqr();
                    gamma += row[p].conj() * row[q];
                }
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                converged = false;
                let phase = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in a.iter_mut() {
                    let (ap, aq) = (row[p], row[q]);
                    row[p] = ap * c - aq * phase.conj() * s;
                    row[q] = ap * phase * s + aq * c;
                }
            }
        }
        if converged {
            break;
        }
    }
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// Gaussian elimination with partial pivoting. Pivots by magnitude on the
/// float backend and by first nonzero entry on the exact backend.
pub(crate) fn solve(a: &Tensor, rhs: &Tensor) -> Result<Tensor> {
    let n = a.shape()[0];
    let k = rhs.shape()[1];
    let backend = a.backend();
    let pivot_floor = match backend {
        Backend::Exact => 0.0,
        Backend::Float { eps } => eps,
    };
    let mut aug: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a.get(&[i, j]).clone())
                .chain((0..k).map(|j| rhs.get(&[i, j]).clone()))
                .collect()
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .filter(|&i| !aug[i][col].is_zero())
            .max_by(|&i, &j| {
                aug[i][col]
                    .magnitude()
                    .partial_cmp(&aug[j][col].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(pivot) = pivot else {
            return Err(Error::SingularMatrix);
        };
        if aug[pivot][col].magnitude() <= pivot_floor {
            return Err(Error::SingularMatrix);
        }
        aug.swap(col, pivot);
        let inv = aug[col][col].inv();
        for j in col..n + k {
            aug[col][j] = &aug[col][j] * &inv;
        }
        for i in 0..n {
            if i == col || aug[i][col].is_zero() {
                continue;
            }
            let factor = aug[i][col].clone();
            for j in col..n + k {
                aug[i][j] = &aug[i][j] - &(&factor * &aug[col][j]);
            }
        }
    }
    let mut out = Tensor::zeros(vec![n, k], backend);
    for i in 0..n {
        for j in 0..k {
            out.set(&[i, j], aug[i][n + j].clone());
        }
    }
    Ok(out)
}

/// Columns of `m` that carry pivots in its reduced row echelon form; these
/// columns of the original matrix are a basis of the column space.
pub(crate) fn pivot_columns(m: &Tensor) -> Vec<usize> {
    let (rows, cols) = (m.shape()[0], m.shape()[1]);
    let eps = m.backend().eps();
    let mut a: Vec<Vec<Scalar>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.get(&[i, j]).clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let pivot = (row..rows)
            .filter(|&i| !a[i][col].is_zero())
            .max_by(|&i, &j| {
                a[i][col]
                    .magnitude()
                    .partial_cmp(&a[j][col].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = pivot else { continue };
        if a[p][col].magnitude() <= eps {
            continue;
        }
        a.swap(row, p);
        let inv = a[row][col].inv();
        for j in col..cols {
            a[row][j] = &a[row][j] * &inv;
        }
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    a[i][j] = &a[i][j] - &(&f * &a[row][j]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Incrementally maintained row space in reduced echelon form. Used for
/// linear-independence tests and for the multiplicative span closure.
pub struct SpanBasis {
    dim: usize,
    backend: Backend,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub fn new(dim: usize, backend: Backend) -> Self {
        SpanBasis {
            dim,
            backend,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for j in 0..self.dim {
                    v[j] = &v[j] - &(&f * &row[j]);
                }
            }
        }
        v
    }

    /// Adds `v` to the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut r = self.reduce(v);
        let eps = self.backend.eps();
        // pick the largest residual entry as pivot (first nonzero when exact)
        let pivot = match self.backend {
            Backend::Exact => r.iter().position(|x| !x.is_zero()),
            Backend::Float { .. } => {
                let (mut best, mut best_mag) = (None, eps);
                for (j, x) in r.iter().enumerate() {
                    if x.magnitude() > best_mag {
                        best = Some(j);
                        best_mag = x.magnitude();
                    }
                }
                best
            }
        };
        let Some(p) = pivot else {
            return false;
        };
        let inv = r[p].inv();
        for x in r.iter_mut() {
            *x = &*x * &inv;
        }
        // keep existing rows reduced against the new one
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.dim {
                    row[j] = &row[j] - &(&f * &r[j]);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}
