//! Dense tensors of rank at most 4 and the small linear-algebra kernels the
//! rest of the crate is built on.
//!
//! Shapes are desk-scale throughout (dimensions of a few dozen at most), so
//! everything is stored densely in row-major order and algorithms favour
//! exactness and clarity over asymptotics.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Backend, Scalar};

pub const MAX_RANK: usize = 4;

/// Dense tensor: a shape, row-major entries, one backend for all of them.
#[derive(Clone, Debug)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<Scalar>,
    backend: Backend,
}

impl Tensor {
    /// Builds a tensor from a shape and row-major entries.
    ///
    /// Fails when the entry count does not match the shape, the rank exceeds
    /// [`MAX_RANK`], a dimension is zero, or the entries mix backends.
    pub fn new(shape: Vec<usize>, data: Vec<Scalar>) -> Result<Self> {
        if shape.len() > MAX_RANK {
            return Err(Error::ShapeMismatch(format!(
                "rank {} exceeds the supported maximum {MAX_RANK}",
                shape.len()
            )));
        }
        if shape.contains(&0) {
            return Err(Error::ShapeMismatch("zero dimension in shape".into()));
        }
        let expected: usize = shape.iter().product();
        if data.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape:?} needs {expected} entries, got {}",
                data.len()
            )));
        }
        let backend = data
            .first()
            .map(Scalar::backend)
            .ok_or_else(|| Error::ShapeMismatch("empty tensor".into()))?;
        if data.iter().any(|s| s.backend() != backend) {
            return Err(Error::BackendMismatch);
        }
        Ok(Tensor {
            shape,
            data,
            backend,
        })
    }

    pub fn from_fn(shape: Vec<usize>, backend: Backend, f: impl Fn(&[usize]) -> Scalar) -> Self {
        let total: usize = shape.iter().product();
        let mut data = Vec::with_capacity(total);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..total {
            let v = f(&idx);
            assert!(v.backend() == backend, "from_fn produced a mixed backend");
            data.push(v);
            Self::advance(&mut idx, &shape);
        }
        Tensor {
            shape,
            data,
            backend,
        }
    }

    pub fn zeros(shape: Vec<usize>, backend: Backend) -> Self {
        let total: usize = shape.iter().product();
        Tensor {
            shape,
            data: vec![Scalar::zero(backend); total],
            backend,
        }
    }

    pub fn identity(n: usize, backend: Backend) -> Self {
        let mut t = Self::zeros(vec![n, n], backend);
        for i in 0..n {
            t.set(&[i, i], Scalar::one(backend));
        }
        t
    }

    /// Rank-2 tensor from rows. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Tensor::new(vec![r, c], rows.into_iter().flatten().collect())
    }

    /// Rank-2 tensor with integer entries, handy in tests and constructions.
    pub fn from_int_rows(rows: &[Vec<i64>], backend: Backend) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| Scalar::from_int(v, backend)).collect())
                .collect(),
        )
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len(), "index rank mismatch");
        let mut off = 0;
        for (k, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.shape[k], "index out of bounds");
            off = off * self.shape[k] + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        assert!(v.backend() == self.backend, "backend mismatch in set");
        let off = self.offset(idx);
        self.data[off] = v;
    }

    fn advance(idx: &mut [usize], shape: &[usize]) {
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < shape[k] {
                return;
            }
            idx[k] = 0;
        }
    }

    /// Entrywise equality: exact on the exact backend, max-norm `<= eps` on
    /// the float backend. Shapes and backends must agree.
    pub fn approx_eq(&self, other: &Tensor) -> bool {
        self.shape == other.shape
            && self.backend == other.backend
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    fn check_same_backend(&self, other: &Tensor) -> Result<()> {
        if self.backend != other.backend {
            return Err(Error::BackendMismatch);
        }
        Ok(())
    }

    /// Sums over the given `(axis of a, axis of b)` pairs; remaining axes keep
    /// their order, those of `a` first.
    pub fn contract(a: &Tensor, b: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor> {
        a.check_same_backend(b)?;
        for &(ia, ib) in pairs {
            if ia >= a.ndim() || ib >= b.ndim() {
                return Err(Error::ShapeMismatch(format!(
                    "contraction axes ({ia}, {ib}) out of range for shapes {:?} and {:?}",
                    a.shape, b.shape
                )));
            }
            if a.shape[ia] != b.shape[ib] {
                return Err(Error::ShapeMismatch(format!(
                    "paired axes ({ia}, {ib}) have sizes {} and {}",
                    a.shape[ia], b.shape[ib]
                )));
            }
        }
        let mut seen_a = vec![false; a.ndim()];
        let mut seen_b = vec![false; b.ndim()];
        for &(ia, ib) in pairs {
            if seen_a[ia] || seen_b[ib] {
                return Err(Error::ShapeMismatch("axis paired twice".into()));
            }
            seen_a[ia] = true;
            seen_b[ib] = true;
        }
        let free_a: Vec<usize> = (0..a.ndim()).filter(|&k| !seen_a[k]).collect();
        let free_b: Vec<usize> = (0..b.ndim()).filter(|&k| !seen_b[k]).collect();
        let out_shape: Vec<usize> = free_a
            .iter()
            .map(|&k| a.shape[k])
            .chain(free_b.iter().map(|&k| b.shape[k]))
            .collect();
        if out_shape.len() > MAX_RANK {
            return Err(Error::ShapeMismatch(format!(
                "contraction result has rank {} > {MAX_RANK}",
                out_shape.len()
            )));
        }
        let sum_dims: Vec<usize> = pairs.iter().map(|&(ia, _)| a.shape[ia]).collect();
        let sum_total: usize = sum_dims.iter().product::<usize>().max(1);
        let out_total: usize = out_shape.iter().product::<usize>().max(1);

        let mut out_data = Vec::with_capacity(out_total);
        let mut out_idx = vec![0usize; out_shape.len()];
        let mut ia_full = vec![0usize; a.ndim()];
        let mut ib_full = vec![0usize; b.ndim()];
        for _ in 0..out_total {
            let mut acc = Scalar::zero(a.backend);
            let mut sum_idx = vec![0usize; sum_dims.len()];
            for _ in 0..sum_total {
                for (pos, &ax) in free_a.iter().enumerate() {
                    ia_full[ax] = out_idx[pos];
                }
                for (pos, &ax) in free_b.iter().enumerate() {
                    ib_full[ax] = out_idx[free_a.len() + pos];
                }
                for (k, &(pa, pb)) in pairs.iter().enumerate() {
                    ia_full[pa] = sum_idx[k];
                    ib_full[pb] = sum_idx[k];
                }
                acc = &acc + &(a.get(&ia_full) * b.get(&ib_full));
                if !sum_dims.is_empty() {
                    Self::advance(&mut sum_idx, &sum_dims);
                }
            }
            out_data.push(acc);
            if !out_shape.is_empty() {
                Self::advance(&mut out_idx, &out_shape);
            }
        }
        if out_shape.is_empty() {
            // rank-0 result: report as a 1x... no, keep as shape [1]
            return Tensor::new(vec![1], out_data);
        }
        Ok(Tensor {
            shape: out_shape,
            data: out_data,
            backend: a.backend,
        })
    }

    /// Kronecker product of two matrices (rectangular allowed).
    pub fn kron(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        a.check_same_backend(b)?;
        if a.ndim() != 2 || b.ndim() != 2 {
            return Err(Error::ShapeMismatch("kron expects matrices".into()));
        }
        let (ra, ca) = (a.shape[0], a.shape[1]);
        let (rb, cb) = (b.shape[0], b.shape[1]);
        let mut out = Tensor::zeros(vec![ra * rb, ca * cb], a.backend);
        for i in 0..ra {
            for j in 0..ca {
                let aij = a.get(&[i, j]);
                if aij.is_zero() {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        out.set(&[i * rb + k, j * cb + l], aij * b.get(&[k, l]));
                    }
                }
            }
        }
        Ok(out)
    }

    // ---- matrix helpers (rank-2 tensors) -----------------------------------

    pub fn rows(&self) -> usize {
        assert_eq!(self.ndim(), 2, "not a matrix");
        self.shape[0]
    }

    pub fn cols(&self) -> usize {
        assert_eq!(self.ndim(), 2, "not a matrix");
        self.shape[1]
    }

    pub fn is_square(&self) -> bool {
        self.ndim() == 2 && self.shape[0] == self.shape[1]
    }

    pub fn matmul(&self, other: &Tensor) -> Result<Tensor> {
        use rayon::prelude::*;
        self.check_same_backend(other)?;
        if self.ndim() != 2 || other.ndim() != 2 || self.cols() != other.rows() {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {:?} by {:?}",
                self.shape, other.shape
            )));
        }
        let (r, k, c) = (self.rows(), self.cols(), other.cols());
        // row-accumulator order: zero entries of the left factor skip whole
        // rows of the right one, which matters for the sparse projector
        // powers this crate multiplies
        let row_of = |i: usize| -> Vec<Scalar> {
            let mut acc = vec![Scalar::zero(self.backend); c];
            for t in 0..k {
                let a = self.get(&[i, t]);
                if a.is_zero() {
                    continue;
                }
                if a.is_exact_one() {
                    for (j, slot) in acc.iter_mut().enumerate() {
                        let b = other.get(&[t, j]);
                        if !b.is_zero() {
                            *slot = &*slot + b;
                        }
                    }
                } else {
                    for (j, slot) in acc.iter_mut().enumerate() {
                        let b = other.get(&[t, j]);
                        if !b.is_zero() {
                            *slot = &*slot + &(a * b);
                        }
                    }
                }
            }
            acc
        };
        // large products go data-parallel by output row
        let rows: Vec<Vec<Scalar>> = if r * c >= 1 << 14 {
            (0..r).into_par_iter().map(row_of).collect()
        } else {
            (0..r).map(row_of).collect()
        };
        Ok(Tensor {
            shape: vec![r, c],
            data: rows.into_iter().flatten().collect(),
            backend: self.backend,
        })
    }

    pub fn transpose(&self) -> Tensor {
        assert_eq!(self.ndim(), 2, "not a matrix");
        let (r, c) = (self.rows(), self.cols());
        Tensor::from_fn(vec![c, r], self.backend, |idx| {
            self.get(&[idx[1], idx[0]]).clone()
        })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_backend(other)?;
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch("addition of different shapes".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Tensor {
            shape: self.shape.clone(),
            data,
            backend: self.backend,
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_backend(other)?;
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(
                "subtraction of different shapes".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Tensor {
            shape: self.shape.clone(),
            data,
            backend: self.backend,
        })
    }

    pub fn scale(&self, by: &Scalar) -> Tensor {
        assert!(by.backend() == self.backend, "backend mismatch in scale");
        let data = self.data.iter().map(|a| a * by).collect();
        Tensor {
            shape: self.shape.clone(),
            data,
            backend: self.backend,
        }
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square(), "trace of a non-square matrix");
        let mut acc = Scalar::zero(self.backend);
        for i in 0..self.rows() {
            acc = &acc + self.get(&[i, i]);
        }
        acc
    }

    /// `self^n` by repeated squaring; `n = 0` gives the identity.
    pub fn mat_pow(&self, n: u64) -> Tensor {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Tensor::identity(self.rows(), self.backend);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.matmul(&base).expect("square shapes");
            }
            n >>= 1;
            if n > 0 {
                base = base.matmul(&base).expect("square shapes");
            }
        }
        result
    }

    /// True iff `m * m = m` (exactly, or entrywise within eps on floats).
    pub fn is_idempotent(&self) -> bool {
        assert!(self.is_square(), "idempotency of a non-square matrix");
        let sq = self.matmul(self).expect("square shapes");
        sq.approx_eq(self)
    }

    /// Rank over the scalar field: fraction-free elimination on the exact
    /// backend, singular values above eps on the float backend.
    pub fn rank(&self) -> usize {
        assert_eq!(self.ndim(), 2, "rank of a non-matrix");
        match self.backend {
            Backend::Exact => linalg::exact_rank(self),
            Backend::Float { eps } => linalg::float_rank(self, eps),
        }
    }

    /// Solves `self * X = rhs` for square `self`; `rhs` holds one column per
    /// unknown vector.
    pub fn solve(&self, rhs: &Tensor) -> Result<Tensor> {
        self.check_same_backend(rhs)?;
        if !self.is_square() || rhs.ndim() != 2 || rhs.rows() != self.rows() {
            return Err(Error::ShapeMismatch("solve dimensions".into()));
        }
        linalg::solve(self, rhs)
    }

    pub fn inverse(&self) -> Result<Tensor> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        self.solve(&Tensor::identity(self.rows(), self.backend))
    }

    /// A basis of the column space, as columns of the returned matrix.
    /// Returns `None` when the column space is zero.
    pub fn column_space_basis(&self) -> Option<Tensor> {
        assert_eq!(self.ndim(), 2, "column space of a non-matrix");
        let pivots = linalg::pivot_columns(self);
        if pivots.is_empty() {
            return None;
        }
        let rows = self.rows();
        let mut out = Tensor::zeros(vec![rows, pivots.len()], self.backend);
        for (j, &col) in pivots.iter().enumerate() {
            for i in 0..rows {
                out.set(&[i, j], self.get(&[i, col]).clone());
            }
        }
        Some(out)
    }

    /// Flattens the tensor to a vector of its entries in row-major order.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact(v: i64) -> Scalar {
        Scalar::from_int(v, Backend::Exact)
    }

    #[test]
    fn contract_identity_composition() {
        let id = Tensor::identity(2, Backend::Exact);
        // pair column of the first with row of the second
        let prod = Tensor::contract(&id, &id, &[(1, 0)]).unwrap();
        assert!(prod.approx_eq(&id));
    }

    #[test]
    fn contract_kronecker_delta_acts_as_identity() {
        let id = Tensor::identity(2, Backend::Exact);
        let v = Tensor::new(vec![2], vec![exact(3), exact(-5)]).unwrap();
        let out = Tensor::contract(&id, &v, &[(1, 0)]).unwrap();
        assert!(out.approx_eq(&v));
    }

    #[test]
    fn contract_checks_structure_constant_associativity() {
        // the diagonal two-dimensional product: contracting the tensor with
        // itself both ways gives entrywise-equal rank-4 tensors
        let mut c = Tensor::zeros(vec![2, 2, 2], Backend::Exact);
        c.set(&[0, 0, 0], exact(1));
        c.set(&[1, 1, 1], exact(1));
        // left side c[i][j][r] c[r][k][t], axes (i, j, k, t)
        let lhs = Tensor::contract(&c, &c, &[(2, 0)]).unwrap();
        // right side c[i][r][t] c[j][k][r], axes (i, t, j, k)
        let rhs = Tensor::contract(&c, &c, &[(1, 2)]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for t in 0..2 {
                        assert!(lhs.get(&[i, j, k, t]).approx_eq(rhs.get(&[i, t, j, k])));
                    }
                }
            }
        }
    }

    #[test]
    fn contract_rejects_mismatched_shapes() {
        let a = Tensor::identity(2, Backend::Exact);
        let b = Tensor::identity(3, Backend::Exact);
        assert!(matches!(
            Tensor::contract(&a, &b, &[(1, 0)]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn contract_rejects_mixed_backends() {
        let a = Tensor::identity(2, Backend::Exact);
        let b = Tensor::identity(2, Backend::float_default());
        assert!(matches!(
            Tensor::contract(&a, &b, &[(1, 0)]),
            Err(Error::BackendMismatch)
        ));
    }

    #[test]
    fn kron_with_trivial_factor() {
        let m = Tensor::from_int_rows(&[vec![1, 2], vec![3, 4]], Backend::Exact).unwrap();
        let one = Tensor::from_int_rows(&[vec![1]], Backend::Exact).unwrap();
        assert!(Tensor::kron(&one, &m).unwrap().approx_eq(&m));
    }

    #[test]
    fn kron_of_identities() {
        let i2 = Tensor::identity(2, Backend::Exact);
        let i3 = Tensor::identity(3, Backend::Exact);
        let i6 = Tensor::identity(6, Backend::Exact);
        assert!(Tensor::kron(&i2, &i3).unwrap().approx_eq(&i6));
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(Tensor::identity(4, Backend::Exact).rank(), 4);
        assert_eq!(Tensor::zeros(vec![3, 3], Backend::Exact).rank(), 0);
        assert_eq!(Tensor::identity(4, Backend::float_default()).rank(), 4);
        assert_eq!(
            Tensor::zeros(vec![3, 3], Backend::float_default()).rank(),
            0
        );
    }

    #[test]
    fn idempotents() {
        assert!(Tensor::identity(3, Backend::Exact).is_idempotent());
        let d = Tensor::from_int_rows(&[vec![1, 0], vec![0, 0]], Backend::Exact).unwrap();
        assert!(d.is_idempotent());
        // rows (a, b), (c, 1 - a) with a(1 - a) = b c
        let m = Tensor::from_rows(vec![
            vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 4)],
            vec![exact(1), Scalar::from_ratio(1, 2)],
        ])
        .unwrap();
        assert!(m.is_idempotent());
    }

    #[test]
    fn solve_and_inverse_exact() {
        let m = Tensor::from_int_rows(&[vec![1, 1], vec![0, 1]], Backend::Exact).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m
            .matmul(&inv)
            .unwrap()
            .approx_eq(&Tensor::identity(2, Backend::Exact)));
        let singular = Tensor::from_int_rows(&[vec![1, 1], vec![1, 1]], Backend::Exact).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn float_rank_thresholds_small_singular_values() {
        let eps = 1e-9;
        let m = Tensor::from_rows(vec![
            vec![Scalar::from_f64(1.0, eps), Scalar::from_f64(0.0, eps)],
            vec![Scalar::from_f64(0.0, eps), Scalar::from_f64(1e-12, eps)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    proptest! {
        // contract is bilinear in its first argument
        #[test]
        fn contract_bilinear(
            a0 in proptest::collection::vec(-4i64..5, 9),
            a1 in proptest::collection::vec(-4i64..5, 9),
            b0 in proptest::collection::vec(-4i64..5, 9),
            alpha in -3i64..4,
        ) {
            let mk = |v: &[i64]| Tensor::new(
                vec![3, 3],
                v.iter().map(|&x| exact(x)).collect(),
            ).unwrap();
            let (a, ap, b) = (mk(&a0), mk(&a1), mk(&b0));
            let alpha = exact(alpha);
            let lhs = Tensor::contract(
                &a.scale(&alpha).add(&ap).unwrap(), &b, &[(1, 0)],
            ).unwrap();
            let rhs = Tensor::contract(&a, &b, &[(1, 0)]).unwrap().scale(&alpha)
                .add(&Tensor::contract(&ap, &b, &[(1, 0)]).unwrap()).unwrap();
            prop_assert!(lhs.approx_eq(&rhs));
        }

        // rank is invariant under row and column permutations
        #[test]
        fn rank_permutation_invariant(
            bits in proptest::collection::vec(0i64..2, 16),
            row_perm in 0usize..24,
            col_perm in 0usize..24,
        ) {
            use itertools::Itertools;
            let m = Tensor::new(vec![4, 4], bits.iter().map(|&b| exact(b)).collect()).unwrap();
            let perms: Vec<Vec<usize>> = (0..4).permutations(4).collect();
            let (rp, cp) = (&perms[row_perm], &perms[col_perm]);
            let permuted = Tensor::from_fn(vec![4, 4], Backend::Exact, |idx| {
                m.get(&[rp[idx[0]], cp[idx[1]]]).clone()
            });
            prop_assert_eq!(m.rank(), permuted.rank());
        }

        // idempotent exact matrices have rank equal to trace
        #[test]
        fn idempotent_rank_equals_trace(
            bits in proptest::collection::vec(0i64..2, 4),
        ) {
            // build a projector by conjugating a diagonal 0/1 matrix
            let d = Tensor::from_fn(vec![4, 4], Backend::Exact, |idx| {
                if idx[0] == idx[1] { exact(bits[idx[0]]) } else { exact(0) }
            });
            let g = Tensor::from_int_rows(&[
                vec![1, 1, 0, 0],
                vec![0, 1, 1, 0],
                vec![0, 0, 1, 1],
                vec![0, 0, 0, 1],
            ], Backend::Exact).unwrap();
            let p = g.matmul(&d).unwrap().matmul(&g.inverse().unwrap()).unwrap();
            prop_assert!(p.is_idempotent());
            let trace = p.trace().to_usize().unwrap();
            prop_assert_eq!(p.rank(), trace);
        }
    }
}
