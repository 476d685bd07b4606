//! The three recipes that produce P-algebras: nonsingular (0,1)-matrices,
//! semisimple block data with projector blocks, and idempotent bases of
//! matrix algebras.

use crate::error::{Error, Result};
use crate::linalg::SpanBasis;
use crate::p_algebra::{ConstructionMeta, PAlgebra};
use crate::scalar::{Backend, Scalar};
use crate::tensor::Tensor;

/// A square matrix with entries in `{0, 1}`.
///
/// Nonsingularity over the rationals is required by the P-algebra recipe but
/// not by canonicalization, so it is checked by the consumers, not here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroOneMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl ZeroOneMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("matrix must be square".into()));
        }
        let entries: Vec<u8> = rows.iter().flatten().copied().collect();
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::NotZeroOne);
        }
        if n == 0 {
            return Err(Error::ShapeMismatch("empty matrix".into()));
        }
        Ok(ZeroOneMatrix { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n).map(|k| u8::from(k / n == k % n)).collect();
        ZeroOneMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.n)
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn to_tensor(&self, backend: Backend) -> Tensor {
        Tensor::from_fn(vec![self.n, self.n], backend, |idx| {
            Scalar::from_int(i64::from(self.get(idx[0], idx[1])), backend)
        })
    }

    /// Nonsingular over the rationals.
    pub fn is_nonsingular(&self) -> bool {
        self.to_tensor(Backend::Exact).rank() == self.n
    }

    /// Row-major bitstring, e.g. `"1101"` for a 2x2 matrix.
    pub fn bitstring(&self) -> String {
        self.entries.iter().map(|&e| char::from(b'0' + e)).collect()
    }
}

/// Builds the P-algebra of a nonsingular (0,1)-matrix, expressed in the
/// basis where the product is diagonal. The coproduct comes from pushing the
/// group-like coproduct through the exact inverse of `r`.
pub fn from_zero_one_matrix(r: &ZeroOneMatrix) -> Result<PAlgebra> {
    if !r.is_nonsingular() {
        return Err(Error::SingularMatrix);
    }
    let n = r.n();
    let backend = Backend::Exact;
    let product = Tensor::from_fn(vec![n, n, n], backend, |idx| {
        if idx[0] == idx[1] && idx[0] == idx[2] {
            Scalar::one(backend)
        } else {
            Scalar::zero(backend)
        }
    });
    let r_tensor = r.to_tensor(backend);
    let r_inv = r_tensor.inverse()?;
    let coproduct = Tensor::from_fn(vec![n, n, n], backend, |idx| {
        let (b, p, q) = (idx[0], idx[1], idx[2]);
        let mut acc = Scalar::zero(backend);
        for alpha in 0..n {
            if r.get(alpha, p) == 1 && r.get(alpha, q) == 1 {
                acc = &acc + r_inv.get(&[b, alpha]);
            }
        }
        acc
    });
    Ok(PAlgebra::new(product, coproduct)?
        .with_meta(ConstructionMeta::ZeroOne { r: r.clone() })
        .with_label(format!("zero-one {}", r.bitstring())))
}

/// Classification data of a P-algebra with semisimple product and coproduct:
/// two families of space dimensions and, for each pair `(alpha, beta)`, the
/// coefficient block of the connecting isomorphism `Q`.
///
/// A block is stored as a rank-4 tensor of shape
/// `[l_dims[alpha], l_dims[alpha], m_dims[beta], m_dims[beta]]` whose
/// `[i][j][t][q]` entry is the coefficient of the `(t, q)` matrix unit of the
/// product side in the image of the `(i, j)` matrix unit of the coproduct
/// side.
#[derive(Clone, Debug)]
pub struct SemisimpleData {
    l_dims: Vec<usize>,
    m_dims: Vec<usize>,
    blocks: Vec<Vec<Tensor>>,
    backend: Backend,
}

impl SemisimpleData {
    pub fn new(l_dims: Vec<usize>, m_dims: Vec<usize>, blocks: Vec<Vec<Tensor>>) -> Result<Self> {
        if l_dims.is_empty() || m_dims.is_empty() {
            return Err(Error::DimensionMismatch("empty family of spaces".into()));
        }
        if l_dims.iter().chain(&m_dims).any(|&d| d == 0) {
            return Err(Error::DimensionMismatch("zero-dimensional space".into()));
        }
        if blocks.len() != l_dims.len() || blocks.iter().any(|row| row.len() != m_dims.len()) {
            return Err(Error::DimensionMismatch("block grid shape".into()));
        }
        let backend = blocks[0][0].backend();
        for (alpha, row) in blocks.iter().enumerate() {
            for (beta, block) in row.iter().enumerate() {
                let (k, m) = (l_dims[alpha], m_dims[beta]);
                if block.shape() != [k, k, m, m] {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({alpha}, {beta}) has shape {:?}, expected [{k}, {k}, {m}, {m}]",
                        block.shape()
                    )));
                }
                if block.backend() != backend {
                    return Err(Error::BackendMismatch);
                }
            }
        }
        Ok(SemisimpleData {
            l_dims,
            m_dims,
            blocks,
            backend,
        })
    }

    /// All-one-dimensional data from a square matrix of scalars; the
    /// (0,1)-matrix recipe is the special case with 0/1 entries.
    pub fn commutative(q: &Tensor) -> Result<Self> {
        if !q.is_square() {
            return Err(Error::ShapeMismatch("expected a square matrix".into()));
        }
        let n = q.rows();
        let blocks = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        Tensor::new(vec![1, 1, 1, 1], vec![q.get(&[a, b]).clone()])
                            .expect("1x1x1x1 block")
                    })
                    .collect()
            })
            .collect();
        SemisimpleData::new(vec![1; n], vec![1; n], blocks)
    }

    /// Single-block data from the rearranged block given as the square
    /// matrix on row index `(i, t)` and column index `(j, q)`.
    pub fn single_block(k: usize, m: usize, qbar: &Tensor) -> Result<Self> {
        if qbar.shape() != [k * m, k * m] {
            return Err(Error::ShapeMismatch("rearranged block shape".into()));
        }
        let block = Tensor::from_fn(vec![k, k, m, m], qbar.backend(), |idx| {
            let (i, j, t, q) = (idx[0], idx[1], idx[2], idx[3]);
            qbar.get(&[i * m + t, j * m + q]).clone()
        });
        SemisimpleData::new(vec![k], vec![m], vec![vec![block]])
    }

    pub fn l_dims(&self) -> &[usize] {
        &self.l_dims
    }

    pub fn m_dims(&self) -> &[usize] {
        &self.m_dims
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn block(&self, alpha: usize, beta: usize) -> &Tensor {
        &self.blocks[alpha][beta]
    }

    pub fn total_dim_coproduct_side(&self) -> usize {
        self.l_dims.iter().map(|&d| d * d).sum()
    }

    pub fn total_dim_product_side(&self) -> usize {
        self.m_dims.iter().map(|&d| d * d).sum()
    }

    fn l_offsets(&self) -> Vec<usize> {
        let mut offs = Vec::with_capacity(self.l_dims.len());
        let mut acc = 0;
        for &d in &self.l_dims {
            offs.push(acc);
            acc += d * d;
        }
        offs
    }

    fn m_offsets(&self) -> Vec<usize> {
        let mut offs = Vec::with_capacity(self.m_dims.len());
        let mut acc = 0;
        for &d in &self.m_dims {
            offs.push(acc);
            acc += d * d;
        }
        offs
    }

    /// The assembled map as a square matrix: rows run over the matrix units
    /// of the product side, columns over those of the coproduct side.
    pub fn q_matrix(&self) -> Result<Tensor> {
        let dim_l = self.total_dim_coproduct_side();
        let dim_m = self.total_dim_product_side();
        if dim_l != dim_m {
            return Err(Error::DimensionMismatch(format!(
                "dimension balance fails: {dim_l} vs {dim_m}"
            )));
        }
        let (l_offs, m_offs) = (self.l_offsets(), self.m_offsets());
        let mut q = Tensor::zeros(vec![dim_m, dim_l], self.backend);
        for (alpha, &k) in self.l_dims.iter().enumerate() {
            for (beta, &m) in self.m_dims.iter().enumerate() {
                let block = &self.blocks[alpha][beta];
                for i in 0..k {
                    for j in 0..k {
                        for t in 0..m {
                            for qq in 0..m {
                                q.set(
                                    &[m_offs[beta] + t * m + qq, l_offs[alpha] + i * k + j],
                                    block.get(&[i, j, t, qq]).clone(),
                                );
                            }
                        }
                    }
                }
            }
        }
        Ok(q)
    }

    /// The rearranged block `(alpha, beta)` as a square matrix; the recipe
    /// requires each of these to be idempotent.
    pub fn qbar(&self, alpha: usize, beta: usize) -> Tensor {
        let (k, m) = (self.l_dims[alpha], self.m_dims[beta]);
        let block = &self.blocks[alpha][beta];
        Tensor::from_fn(vec![k * m, k * m], self.backend, |idx| {
            let (i, t) = (idx[0] / m, idx[0] % m);
            let (j, q) = (idx[1] / m, idx[1] % m);
            block.get(&[i, j, t, q]).clone()
        })
    }

    pub fn qbar_trace(&self, alpha: usize, beta: usize) -> Scalar {
        self.qbar(alpha, beta).trace()
    }
}

/// Builds the P-algebra classified by semisimple data: the product is
/// block-matrix multiplication on the product side, the coproduct is the
/// matrix comultiplication of the coproduct side transported through `Q`.
///
/// Fails with `QBarNotProjector` before constructing anything when some
/// rearranged block is not idempotent; zero blocks are fine.
pub fn from_semisimple_data(d: &SemisimpleData) -> Result<PAlgebra> {
    let dim = d.total_dim_product_side();
    if dim != d.total_dim_coproduct_side() {
        return Err(Error::DimensionMismatch(format!(
            "dimension balance fails: {} vs {}",
            d.total_dim_coproduct_side(),
            dim
        )));
    }
    let q = d.q_matrix()?;
    let q_inv = q.inverse().map_err(|_| Error::QNotInvertible)?;
    for alpha in 0..d.l_dims.len() {
        for beta in 0..d.m_dims.len() {
            if !d.qbar(alpha, beta).is_idempotent() {
                return Err(Error::QBarNotProjector { alpha, beta });
            }
        }
    }

    let backend = d.backend;
    let m_offs = d.m_offsets();
    let l_offs = d.l_offsets();

    // block-diagonal matrix-unit product on the product side
    let mut product = Tensor::zeros(vec![dim, dim, dim], backend);
    for (beta, &m) in d.m_dims.iter().enumerate() {
        let off = m_offs[beta];
        for t in 0..m {
            for qq in 0..m {
                for s in 0..m {
                    // unit (t, qq) times unit (qq, s) gives unit (t, s)
                    product.set(
                        &[off + t * m + qq, off + qq * m + s, off + t * m + s],
                        Scalar::one(backend),
                    );
                }
            }
        }
    }

    // coproduct: comultiplication of the coproduct-side units, pushed to the
    // product-side basis through q and back through its inverse
    let mut coproduct = Tensor::zeros(vec![dim, dim, dim], backend);
    for u in 0..dim {
        for (alpha, &k) in d.l_dims.iter().enumerate() {
            for i in 0..k {
                for j in 0..k {
                    let w = l_offs[alpha] + i * k + j;
                    let coeff = q_inv.get(&[w, u]);
                    if coeff.is_zero() {
                        continue;
                    }
                    for p in 0..k {
                        let w1 = l_offs[alpha] + i * k + p;
                        let w2 = l_offs[alpha] + p * k + j;
                        for v1 in 0..dim {
                            let f1 = q.get(&[v1, w1]);
                            if f1.is_zero() {
                                continue;
                            }
                            for v2 in 0..dim {
                                let f2 = q.get(&[v2, w2]);
                                if f2.is_zero() {
                                    continue;
                                }
                                let add = &(coeff * f1) * f2;
                                let cur = coproduct.get(&[u, v1, v2]).clone();
                                coproduct.set(&[u, v1, v2], &cur + &add);
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(PAlgebra::new(product, coproduct)?
        .with_meta(ConstructionMeta::Semisimple { data: d.clone() })
        .with_label(format!("semisimple L={:?} M={:?}", d.l_dims, d.m_dims)))
}

/// Flat list of idempotents, or a pair-indexed family whose block matrix is
/// idempotent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisMode {
    /// Each basis matrix is itself idempotent; the coproduct is group-like.
    Example3,
    /// Matrices indexed by pairs `(i, j)`; the block matrix `E = (e_ij)`
    /// satisfies `E^2 = E` and the coproduct is the matrix comultiplication.
    Example4,
}

/// A basis of the full matrix algebra together with the mode-specific
/// idempotency data, validated on construction.
#[derive(Clone, Debug)]
pub struct IdempotentBasis {
    n: usize,
    mats: Vec<Tensor>,
    mode: BasisMode,
}

impl IdempotentBasis {
    pub fn new(n: usize, mats: Vec<Tensor>, mode: BasisMode) -> Result<Self> {
        if mats.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "need {} matrices, got {}",
                n * n,
                mats.len()
            )));
        }
        let backend = mats[0].backend();
        for m in &mats {
            if m.shape() != [n, n] {
                return Err(Error::ShapeMismatch("basis matrices must be n x n".into()));
            }
            if m.backend() != backend {
                return Err(Error::BackendMismatch);
            }
        }
        let mut span = SpanBasis::new(n * n, backend);
        for m in &mats {
            if !span.insert(m.to_vec()) {
                return Err(Error::NotABasis);
            }
        }
        match mode {
            BasisMode::Example3 => {
                for (index, m) in mats.iter().enumerate() {
                    if !m.is_idempotent() {
                        return Err(Error::NotIdempotent { index });
                    }
                }
            }
            BasisMode::Example4 => {
                let e = assemble_block_matrix(&mats, n)?;
                if !e.is_idempotent() {
                    return Err(Error::BlockNotIdempotent);
                }
            }
        }
        Ok(IdempotentBasis { n, mats, mode })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> BasisMode {
        self.mode
    }

    pub fn matrices(&self) -> &[Tensor] {
        &self.mats
    }

    pub fn backend(&self) -> Backend {
        self.mats[0].backend()
    }
}

/// Assembles the `nk x nk` block matrix whose `(i, j)` block is
/// `blocks[i * n + j]`.
pub fn assemble_block_matrix(blocks: &[Tensor], n: usize) -> Result<Tensor> {
    if blocks.len() != n * n {
        return Err(Error::ShapeMismatch("wrong number of blocks".into()));
    }
    let k = blocks[0].shape()[0];
    for b in blocks {
        if b.shape() != [k, k] {
            return Err(Error::ShapeMismatch(
                "blocks must be square of equal size".into(),
            ));
        }
    }
    let backend = blocks[0].backend();
    Ok(Tensor::from_fn(vec![n * k, n * k], backend, |idx| {
        let (i, t) = (idx[0] / k, idx[0] % k);
        let (j, q) = (idx[1] / k, idx[1] % k);
        blocks[i * n + j].get(&[t, q]).clone()
    }))
}

/// Builds the P-algebra of an idempotent basis: the product is matrix
/// multiplication re-expressed in the given basis by one exact linear solve,
/// the coproduct is group-like (flat mode) or the matrix comultiplication
/// (pair mode).
pub fn from_idempotent_basis(b: &IdempotentBasis) -> Result<PAlgebra> {
    let n = b.n;
    let dim = n * n;
    let backend = b.backend();

    // columns of `basis` are the vectorized basis matrices
    let mut basis = Tensor::zeros(vec![dim, dim], backend);
    for (col, m) in b.mats.iter().enumerate() {
        for (row, v) in m.to_vec().into_iter().enumerate() {
            basis.set(&[row, col], v);
        }
    }
    // right-hand sides: vectorized products of all basis pairs
    let mut rhs = Tensor::zeros(vec![dim, dim * dim], backend);
    for u in 0..dim {
        for v in 0..dim {
            let prod = b.mats[u].matmul(&b.mats[v])?;
            for (row, val) in prod.to_vec().into_iter().enumerate() {
                rhs.set(&[row, u * dim + v], val);
            }
        }
    }
    let coeffs = basis.solve(&rhs).map_err(|_| Error::NotABasis)?;
    let product = Tensor::from_fn(vec![dim, dim, dim], backend, |idx| {
        coeffs.get(&[idx[2], idx[0] * dim + idx[1]]).clone()
    });

    let coproduct = match b.mode {
        BasisMode::Example3 => Tensor::from_fn(vec![dim, dim, dim], backend, |idx| {
            if idx[0] == idx[1] && idx[0] == idx[2] {
                Scalar::one(backend)
            } else {
                Scalar::zero(backend)
            }
        }),
        BasisMode::Example4 => Tensor::from_fn(vec![dim, dim, dim], backend, |idx| {
            let (i, j) = (idx[0] / n, idx[0] % n);
            let (a, bb) = (idx[1] / n, idx[1] % n);
            let (c, dd) = (idx[2] / n, idx[2] % n);
            if a == i && dd == j && bb == c {
                Scalar::one(backend)
            } else {
                Scalar::zero(backend)
            }
        }),
    };

    Ok(PAlgebra::new(product, coproduct)?
        .with_meta(ConstructionMeta::IdempotentBasis {
            mode: b.mode,
            mats: b.mats.to_vec(),
        })
        .with_label(match b.mode {
            BasisMode::Example3 => format!("idempotent basis (flat) on Mat_{n}"),
            BasisMode::Example4 => format!("idempotent basis (block) on Mat_{n}"),
        }))
}

/// The completed block family of the two-block recipe, with the basis
/// condition recorded rather than silently assumed: special choices of
/// `(a, b)` (for instance `b` the identity, which forces `d = 1 - a`) give
/// all four identities but a degenerate span.
#[derive(Clone, Debug)]
pub struct Example5Blocks {
    blocks: Vec<Tensor>,
    block_matrix: Tensor,
    is_basis: bool,
}

impl Example5Blocks {
    /// The four blocks in block-matrix order.
    pub fn blocks(&self) -> &[Tensor] {
        &self.blocks
    }

    /// The assembled idempotent 4x4 matrix.
    pub fn block_matrix(&self) -> &Tensor {
        &self.block_matrix
    }

    /// Whether the four blocks span the 2x2 matrix algebra.
    pub fn is_basis(&self) -> bool {
        self.is_basis
    }

    /// Converts into a pair-indexed idempotent basis; fails when the span
    /// is degenerate.
    pub fn into_basis(self) -> Result<IdempotentBasis> {
        if !self.is_basis {
            return Err(Error::NotABasis);
        }
        IdempotentBasis::new(2, self.blocks, BasisMode::Example4)
    }
}

/// Completes `(a, b)` with invertible `b` to the block matrix
/// `E = [[a, b], [c, d]]` with `d = 1 - b^-1 a b` and `c = b^-1 a (1 - a)`,
/// verifying `E^2 = E`, trace 2 and rank 2.
pub fn example5_block(a: &Tensor, b: &Tensor) -> Result<Example5Blocks> {
    if a.shape() != [2, 2] || b.shape() != [2, 2] {
        return Err(Error::ShapeMismatch("blocks must be 2 x 2".into()));
    }
    if a.backend() != b.backend() {
        return Err(Error::BackendMismatch);
    }
    let backend = a.backend();
    let b_inv = b.inverse().map_err(|_| Error::BNotInvertible)?;
    let identity = Tensor::identity(2, backend);
    let one_minus_a = identity.sub(a)?;
    let c = b_inv.matmul(a)?.matmul(&one_minus_a)?;
    let d = identity.sub(&b_inv.matmul(a)?.matmul(b)?)?;

    let blocks = vec![a.clone(), b.clone(), c, d];
    let e = assemble_block_matrix(&blocks, 2)?;
    if !e.is_idempotent() {
        return Err(Error::BlockNotIdempotent);
    }
    debug_assert!(e.trace().approx_eq(&Scalar::from_int(2, backend)));
    debug_assert_eq!(e.rank(), 2);

    let mut span = SpanBasis::new(4, backend);
    let is_basis = blocks.iter().all(|m| span.insert(m.to_vec()));
    Ok(Example5Blocks {
        blocks,
        block_matrix: e,
        is_basis,
    })
}
