#![allow(dead_code)] // each test binary uses a different slice of these helpers

//! Shared corpus of algebras produced by all three constructors, used by the
//! cross-module test suites.

use kproj_core::{
    enumerate_classes, example5_block, from_idempotent_basis, from_semisimple_data,
    from_zero_one_matrix, Backend, BasisMode, IdempotentBasis, PAlgebra, Scalar, SemisimpleData,
    Tensor, ZeroOneMatrix,
};

pub fn int_matrix(rows: &[Vec<i64>]) -> Tensor {
    Tensor::from_int_rows(rows, Backend::Exact).unwrap()
}

/// Four idempotent 2x2 matrices that span the matrix algebra: the identity,
/// a diagonal projector, and two rank-one projectors.
pub fn idempotent_spanning_quadruple() -> Vec<Tensor> {
    vec![
        Tensor::identity(2, Backend::Exact),
        int_matrix(&[vec![1, 0], vec![0, 0]]),
        int_matrix(&[vec![0, 0], vec![1, 1]]),
        int_matrix(&[vec![1, 1], vec![0, 0]]),
    ]
}

/// All class representatives of nonsingular (0,1)-matrices up to size 3,
/// plus a few size-4 picks.
pub fn zero_one_corpus_matrices() -> Vec<ZeroOneMatrix> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for cls in enumerate_classes(n).unwrap() {
            out.push(cls.representative);
        }
    }
    out.push(ZeroOneMatrix::identity(4));
    out.push(
        ZeroOneMatrix::from_rows(&[
            vec![1, 1, 1, 1],
            vec![0, 1, 1, 1],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 1],
        ])
        .unwrap(),
    );
    out.push(
        ZeroOneMatrix::from_rows(&[
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 1],
        ])
        .unwrap(),
    );
    out
}

/// Semisimple data sets of small total dimension covering the commutative
/// specialization, single matrix blocks, and the two mixed shapes.
pub fn semisimple_corpus() -> Vec<SemisimpleData> {
    let mut out = Vec::new();
    // all-one-dimensional data from the small (0,1)-matrices
    for n in 2..=3 {
        for cls in enumerate_classes(n).unwrap() {
            let q = cls.representative.to_tensor(Backend::Exact);
            out.push(SemisimpleData::commutative(&q).unwrap());
        }
    }
    // single 2x2-block data from completed two-block families
    let pairs = [
        (
            int_matrix(&[vec![1, 2], vec![3, 4]]),
            int_matrix(&[vec![1, 1], vec![0, 1]]),
        ),
        (
            int_matrix(&[vec![0, 1], vec![1, 1]]),
            int_matrix(&[vec![2, 1], vec![1, 1]]),
        ),
    ];
    for (a, b) in pairs {
        let blocks = example5_block(&a, &b).unwrap();
        assert!(blocks.is_basis());
        out.push(SemisimpleData::single_block(2, 2, blocks.block_matrix()).unwrap());
    }
    // one 2-dimensional coproduct factor against four 1-dimensional
    // product factors, and the transposed shape
    let quadruple = idempotent_spanning_quadruple();
    let mut blocks_l2 = vec![Vec::new(); 1];
    for e in &quadruple {
        blocks_l2[0].push(Tensor::from_fn(vec![2, 2, 1, 1], Backend::Exact, |idx| {
            e.get(&[idx[0], idx[1]]).clone()
        }));
    }
    out.push(SemisimpleData::new(vec![2], vec![1, 1, 1, 1], blocks_l2).unwrap());

    let blocks_m2: Vec<Vec<Tensor>> = quadruple
        .iter()
        .map(|e| {
            vec![Tensor::from_fn(vec![1, 1, 2, 2], Backend::Exact, |idx| {
                e.get(&[idx[2], idx[3]]).clone()
            })]
        })
        .collect();
    out.push(SemisimpleData::new(vec![1, 1, 1, 1], vec![2], blocks_m2).unwrap());
    out
}

pub fn idempotent_basis_corpus() -> Vec<IdempotentBasis> {
    let mut out = Vec::new();
    out.push(
        IdempotentBasis::new(
            1,
            vec![Tensor::identity(1, Backend::Exact)],
            BasisMode::Example3,
        )
        .unwrap(),
    );
    out.push(
        IdempotentBasis::new(2, idempotent_spanning_quadruple(), BasisMode::Example3).unwrap(),
    );
    let pairs = [
        (
            int_matrix(&[vec![1, 2], vec![3, 4]]),
            int_matrix(&[vec![1, 1], vec![0, 1]]),
        ),
        (
            int_matrix(&[vec![2, 0], vec![1, 3]]),
            int_matrix(&[vec![1, 2], vec![1, 1]]),
        ),
    ];
    for (a, b) in pairs {
        out.push(example5_block(&a, &b).unwrap().into_basis().unwrap());
    }
    out
}

/// The full corpus: every instance all three constructors produce from the
/// inputs above. At least thirty algebras, all of dimension four or less.
pub fn corpus() -> Vec<PAlgebra> {
    let mut out = Vec::new();
    for r in zero_one_corpus_matrices() {
        out.push(from_zero_one_matrix(&r).unwrap());
    }
    for d in semisimple_corpus() {
        out.push(from_semisimple_data(&d).unwrap());
    }
    for b in idempotent_basis_corpus() {
        out.push(from_idempotent_basis(&b).unwrap());
    }
    out
}

/// Small deterministic rational generator for property-style sweeps. The
/// state sits in a cell so it can feed tensor builders, which take `Fn`.
pub struct SmallRationals {
    state: std::cell::Cell<u64>,
}

impl SmallRationals {
    pub fn new(seed: u64) -> Self {
        SmallRationals {
            state: std::cell::Cell::new(
                seed.wrapping_mul(2862933555777941757)
                    .wrapping_add(3037000493),
            ),
        }
    }

    pub fn next_u64(&self) -> u64 {
        // xorshift64*
        let mut s = self.state.get();
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        self.state.set(s);
        s.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn int_in(&self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }

    pub fn scalar(&self) -> Scalar {
        let num = self.int_in(-3, 3);
        let den = self.int_in(1, 3);
        Scalar::from_ratio(num, den)
    }
}
