//! The envelope algebra on `V (x) V*` and the two relation families that
//! representations of it must satisfy.
//!
//! The weak-envelope relations cut out a finitely presented algebra that is
//! never materialized here; it exists only as the predicate
//! [`check_weak_relations`] on candidate representations. The envelope
//! itself is finite-dimensional and its product table is built explicitly.

use crate::error::{Error, Result};
use crate::p_algebra::PAlgebra;
use crate::representations::EnRepresentation;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// The `n^2`-dimensional envelope algebra of a P-algebra, with basis
/// `e_i^j = e_i (x) e^j` flattened to `i * n + j` and the product
/// `e_j^l e_i^k = sum_{t,r} c[i][j][t] s[r][k][l] e_t^r`.
#[derive(Clone, Debug)]
pub struct EnvelopeAlgebra {
    parent: PAlgebra,
    dim: usize,
    table: Tensor,
}

/// Flat basis index of `e_i^j`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// Which relation family a failure belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationFamily {
    /// The product-side weak relation, one instance per `(i, j, k)`.
    ProductRelation,
    /// The coproduct-side weak relation, one instance per `(i, j, k)`.
    CoproductRelation,
    /// The full envelope product law, one instance per `(i, j, k, l)`.
    EnvelopeProduct,
}

#[derive(Clone, Debug)]
pub struct RelationFailure {
    pub family: RelationFamily,
    pub indices: Vec<usize>,
}

/// Result of checking a relation family against a representation.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds the envelope of a valid P-algebra. Associativity of the product
/// table and the weak relations for the left regular representation are
/// theorems here, so violations abort loudly instead of returning errors.
pub fn envelope(p: &PAlgebra) -> EnvelopeAlgebra {
    let n = p.n();
    let dim = n * n;
    let backend = p.backend();
    let c = p.product();
    let s = p.coproduct();
    let mut table = Tensor::zeros(vec![dim, dim, dim], backend);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for t in 0..n {
                        let cf = c.get(&[i, j, t]);
                        if cf.is_zero() {
                            continue;
                        }
                        for r in 0..n {
                            let sf = s.get(&[r, k, l]);
                            if sf.is_zero() {
                                continue;
                            }
                            let x = pair_index(n, j, l);
                            let y = pair_index(n, i, k);
                            let z = pair_index(n, t, r);
                            let cur = table.get(&[x, y, z]).clone();
                            table.set(&[x, y, z], &cur + &(cf * sf));
                        }
                    }
                }
            }
        }
    }
    let env = EnvelopeAlgebra {
        parent: p.clone(),
        dim,
        table,
    };
    assert!(env.is_associative(), "envelope product must be associative");
    let regular = env.left_regular_representation();
    let weak = check_weak_relations(p, &regular).expect("shapes agree by construction");
    assert!(
        weak.passed(),
        "left regular representation must satisfy the weak relations"
    );
    env
}

impl EnvelopeAlgebra {
    pub fn parent(&self) -> &PAlgebra {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Structure constants: `table[x][y][z]` is the coefficient of basis
    /// element `z` in the product of `x` and `y`.
    pub fn table(&self) -> &Tensor {
        &self.table
    }

    pub fn structure_constant(&self, x: usize, y: usize, z: usize) -> &Scalar {
        self.table.get(&[x, y, z])
    }

    fn is_associative(&self) -> bool {
        let d = self.dim;
        let backend = self.table.backend();
        // nonzero structure constants per basis pair; products are sparse
        let nonzeros: Vec<Vec<Vec<(usize, Scalar)>>> = (0..d)
            .map(|x| {
                (0..d)
                    .map(|y| {
                        (0..d)
                            .filter_map(|z| {
                                let v = self.table.get(&[x, y, z]);
                                (!v.is_zero()).then(|| (z, v.clone()))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let zero = Scalar::zero(backend);
        let mut lhs = vec![zero.clone(); d];
        let mut rhs = vec![zero.clone(); d];
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    for slot in lhs.iter_mut().chain(rhs.iter_mut()) {
                        *slot = zero.clone();
                    }
                    for (w, c1) in &nonzeros[x][y] {
                        for (v, c2) in &nonzeros[*w][z] {
                            lhs[*v] = &lhs[*v] + &(c1 * c2);
                        }
                    }
                    for (w, c1) in &nonzeros[y][z] {
                        for (v, c2) in &nonzeros[x][*w] {
                            rhs[*v] = &rhs[*v] + &(c1 * c2);
                        }
                    }
                    if lhs.iter().zip(&rhs).any(|(a, b)| !a.approx_eq(b)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Left multiplication matrices on the envelope itself.
    pub fn left_regular_representation(&self) -> EnRepresentation {
        let d = self.dim;
        let backend = self.table.backend();
        let matrices = (0..d)
            .map(|x| {
                Tensor::from_fn(vec![d, d], backend, |idx| {
                    self.table.get(&[x, idx[1], idx[0]]).clone()
                })
            })
            .collect();
        EnRepresentation::from_matrices(self.parent.clone(), d, matrices)
            .expect("regular representation has matching shapes")
    }
}

fn check_rep_shapes(p: &PAlgebra, rho: &EnRepresentation) -> Result<()> {
    let n = p.n();
    if rho.parent().n() != n {
        return Err(Error::ShapeMismatch(
            "representation belongs to a different algebra".into(),
        ));
    }
    if rho.dim_w() > 0 && rho.matrices().len() != n * n {
        return Err(Error::ShapeMismatch(format!(
            "expected {} generator matrices, got {}",
            n * n,
            rho.matrices().len()
        )));
    }
    Ok(())
}

/// Checks both weak-envelope relation families as matrix identities on `W`.
pub fn check_weak_relations(p: &PAlgebra, rho: &EnRepresentation) -> Result<RelationReport> {
    check_rep_shapes(p, rho)?;
    let n = p.n();
    let mut report = RelationReport {
        checked: 0,
        failures: Vec::new(),
    };
    if rho.dim_w() == 0 {
        report.checked = 2 * n * n * n;
        return Ok(report);
    }
    let backend = p.backend();
    let w = rho.dim_w();
    let c = p.product();
    let s = p.coproduct();
    // pairwise products of the generator matrices, computed once
    let products = pairwise_products(rho);
    let mut acc = Accumulator::new(w * w, backend);

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // product side: sum_{r,t} c[r][t][k] rho(e_j^t) rho(e_i^r)
                //             = sum_p c[i][j][p] rho(e_p^k)
                acc.reset();
                for r in 0..n {
                    for t in 0..n {
                        let coeff = c.get(&[r, t, k]);
                        if !coeff.is_zero() {
                            let prod = &products[pair_index(n, j, t)][pair_index(n, i, r)];
                            acc.add_lhs(prod.data(), coeff);
                        }
                    }
                }
                for x in 0..n {
                    let coeff = c.get(&[i, j, x]);
                    if !coeff.is_zero() {
                        acc.add_rhs(rho.matrix(pair_index(n, x, k)).data(), coeff);
                    }
                }
                report.checked += 1;
                if !acc.sides_equal() {
                    report.failures.push(RelationFailure {
                        family: RelationFamily::ProductRelation,
                        indices: vec![i, j, k],
                    });
                }

                // coproduct side: sum_{r,t} s[i][r][t] rho(e_t^k) rho(e_r^j)
                //               = sum_p s[p][j][k] rho(e_i^p)
                acc.reset();
                for r in 0..n {
                    for t in 0..n {
                        let coeff = s.get(&[i, r, t]);
                        if !coeff.is_zero() {
                            let prod = &products[pair_index(n, t, k)][pair_index(n, r, j)];
                            acc.add_lhs(prod.data(), coeff);
                        }
                    }
                }
                for x in 0..n {
                    let coeff = s.get(&[x, j, k]);
                    if !coeff.is_zero() {
                        acc.add_rhs(rho.matrix(pair_index(n, i, x)).data(), coeff);
                    }
                }
                report.checked += 1;
                if !acc.sides_equal() {
                    report.failures.push(RelationFailure {
                        family: RelationFamily::CoproductRelation,
                        indices: vec![i, j, k],
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Scratch buffers for comparing two linear combinations of matrices
/// without allocating per term.
struct Accumulator {
    zero: Scalar,
    lhs: Vec<Scalar>,
    rhs: Vec<Scalar>,
}

impl Accumulator {
    fn new(len: usize, backend: crate::scalar::Backend) -> Self {
        let zero = Scalar::zero(backend);
        Accumulator {
            lhs: vec![zero.clone(); len],
            rhs: vec![zero.clone(); len],
            zero,
        }
    }

    fn reset(&mut self) {
        for slot in self.lhs.iter_mut().chain(self.rhs.iter_mut()) {
            *slot = self.zero.clone();
        }
    }

    fn add_into(acc: &mut [Scalar], data: &[Scalar], coeff: &Scalar) {
        if coeff.is_exact_one() {
            for (slot, v) in acc.iter_mut().zip(data) {
                if !v.is_zero() {
                    *slot = &*slot + v;
                }
            }
        } else {
            for (slot, v) in acc.iter_mut().zip(data) {
                if !v.is_zero() {
                    *slot = &*slot + &(coeff * v);
                }
            }
        }
    }

    fn add_lhs(&mut self, data: &[Scalar], coeff: &Scalar) {
        Self::add_into(&mut self.lhs, data, coeff);
    }

    fn add_rhs(&mut self, data: &[Scalar], coeff: &Scalar) {
        Self::add_into(&mut self.rhs, data, coeff);
    }

    fn sides_equal(&self) -> bool {
        self.lhs.iter().zip(&self.rhs).all(|(a, b)| a.approx_eq(b))
    }
}

/// Checks that `rho` respects the full envelope product, i.e. that it is a
/// representation of the envelope algebra and not merely of its weak
/// presentation.
pub fn check_envelope_relation(p: &PAlgebra, rho: &EnRepresentation) -> Result<RelationReport> {
    check_rep_shapes(p, rho)?;
    let n = p.n();
    let mut report = RelationReport {
        checked: 0,
        failures: Vec::new(),
    };
    if rho.dim_w() == 0 {
        report.checked = n * n * n * n;
        return Ok(report);
    }
    let backend = p.backend();
    let w = rho.dim_w();
    let c = p.product();
    let s = p.coproduct();
    let products = pairwise_products(rho);
    let mut acc = Accumulator::new(w * w, backend);

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    acc.reset();
                    acc.add_lhs(
                        products[pair_index(n, j, l)][pair_index(n, i, k)].data(),
                        &Scalar::one(backend),
                    );
                    for t in 0..n {
                        let cf = c.get(&[i, j, t]);
                        if cf.is_zero() {
                            continue;
                        }
                        for r in 0..n {
                            let sf = s.get(&[r, k, l]);
                            if sf.is_zero() {
                                continue;
                            }
                            acc.add_rhs(rho.matrix(pair_index(n, t, r)).data(), &(cf * sf));
                        }
                    }
                    report.checked += 1;
                    if !acc.sides_equal() {
                        report.failures.push(RelationFailure {
                            family: RelationFamily::EnvelopeProduct,
                            indices: vec![i, j, k, l],
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

fn pairwise_products(rho: &EnRepresentation) -> Vec<Vec<Tensor>> {
    let d = rho.matrices().len();
    (0..d)
        .map(|x| {
            (0..d)
                .map(|y| {
                    rho.matrix(x)
                        .matmul(rho.matrix(y))
                        .expect("square generators")
                })
                .collect()
        })
        .collect()
}
