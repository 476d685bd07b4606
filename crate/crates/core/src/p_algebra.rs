//! The central type: a vector space with an associative product, a
//! coassociative coproduct, and product-after-coproduct equal to the
//! identity, stored as a pair of rank-3 structure-constant tensors.

use crate::constructions::{SemisimpleData, ZeroOneMatrix};
use crate::error::{Error, Relation, Result};
use crate::scalar::{Backend, Scalar};
use crate::tensor::Tensor;

/// How a P-algebra was constructed; carried as metadata so representation
/// and transfer-matrix machinery can find the data they need.
#[derive(Clone, Debug)]
pub enum ConstructionMeta {
    /// Basis data of the (0,1)-matrix recipe: the algebra is expressed in the
    /// f-basis (diagonal product) and `r` relates it to the group-like basis.
    ZeroOne { r: ZeroOneMatrix },
    /// Block data of the semisimple recipe; the algebra is expressed in the
    /// matrix-unit basis of the product side.
    Semisimple { data: SemisimpleData },
    /// The idempotent-basis recipes keep their input matrices around for
    /// serialization only.
    IdempotentBasis {
        mode: crate::constructions::BasisMode,
        mats: Vec<Tensor>,
    },
}

/// A validated P-algebra: dimension `n`, product tensor `c` with
/// `c[i][j][k]` the coefficient of basis vector `k` in the product of `i`
/// and `j`, and coproduct tensor `s` with `s[i][j][k]` the coefficient of
/// the `j (x) k` basis tensor in the coproduct of `i`.
#[derive(Clone, Debug)]
pub struct PAlgebra {
    n: usize,
    product: Tensor,
    coproduct: Tensor,
    label: Option<String>,
    meta: Option<ConstructionMeta>,
}

/// Outcome of checking one of the three structure-constant relations.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub relation: Relation,
    pub passed: bool,
    pub witness: Option<AxiomWitness>,
}

/// First violating index tuple (lexicographic, 0-based) with both sides.
#[derive(Clone, Debug)]
pub struct AxiomWitness {
    pub indices: Vec<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Per-relation verification report.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub relations: Vec<RelationCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&RelationCheck> {
        self.relations.iter().find(|r| !r.passed)
    }
}

fn check_shapes(c: &Tensor, s: &Tensor) -> Result<usize> {
    if c.ndim() != 3 || s.ndim() != 3 {
        return Err(Error::ShapeMismatch(
            "structure tensors must have rank 3".into(),
        ));
    }
    let n = c.shape()[0];
    if c.shape() != [n, n, n] || s.shape() != [n, n, n] {
        return Err(Error::ShapeMismatch(format!(
            "structure tensors must be cubic of equal dimension, got {:?} and {:?}",
            c.shape(),
            s.shape()
        )));
    }
    if c.backend() != s.backend() {
        return Err(Error::BackendMismatch);
    }
    Ok(n)
}

/// Checks the three defining relations on a candidate tensor pair and
/// reports each with its first witness in lexicographic index order.
pub fn verify_axioms(c: &Tensor, s: &Tensor) -> Result<AxiomReport> {
    let n = check_shapes(c, s)?;
    let backend = c.backend();

    let mut associativity = RelationCheck {
        relation: Relation::Associativity,
        passed: true,
        witness: None,
    };
    'assoc: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for t in 0..n {
                    let mut lhs = Scalar::zero(backend);
                    let mut rhs = Scalar::zero(backend);
                    for r in 0..n {
                        lhs = &lhs + &(c.get(&[i, j, r]) * c.get(&[r, k, t]));
                        rhs = &rhs + &(c.get(&[i, r, t]) * c.get(&[j, k, r]));
                    }
                    if !lhs.approx_eq(&rhs) {
                        associativity.passed = false;
                        associativity.witness = Some(AxiomWitness {
                            indices: vec![i, j, k, t],
                            lhs,
                            rhs,
                        });
                        break 'assoc;
                    }
                }
            }
        }
    }

    let mut coassociativity = RelationCheck {
        relation: Relation::Coassociativity,
        passed: true,
        witness: None,
    };
    'coassoc: for t in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut lhs = Scalar::zero(backend);
                    let mut rhs = Scalar::zero(backend);
                    for r in 0..n {
                        lhs = &lhs + &(s.get(&[t, i, r]) * s.get(&[r, j, k]));
                        rhs = &rhs + &(s.get(&[r, i, j]) * s.get(&[t, r, k]));
                    }
                    if !lhs.approx_eq(&rhs) {
                        coassociativity.passed = false;
                        coassociativity.witness = Some(AxiomWitness {
                            indices: vec![t, i, j, k],
                            lhs,
                            rhs,
                        });
                        break 'coassoc;
                    }
                }
            }
        }
    }

    let mut section = RelationCheck {
        relation: Relation::SectionIdentity,
        passed: true,
        witness: None,
    };
    'section: for i in 0..n {
        for j in 0..n {
            let mut lhs = Scalar::zero(backend);
            for r in 0..n {
                for t in 0..n {
                    lhs = &lhs + &(s.get(&[i, r, t]) * c.get(&[r, t, j]));
                }
            }
            let rhs = if i == j {
                Scalar::one(backend)
            } else {
                Scalar::zero(backend)
            };
            if !lhs.approx_eq(&rhs) {
                section.passed = false;
                section.witness = Some(AxiomWitness {
                    indices: vec![i, j],
                    lhs,
                    rhs,
                });
                break 'section;
            }
        }
    }

    Ok(AxiomReport {
        relations: vec![associativity, coassociativity, section],
    })
}

impl PAlgebra {
    /// Validating constructor: all three relations are checked eagerly.
    pub fn new(product: Tensor, coproduct: Tensor) -> Result<Self> {
        let n = check_shapes(&product, &coproduct)?;
        let report = verify_axioms(&product, &coproduct)?;
        if let Some(fail) = report.first_failure() {
            let w = fail
                .witness
                .as_ref()
                .expect("failed relation carries a witness");
            return Err(Error::AxiomViolation {
                relation: fail.relation,
                witness: w.indices.clone(),
                lhs: w.lhs.to_string(),
                rhs: w.rhs.to_string(),
            });
        }
        Ok(PAlgebra {
            n,
            product,
            coproduct,
            label: None,
            meta: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub(crate) fn with_meta(mut self, meta: ConstructionMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> Backend {
        self.product.backend()
    }

    pub fn product(&self) -> &Tensor {
        &self.product
    }

    pub fn coproduct(&self) -> &Tensor {
        &self.coproduct
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn meta(&self) -> Option<&ConstructionMeta> {
        self.meta.as_ref()
    }

    pub fn set_meta(&mut self, meta: Option<ConstructionMeta>) {
        self.meta = meta;
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    /// The product as the `n x n^2` matrix taking `e_i (x) e_j` to the basis.
    pub fn mu_matrix(&self) -> Tensor {
        let n = self.n;
        Tensor::from_fn(vec![n, n * n], self.backend(), |idx| {
            let (k, ij) = (idx[0], idx[1]);
            self.product.get(&[ij / n, ij % n, k]).clone()
        })
    }

    /// The coproduct as the `n^2 x n` matrix.
    pub fn lambda_matrix(&self) -> Tensor {
        let n = self.n;
        Tensor::from_fn(vec![n * n, n], self.backend(), |idx| {
            let (jk, i) = (idx[0], idx[1]);
            self.coproduct.get(&[i, jk / n, jk % n]).clone()
        })
    }

    /// The matrix of coproduct-after-product on `V (x) V`. Idempotent for
    /// every valid P-algebra, with trace equal to the dimension.
    pub fn mu_lambda_projector(&self) -> Tensor {
        let proj = self
            .lambda_matrix()
            .matmul(&self.mu_matrix())
            .expect("shapes agree by construction");
        debug_assert!(
            proj.is_idempotent(),
            "coproduct-after-product must be idempotent"
        );
        proj
    }

    /// Structure tensors of the opposite product on `V` and of the opposite
    /// dual coproduct on the dual space; both are associative.
    pub fn opposite_dual(&self) -> (Tensor, Tensor) {
        let n = self.n;
        let opposite_product = Tensor::from_fn(vec![n, n, n], self.backend(), |idx| {
            self.product.get(&[idx[1], idx[0], idx[2]]).clone()
        });
        // the dual coproduct multiplies dual vectors with constants
        // d[j][k][i] = s[i][j][k]; its opposite swaps the first two slots
        let opposite_dual_product = Tensor::from_fn(vec![n, n, n], self.backend(), |idx| {
            self.coproduct.get(&[idx[2], idx[1], idx[0]]).clone()
        });
        debug_assert!(is_associative(&opposite_product));
        debug_assert!(is_associative(&opposite_dual_product));
        (opposite_product, opposite_dual_product)
    }

    /// The same structure with the roles of product and coproduct swapped
    /// onto the dual space; valid exactly when `self` is.
    pub fn dual(&self) -> Result<PAlgebra> {
        let n = self.n;
        let product = Tensor::from_fn(vec![n, n, n], self.backend(), |idx| {
            self.coproduct.get(&[idx[2], idx[0], idx[1]]).clone()
        });
        let coproduct = Tensor::from_fn(vec![n, n, n], self.backend(), |idx| {
            self.product.get(&[idx[1], idx[2], idx[0]]).clone()
        });
        PAlgebra::new(product, coproduct)
    }

    /// Re-expresses the algebra in the basis `e'_a = sum_t u[a][t] e_t`.
    pub fn change_basis(&self, u: &Tensor) -> Result<PAlgebra> {
        let n = self.n;
        if u.shape() != [n, n] {
            return Err(Error::ShapeMismatch("basis-change matrix shape".into()));
        }
        let uinv = u.inverse()?;
        let backend = self.backend();
        let product = Tensor::from_fn(vec![n, n, n], backend, |idx| {
            let (a, b, k) = (idx[0], idx[1], idx[2]);
            let mut acc = Scalar::zero(backend);
            for i in 0..n {
                for j in 0..n {
                    for t in 0..n {
                        acc = &acc
                            + &(&(u.get(&[a, i]) * u.get(&[b, j]))
                                * &(self.product.get(&[i, j, t]) * uinv.get(&[t, k])));
                    }
                }
            }
            acc
        });
        let coproduct = Tensor::from_fn(vec![n, n, n], backend, |idx| {
            let (a, b, k) = (idx[0], idx[1], idx[2]);
            let mut acc = Scalar::zero(backend);
            for i in 0..n {
                for j in 0..n {
                    for t in 0..n {
                        acc = &acc
                            + &(&(u.get(&[a, i]) * self.coproduct.get(&[i, j, t]))
                                * &(uinv.get(&[j, b]) * uinv.get(&[t, k])));
                    }
                }
            }
            acc
        });
        PAlgebra::new(product, coproduct)
    }
}

fn is_associative(c: &Tensor) -> bool {
    let n = c.shape()[0];
    let backend = c.backend();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for t in 0..n {
                    let mut lhs = Scalar::zero(backend);
                    let mut rhs = Scalar::zero(backend);
                    for r in 0..n {
                        lhs = &lhs + &(c.get(&[i, j, r]) * c.get(&[r, k, t]));
                        rhs = &rhs + &(c.get(&[i, r, t]) * c.get(&[j, k, r]));
                    }
                    if !lhs.approx_eq(&rhs) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
