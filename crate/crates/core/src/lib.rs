//! Exact-arithmetic computational algebra for P-algebras and the projectors
//! they generate.
//!
//! A P-algebra is a finite-dimensional vector space carrying an associative
//! product and a coassociative coproduct whose composition is the identity.
//! This crate constructs such algebras from several recipes ((0,1)-matrices,
//! semisimple block data, idempotent matrix bases), builds their envelope
//! algebras and representations, assembles the induced projectors
//! `P: W (x) V -> V (x) W`, decides perfectness, computes the trace
//! invariants `tr(P_N)` by three independent routes, and classifies
//! nonsingular (0,1)-matrices up to independent row and column permutations.
//!
//! Everything defaults to exact rational arithmetic; a complex float backend
//! with an explicit tolerance covers continuous families with irrational
//! parameters.

// explicit index loops mirror the tensor index conventions throughout
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod constructions;
pub mod envelope;
pub mod error;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod invariants;
mod linalg;
pub mod p_algebra;
pub mod representations;
pub mod scalar;
pub mod tensor;

pub use classify::{
    canonical_form, class_invariants, count_nonsingular, enumerate_classes,
    enumerate_classes_with_limit, ClassInvariants, MatrixClass, DEFAULT_ENUM_LIMIT,
};
pub use constructions::{
    assemble_block_matrix, example5_block, from_idempotent_basis, from_semisimple_data,
    from_zero_one_matrix, BasisMode, Example5Blocks, IdempotentBasis, SemisimpleData,
    ZeroOneMatrix,
};
pub use envelope::{
    check_envelope_relation, check_weak_relations, envelope, EnvelopeAlgebra, RelationReport,
};
pub use error::{Diagram, Error, Relation, Result};
pub use invariants::{
    build_p_n, trace_p_n_direct, trace_p_n_network, trace_via_transfer,
    transfer_matrix_commutative, transfer_matrix_semisimple, TransferMatrix,
};
pub use p_algebra::{verify_axioms, AxiomReport, ConstructionMeta, PAlgebra};
pub use representations::{
    build_k_projector, invariant_subspace_witness_dim, is_irreducible_action_on_v, is_perfect,
    rep_from_multiplicities_commutative, rep_from_multiplicities_semisimple,
    tensor_square_decomposition, EnRepresentation, KProjector, MultMatrix, PerfectReport,
    SplitReport,
};
pub use scalar::{Backend, Scalar, DEFAULT_EPSILON};
pub use tensor::Tensor;

/// Default upper bound on the entry count of any materialized tensor.
pub const DEFAULT_CAP: usize = 1_000_000;
