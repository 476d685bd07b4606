//! Crate-wide error type.

use thiserror::Error;

/// Which of the three structure-constant relations failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Associativity,
    Coassociativity,
    SectionIdentity,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Relation::Associativity => "associativity",
            Relation::Coassociativity => "coassociativity",
            Relation::SectionIdentity => "section identity",
        };
        f.write_str(name)
    }
}

/// Which commuting-diagram identity failed for an assembled projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagram {
    /// `(mu x 1) . (1 x P) . (P x 1) = P . (1 x mu)` on `W (x) V (x) V`.
    ProductSquare,
    /// `(1 x P) . (P x 1) . (1 x lambda) = (lambda x 1) . P` on `W (x) V`.
    CoproductSquare,
}

impl std::fmt::Display for Diagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Diagram::ProductSquare => "product diagram",
            Diagram::CoproductSquare => "coproduct diagram",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("scalar backend mismatch")]
    BackendMismatch,

    #[error("axiom violation ({relation}) at indices {witness:?}: lhs = {lhs}, rhs = {rhs}")]
    AxiomViolation {
        relation: Relation,
        witness: Vec<usize>,
        lhs: String,
        rhs: String,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix entries must all be 0 or 1")]
    NotZeroOne,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("assembled Q map is not invertible")]
    QNotInvertible,

    #[error("rearranged block ({alpha}, {beta}) of Q is not a projector")]
    QBarNotProjector { alpha: usize, beta: usize },

    #[error("matrices do not form a basis of the matrix algebra")]
    NotABasis,

    #[error("basis matrix {index} is not idempotent")]
    NotIdempotent { index: usize },

    #[error("block matrix E fails E^2 = E")]
    BlockNotIdempotent,

    #[error("block b is not invertible")]
    BNotInvertible,

    #[error("missing construction metadata: {0}")]
    MissingMetadata(&'static str),

    #[error("size cap exceeded: {needed} entries requested, cap is {cap}")]
    DimensionOverflow { needed: usize, cap: usize },

    #[error("{diagram} fails at basis indices {witness:?}")]
    DiagramViolation {
        diagram: Diagram,
        witness: Vec<usize>,
    },

    #[error("tensor-square complement carries a nonzero action at {witness:?}")]
    ZeroActionFails { witness: Vec<usize> },

    #[error("P_{n} failed the idempotency check")]
    IdempotencyFailure { n: usize },

    #[error("enumeration limit exceeded: n = {n}, limit = {limit}")]
    LimitExceeded { n: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
