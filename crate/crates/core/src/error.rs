//! Error taxonomy shared by all modules.
//!
//! Every expected failure carries a machine-readable reason code (used by the
//! CLI) and enough of a witness to reproduce the violation by hand.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("groupoid axiom violated ({axiom}): {witness}")]
    Axiom {
        axiom: &'static str,
        witness: String,
    },

    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),

    #[error("not a group action: {0}")]
    NotAnAction(String),

    #[error("not a cover: uncovered points {0:?}")]
    NotACover(Vec<String>),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("functor law violated: {0}")]
    BadFunctor(String),

    #[error("natural transformation law violated: {0}")]
    BadNaturalTransformation(String),

    #[error("simplicial face identity violated: {0}")]
    FaceIdentity(String),

    #[error("simplicial complex invalid: {0}")]
    BadComplex(String),

    #[error("simplicial map does not commute with faces: {0}")]
    BadSimplicialMap(String),

    #[error("boundary check failed: d∘d ≠ 0 at degree {degree} ({witness})")]
    BoundaryCheckFailed { degree: usize, witness: String },

    #[error("truncation too shallow: homology through degree {k_max} needs chains in degree {needed}, complex stops at {available}")]
    TruncationTooShallow {
        k_max: usize,
        needed: usize,
        available: usize,
    },

    #[error("chain homotopy identity failed at degree {0}")]
    HomotopyIdentityFailed(usize),

    #[error("functor is not a weak equivalence: {0}")]
    NotAWeakEquivalence(String),

    #[error("homology invariance failed at degree {degree}: {detail}")]
    InvarianceFailed { degree: usize, detail: String },

    #[error("edge ({u},{v}) has morphism `{morphism}` with wrong endpoints: {detail}")]
    SourceTargetMismatch {
        u: String,
        v: String,
        morphism: String,
        detail: String,
    },

    #[error("cocycle violated on triangle ({0},{1},{2})")]
    CocycleViolation(String, String, String),

    #[error("total-space elements lie in different fibers: {0} vs {1}")]
    NotSameFiber(String, String),

    #[error("action is not principal on fiber: {0}")]
    NotPrincipal(String),

    #[error("bundles have different base or groupoid: {0}")]
    BaseMismatch(String),

    #[error("vertex map is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("path is not a closed edge loop: {0}")]
    NotALoop(String),

    #[error("search limit {limit} exhausted after {visited} states; result inconclusive")]
    NonExhaustive { limit: u64, visited: u64 },

    #[error("enumeration too large: {size} candidate bundles exceed bound {bound}")]
    TooLarge { size: u128, bound: u128 },

    #[error("torsion coefficient does not fit in u64")]
    TorsionOverflow,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, emitted in CLI error reports.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse_error",
            Error::Axiom { .. } => "axiom_error",
            Error::NotAGroup(_) => "not_a_group",
            Error::NotAnAction(_) => "not_an_action",
            Error::NotACover(_) => "not_a_cover",
            Error::UnknownObject(_) => "unknown_object",
            Error::BadFunctor(_) => "bad_functor",
            Error::BadNaturalTransformation(_) => "bad_natural_transformation",
            Error::FaceIdentity(_) => "face_identity",
            Error::BadComplex(_) => "bad_complex",
            Error::BadSimplicialMap(_) => "bad_simplicial_map",
            Error::BoundaryCheckFailed { .. } => "boundary_check_failed",
            Error::TruncationTooShallow { .. } => "truncation_too_shallow",
            Error::HomotopyIdentityFailed(_) => "homotopy_identity_failed",
            Error::NotAWeakEquivalence(_) => "not_a_weak_equivalence",
            Error::InvarianceFailed { .. } => "invariance_failed",
            Error::SourceTargetMismatch { .. } => "source_target_mismatch",
            Error::CocycleViolation(..) => "cocycle_violation",
            Error::NotSameFiber(..) => "not_same_fiber",
            Error::NotPrincipal(_) => "not_principal",
            Error::BaseMismatch(_) => "base_mismatch",
            Error::NotSimplicial(_) => "not_simplicial",
            Error::NotALoop(_) => "not_a_loop",
            Error::NonExhaustive { .. } => "non_exhaustive",
            Error::TooLarge { .. } => "too_large",
            Error::TorsionOverflow => "torsion_overflow",
            Error::Io(_) => "io_error",
        }
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonExhaustive { .. } | Error::TooLarge { .. } => 3,
            _ => 2,
        }
    }
}
