use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: type error in `{atom}`: {message}")]
    Type {
        line: usize,
        column: usize,
        atom: String,
        message: String,
    },
    #[error("{line}:{column}: undeclared {kind} `{name}`")]
    Undeclared {
        line: usize,
        column: usize,
        kind: &'static str,
        name: String,
    },
    #[error("{line}:{column}: {message}")]
    Declaration {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "existential quantifier over infinite type `{ty}` (variable `{var}`): \
         existentially quantified variables must range over finite types"
    )]
    InfiniteExistential { var: String, ty: String },
    #[error("CNF of formula {formula} needs {clauses} clauses, over the limit of {limit}")]
    ClauseLimit {
        formula: usize,
        clauses: usize,
        limit: usize,
    },
    #[error("program is not sigma-determinate (clauses {clauses:?}); grounding refused")]
    NotSigmaDeterminate { clauses: Vec<usize> },
    #[error("program has no compiled clauses; compile it first")]
    NotCompiled,
    #[error("infinite-weight clause {clause} where finite weights are required")]
    InfiniteWeight { clause: usize },
    #[error("finite-weight clause {clause} in a hard knowledge base")]
    SoftClause { clause: usize },
    #[error("volume of {size} atoms exceeds the exact-enumeration cap of {cap}; use the sampler")]
    VolumeTooLarge { size: usize, cap: usize },
    #[error("grounding would exceed {limit} {what}")]
    GroundingLimit { what: &'static str, limit: usize },
    #[error("boundary assignment is missing atoms: {}", .missing.join(", "))]
    IncompleteBoundary { missing: Vec<String> },
    #[error("assignment has {got} values, expected {expected}")]
    PartialAssignment { expected: usize, got: usize },
    #[error("oscillation of an empty set of values")]
    EmptyOscillation,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors that reject a well-formed program on semantic grounds, as
    /// opposed to malformed input or usage.
    pub fn is_rejection(&self) -> bool {
        matches!(
            self,
            Error::InfiniteExistential { .. }
                | Error::NotSigmaDeterminate { .. }
                | Error::InfiniteWeight { .. }
                | Error::SoftClause { .. }
        )
    }
}
