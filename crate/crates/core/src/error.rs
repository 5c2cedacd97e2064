use thiserror::Error;

/// Every failure the solver can report.
///
/// Vertex numbers carried by variants are 0-based, matching the library API.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance needs at least 3 vertices, got {n}")]
    TooSmall { n: usize },
    #[error("instance has {n} vertices, more than the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("no weight given for edge {u}-{v}")]
    MissingEdge { u: usize, v: usize },
    #[error("edge {u}-{v} given more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("edge {u}-{v} is not an edge of the instance")]
    UnknownEdge { u: usize, v: usize },
    #[error("not a Hamilton cycle: {0}")]
    NotHamiltonian(String),
    #[error("integer overflow in {0}")]
    ArithmeticOverflow(&'static str),
    #[error("vertex {v} would have degree greater than 2")]
    DegreeExceeded { v: usize },
    #[error("edges close a cycle on fewer than all vertices")]
    PrematureCycle,
    #[error("partial Hamilton cycle is already a Hamilton cycle")]
    AlreadyComplete,
    #[error("edge {u}-{v} does not join two paths")]
    NotJoinable { u: usize, v: usize },
    #[error("edges share vertex {v}")]
    SharedVertex { v: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unbalanced 4-cycle removal exceeded its cap of {cap} iterations")]
    IterationCapExceeded { cap: u128 },
    #[error("only {outside} vertices outside X, need at least {needed}")]
    TooFewOutsideVertices { outside: usize, needed: usize },
    #[error("kernel has {size} vertices, exceeds the exact-search cap {cap}")]
    KernelTooLarge { size: usize, cap: usize },
    #[error("Hamilton cycle extension stalled: {0}")]
    ExtensionStalled(String),
    #[error("n = {n} exceeds the oracle budget of {max}")]
    BudgetExceeded { n: usize, max: usize },
    #[error("instances have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
