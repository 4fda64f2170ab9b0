use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("window size cap exceeded: more than {cap} elements")]
    SizeCap { cap: usize },
    #[error("element {0} is not in the window")]
    NotInWindow(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("metric axiom violated: {0}")]
    Metric(String),
    #[error("action law violated: {0}")]
    ActionLaw(String),
    #[error("invalid simplicial complex: {0}")]
    Complex(String),
    #[error("empty cover rejected")]
    EmptyCover,
    #[error("insufficient action domain: {0}")]
    InsufficientDomain(String),
    #[error("homotopy action law violated at {0}")]
    HomotopyLaw(String),
    #[error("cover is not {k}-long: {witness}")]
    NotLong { k: usize, witness: String },
    #[error("G-Lebesgue check failed: {0}")]
    Lebesgue(String),
    #[error("Lipschitz constant {measured} exceeds {required}")]
    LipschitzTooLarge { measured: String, required: String },
    #[error("multiplicity bound violated: {0}")]
    Multiplicity(String),
    #[error("family predicate violated: {0}")]
    FamilyViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("coverage gap at {0}")]
    CoverageGap(String),
    #[error("uncovered boundary point {0}")]
    UncoveredBoundary(String),
    #[error("weights are not a partition of unity subordinate to the shrunken slices: {0}")]
    Weights(String),
    #[error("action is not isometric: {0}")]
    NotIsometric(String),
    #[error("no feasible assignment for refinement member {0}")]
    Assignment(usize),
    #[error("undefined group action on K for {0}")]
    ComplexAction(String),
    #[error("document error: {0}")]
    Document(String),
}
