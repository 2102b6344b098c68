use thiserror::Error;

/// Axiom or schema failures found while validating a groupoid.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("groupoid has no arrows")]
    Empty,
    #[error("too many arrows: {0} (limit {limit})", limit = crate::arrowset::MAX_ARROWS)]
    TooManyArrows(usize),
    #[error("arrow `{0}` declared twice")]
    DuplicateArrow(String),
    #[error("undeclared arrow `{0}`")]
    UnknownArrow(String),
    #[error("conflicting products for ({0}, {1})")]
    ConflictingProduct(String, String),
    #[error("inverse of `{0}` not given exactly once")]
    MissingInverse(String),
    #[error("inverse of inverse of `{0}` is not `{0}`")]
    InverseNotInvolutive(String),
    #[error("product `{0}`·`{1}` (an arrow with its inverse) is undefined")]
    UndefinedUnitProduct(String, String),
    #[error("unit law fails at `{arrow}` with unit `{unit}`")]
    UnitLaw { arrow: String, unit: String },
    #[error("composability mismatch at ({0}, {1}): product defined iff s(g) = r(h) violated")]
    Composability(String, String),
    #[error("associativity fails at ({0}, {1}, {2})")]
    Associativity(String, String, String),
    #[error("not a bisection")]
    NotBisection,
    #[error("`{0}` is not a unit")]
    NotAUnit(String),
    #[error("grading map is not total: `{0}` has no grade")]
    GradingNotTotal(String),
    #[error("grading is not a functor at composable pair ({0}, {1})")]
    GradingNotFunctor(String, String),
    #[error("malformed construction parameters: {0}")]
    BadParameters(String),
}

/// Failures of coefficient (semigroupoid / ring) tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoefficientError {
    #[error("no elements")]
    Empty,
    #[error("element `{0}` declared twice")]
    DuplicateElement(String),
    #[error("undeclared element `{0}`")]
    UnknownElement(String),
    #[error("conflicting products for ({0}, {1})")]
    ConflictingProduct(String, String),
    #[error("partial associativity fails at ({0}, {1}, {2})")]
    Associativity(String, String, String),
    #[error("declared unit `{0}` is not a two-sided unit")]
    BadUnit(String),
    #[error("ring table malformed: {0}")]
    BadTable(String),
    #[error("ring axiom `{axiom}` fails at {witness}")]
    RingAxiom { axiom: &'static str, witness: String },
    #[error("subset is not central: `{0}`")]
    NotCentral(String),
    #[error("map is not an involutive anti-automorphism at `{0}`")]
    NotInvolution(String),
    #[error("unsupported field order {0}")]
    UnsupportedField(usize),
}

/// Failures when building or multiplying inside a family of partial
/// functions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("product of elements {0} and {1} is ill-defined: neither domain is a bisection")]
    IllDefined(usize, usize),
    #[error("product of elements {0} and {1} escapes the family")]
    NotClosed(usize, usize),
    #[error("convolution mode needs ring coefficients")]
    NeedsRing,
    #[error("value `{0}` is not a coefficient")]
    UnknownValue(String),
    #[error("function defined twice at arrow `{0}`")]
    DuplicateArrow(String),
    #[error("element listed twice: {0}")]
    DuplicateElement(String),
    #[error("element cap of {0} reached; family truncated")]
    Truncated(usize),
    #[error("budget of {0} checks exceeded")]
    BudgetExceeded(u64),
    #[error("empty function missing from the family")]
    MissingEmpty,
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
}

/// Product of two partial functions where neither domain is a bisection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("ill-defined product: neither domain is a bisection")]
pub struct IllDefinedProduct;

impl From<IllDefinedProduct> for FamilyError {
    fn from(_: IllDefinedProduct) -> Self {
        FamilyError::IllDefined(usize::MAX, usize::MAX)
    }
}

/// Failures of morphism checks between families.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("map does not preserve products at ({0}, {1})")]
    NotMultiplicative(String, String),
    #[error("map does not carry the diagonal onto the diagonal: {0}")]
    NotDiagonal(String),
    #[error("map does not preserve grades at {0}")]
    NotGraded(String),
    #[error("intersection of image domains at arrow `{arrow}` has {size} elements, expected 1")]
    NotSingleton { arrow: String, size: usize },
    #[error("induced arrow map is not a groupoid isomorphism: {0}")]
    NotIsomorphism(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Anything the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
