use thiserror::Error;

/// Which binary bound is missing from a poset that fails to be a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingBound {
    Meet,
    Join,
}

impl std::fmt::Display for MissingBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MissingBound::Meet => f.write_str("meet"),
            MissingBound::Join => f.write_str("join"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("relation is not a partial order: {0}")]
    NotAPoset(String),
    #[error("the empty poset is not allowed here")]
    EmptyPoset,
    #[error("elements {x} and {y} have no {missing}")]
    NotALattice { x: usize, y: usize, missing: MissingBound },
    #[error("map is not monotone: {x} <= {y} but images {fx} and {fy} are not ordered")]
    NotMonotone { x: usize, y: usize, fx: usize, fy: usize },
    #[error("map is not idempotent at element {0}")]
    NotIdempotent(usize),
    #[error("size cap exceeded: {what} would have {size} elements (cap {cap})")]
    SizeCap { what: &'static str, size: usize, cap: usize },
    #[error("enumeration budget of {budget} exceeded while {what}")]
    BudgetExceeded { what: &'static str, budget: u64 },
    #[error("object {0} is not in the site")]
    NotInSite(String),
    #[error("site lacks the ordinal [{0}]")]
    MissingOrdinal(usize),
    #[error("truncation dimension {have} is insufficient: {what} needs at least {need}")]
    InsufficientTruncation { what: String, have: usize, need: usize },
    #[error("presheaves live on different sites")]
    SiteMismatch,
    #[error("functoriality fails for maps {f} then {g} at element {element}")]
    NotFunctorial { f: usize, g: usize, element: usize },
    #[error("naturality fails for map {map} at element {element}")]
    NotNatural { map: usize, element: usize },
    #[error("square does not commute at object {object}, element {element}")]
    NotCommuting { object: usize, element: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
