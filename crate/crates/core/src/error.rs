use alloc::string::String;
use core::fmt;

/// Errors raised by the domain operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A Gram matrix was ragged or not symmetric.
    MalformedGram(String),
    /// The lattice has a nonzero radical, so the square-discriminant test is undefined.
    RadicalNonzero,
    /// Unknown ADE label or rank out of range.
    InvalidAdeLabel(String),
    /// `(n, q)` does not describe a cyclic quotient singularity.
    InvalidType { n: u64, q: u64 },
    /// The curve configuration is not the resolution graph of a quotient singularity.
    NotQuotientString(String),
    /// Local group order is only defined for chains in this crate.
    UnsupportedGroupOrder,
    /// The exhaustive F2 search was asked for more coordinates than it handles.
    SearchBudgetExceeded { mu: usize, budget: usize },
    /// Invalid Hodge data (negative numbers, `h11 = 0`, ...).
    InvalidInvariants(String),
    /// Number of disjoint nodal curves outside `0..=h11-1`.
    HodgeIndex { mu: u64, h11: u64 },
    /// Nef-branch input outside the solution set of the orbifold BMY inequality.
    ViolatesOrbifoldBmy { q: u64, pg: u64, h11: u64 },
    /// Case label not in the closed vocabulary, or missing a required qualifier.
    UnknownLabel(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedGram(why) => write!(f, "malformed Gram matrix: {why}"),
            Error::RadicalNonzero => f.write_str("radical nonzero"),
            Error::InvalidAdeLabel(label) => write!(f, "invalid ADE label {label:?}"),
            Error::InvalidType { n, q } => write!(f, "invalid type ({n}, {q})"),
            Error::NotQuotientString(why) => {
                write!(f, "not a quotient-singularity string: {why}")
            }
            Error::UnsupportedGroupOrder => {
                f.write_str("local group order unsupported for non-chain resolution graphs")
            }
            Error::SearchBudgetExceeded { mu, budget } => {
                write!(f, "search budget exceeded: mu = {mu} > {budget}")
            }
            Error::InvalidInvariants(why) => write!(f, "invalid invariants: {why}"),
            Error::HodgeIndex { mu, h11 } => {
                write!(f, "mu = {mu} outside the Hodge index range 0..={} for h11 = {h11}", h11.saturating_sub(1))
            }
            Error::ViolatesOrbifoldBmy { q, pg, h11 } => {
                write!(f, "violates orbifold BMY: (q, pg, h11) = ({q}, {pg}, {h11}) is not a solution")
            }
            Error::UnknownLabel(label) => write!(f, "unknown label {label:?}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
