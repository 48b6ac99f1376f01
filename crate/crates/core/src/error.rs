use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::markov_systems::CertificationReport;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A hard budget (enumeration size, cell count, sample count) would be exceeded.
    OverBudget {
        what: &'static str,
        requested: f64,
        limit: f64,
    },
    /// No iterate up to the cap has uniformly expanding branches.
    NotExpanding,
    /// The system has no cells or no admissible bi-infinite path.
    EmptySystem,
    /// An inverse branch does not map its target cell into its source cell.
    NotMarkov { from: usize, to: usize },
    /// Quadratic Julia construction could not certify expansion.
    NotCertifiedExpanding(Box<CertificationReport>),
    /// A word violates the transition relation.
    Inadmissible,
    DepthMismatch,
    NonpositiveExponent,
    ZeroEntropy,
    /// A scan produced decreasing values where monotonicity is guaranteed.
    NonMonotone { k: usize },
    /// Monte Carlo oracle found no surviving sample.
    NoData,
    InvalidInput(String),
    Unsupported(&'static str),
}

impl Error {
    /// Stable identifier used on diagnostic streams.
    pub fn name(&self) -> &'static str {
        match self {
            Error::OverBudget { .. } => "OverBudget",
            Error::NotExpanding => "NotExpanding",
            Error::EmptySystem => "EmptySystem",
            Error::NotMarkov { .. } => "NotMarkov",
            Error::NotCertifiedExpanding(_) => "NotCertifiedExpanding",
            Error::Inadmissible => "Inadmissible",
            Error::DepthMismatch => "DepthMismatch",
            Error::NonpositiveExponent => "NonpositiveExponent",
            Error::ZeroEntropy => "ZeroEntropy",
            Error::NonMonotone { .. } => "NonMonotone",
            Error::NoData => "NoData",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Unsupported(_) => "Unsupported",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OverBudget {
                what,
                requested,
                limit,
            } => write!(f, "{what}: requested {requested:e} exceeds budget {limit:e}"),
            Error::NotExpanding => f.write_str("system is not expanding for any iterate up to the cap"),
            Error::EmptySystem => f.write_str("system is empty"),
            Error::NotMarkov { from, to } => {
                write!(f, "branch {from}->{to} does not map its target cell into its source cell")
            }
            Error::NotCertifiedExpanding(report) => write!(
                f,
                "expansion not certified at depth {} (min derivative {:.6})",
                report.depth, report.min_deriv
            ),
            Error::Inadmissible => f.write_str("word is not admissible"),
            Error::DepthMismatch => f.write_str("cylinder set does not match the block code"),
            Error::NonpositiveExponent => f.write_str("Lyapunov exponent must be positive"),
            Error::ZeroEntropy => f.write_str("reference entropy must be positive"),
            Error::NonMonotone { k } => write!(f, "scan value decreased at depth {k}"),
            Error::NoData => f.write_str("no surviving samples"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}
