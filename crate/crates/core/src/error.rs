use thiserror::Error;

use crate::poly::VarId;

/// Errors raised by the library.
///
/// Variants that would only fire if one of the structural claims being
/// checked turned out false (pairing violations, odd Type II counts,
/// verification failures) are kept separate from plain input errors so the
/// CLI can map them onto different exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid size {0}: expected an even integer >= 2")]
    InvalidSize(usize),

    #[error("{0:?} is not a D-partition")]
    NotDPartition(Vec<usize>),

    #[error("{0:?} is not a special D-partition")]
    NotSpecial(Vec<usize>),

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("cannot pair parts of {0:?}: some even part has odd multiplicity")]
    PairingImpossible(Vec<usize>),

    #[error("appending {0} ones leaves an odd total")]
    ParityViolation(usize),

    #[error("pair ({0}, {1}) needs the general odd-pair normal form; augment first")]
    UnsupportedPair(usize, usize),

    #[error("basis index ({i}, {j}) invalid for so({})", 2 * .n)]
    IndexError { i: usize, j: usize, n: usize },

    #[error("matrix is not in so-form at ({0}, {1})")]
    NotSoForm(usize, usize),

    #[error("Pfaffian of odd-sized matrix ({0})")]
    OddSize(usize),

    #[error("no value assigned to variable {0}")]
    MissingAssignment(VarId),

    #[error("j = {j} is not a conjecture index of {parts:?}")]
    NotAConjectureIndex { j: usize, parts: Vec<usize> },

    #[error("j = {j} cuts through appended ones of the augmented partition {augmented:?}")]
    CutNotRealized { j: usize, augmented: Vec<usize> },

    #[error("surviving rows {rows:?} and columns {cols:?} are not paired under i <-> i+-N")]
    PairingViolation { rows: Vec<usize>, cols: Vec<usize> },

    #[error("odd number of Type II blocks ({0}) among the tapped blocks")]
    OddTypeIICount(usize),

    #[error("valuation violation at 2k = {two_k}: t-valuation {valuation} below chi = {chi}")]
    ValuationViolation {
        two_k: usize,
        chi: usize,
        valuation: usize,
    },

    #[error("verification failed for {parts:?}, j = {j}: {identity}")]
    VerificationFailed {
        parts: Vec<usize>,
        j: usize,
        identity: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate a counterexample or a broken structural
    /// claim rather than bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::PairingViolation { .. }
                | Error::OddTypeIICount(_)
                | Error::ValuationViolation { .. }
                | Error::VerificationFailed { .. }
        )
    }
}
