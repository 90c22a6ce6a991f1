use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter fell outside the domain where the formulas hold.
    #[error("{param} = {value} is out of range, expected {expected}")]
    Domain {
        param: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Qubit indices, arities or dimensions that do not fit together.
    #[error("invalid operands: {0}")]
    Operands(String),

    /// The target angle sits strictly between the deepest channels of both halves.
    #[error(
        "theta = {theta} lies in the central gap ({lower}, {upper}) not covered at depth {depth}; \
         use the improved1 or appendixB protocol for this region"
    )]
    CentralGap {
        theta: f64,
        lower: f64,
        upper: f64,
        depth: usize,
    },

    #[error("theta = {theta} is outside the central region [{lower}, {upper}] handled by this protocol")]
    OutsideCentralRegion { theta: f64, lower: f64, upper: f64 },

    /// A measurement branch or POVM outcome with (numerically) zero weight was asked for its state.
    #[error("branch probability {probability:e} is too small to renormalize")]
    DegenerateBranch { probability: f64 },

    /// Strict compression planning found a section head whose POVM floor exceeds P.
    #[error("infeasible plan: P = {p} is below the floor 1/(B^2+1) = {floor} of section head {head}")]
    InfeasiblePlan { head: usize, p: f64, floor: f64 },

    #[error("theta = {theta} maps to channel {channel}, which no section of the plan covers")]
    NoSection { theta: f64, channel: usize },

    #[error("unknown protocol '{0}' (expected explicit, improved1, appendixB, improved2 or ghz)")]
    UnknownProtocol(String),

    /// Something that holds by construction did not; indicates a numerical or logic bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            param,
            value,
            expected,
        }
    }
}
