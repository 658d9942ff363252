use thiserror::Error;

use crate::model::AgentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an instance needs at least one layer")]
    NoLayers,
    #[error("expected approvals for {expected} layers, got {got}")]
    LayerCountMismatch { expected: usize, got: usize },
    #[error("layer {layer}: expected approval lists for {expected} agents, got {got}")]
    AgentCountMismatch { layer: usize, expected: usize, got: usize },
    #[error("agent {agent} approves itself in layer {layer}")]
    SelfApproval { agent: AgentId, layer: usize },
    #[error("agent id {id} out of range for {n} agents")]
    IdOutOfRange { id: usize, n: usize },
    #[error("layer {layer} out of range for {ell} layers")]
    LayerOutOfRange { layer: usize, ell: usize },
    #[error("agent {0} appears in more than one pair")]
    AgentMatchedTwice(AgentId),
    #[error("pair {{{0}, {1}}} is part of the matching and cannot block")]
    PairIsMatched(AgentId, AgentId),
    #[error("a pair needs two distinct agents, got {0} twice")]
    DegeneratePair(AgentId),
    #[error("matching is over {got} agents but the instance has {expected}")]
    MatchingSizeMismatch { expected: usize, got: usize },
    #[error("operation requires symmetric approvals")]
    NotSymmetric,
    #[error("invalid query: {0}")]
    InvalidQuery(&'static str),
    #[error("alpha = {alpha} is outside 1..={ell}")]
    AlphaOutOfRange { alpha: usize, ell: usize },
    #[error("alpha = {alpha} exceeds the supported bound {bound} for {ell} layers")]
    AlphaTooHigh { alpha: usize, ell: usize, bound: usize },
    #[error("alpha = {alpha} is too low for {ell} layers (requires {requirement})")]
    AlphaTooLow {
        alpha: usize,
        ell: usize,
        requirement: &'static str,
    },
    #[error("{agents} agents exceed the enumeration budget of {budget}")]
    BudgetExceeded { agents: usize, budget: usize },
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("graph has an odd number of vertices ({0})")]
    OddVertexCount(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
