use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("invalid params for family {family}: {reason}")]
    InvalidParams { family: String, reason: String },

    #[error("unknown demand generator {0:?}")]
    UnknownDemandFamily(String),

    #[error("demand generator {family} does not apply: {reason}")]
    DemandMismatch { family: String, reason: String },

    #[error("demand out of range at vertex {vertex}: {value}")]
    DemandOutOfRange { vertex: usize, value: String },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("invalid demand: {0}")]
    InvalidDemand(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("LP is infeasible")]
    LpInfeasible,

    #[error("Hall condition violated on {0:?}")]
    HallViolated(Vec<usize>),

    #[error("lemma hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("condition ({name}) of the clique-minus-matching lemma fails: {detail}")]
    MatchingLemmaCondition { name: &'static str, detail: String },

    #[error("not f-colorable: {0}")]
    NotColorable(String),

    #[error("balance step failed: {0}")]
    BalanceFailed(String),

    #[error("internal defect: {0}")]
    Defect(String),

    #[error("unknown claim {0:?}")]
    UnknownClaim(String),

    #[error("malformed range: {0}")]
    MalformedRange(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
