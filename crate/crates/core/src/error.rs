use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex `{label}` for graph `{family}`")]
    InvalidVertex { label: String, family: String },

    #[error("support cap of {cap} entries exceeded while {during}; use the Monte Carlo estimators instead")]
    SupportCap { cap: usize, during: String },

    #[error("ball enumeration exceeded the cap of {cap} vertices")]
    BallCap { cap: usize },

    #[error("measure is not normalized (total mass {mass})")]
    NotNormalized { mass: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("uncertified entropy constant: {0}; run certify_entropy_constant over the needed range first")]
    Uncertified(String),

    #[error("entropy certification failed at {} (start, n) pairs, first: {}", .violations.len(), .violations.first().map(|(v, n)| format!("({v}, {n})")).unwrap_or_default())]
    CertificationFailed { violations: Vec<(String, usize)> },

    #[error("malformed graph spec `{spec}`: {reason}")]
    GraphSpec { spec: String, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
