use thiserror::Error;

/// Errors surfaced by configuration, simulation and emission.
#[derive(Debug, Error)]
pub enum NdError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("beamwidth {0} rad does not divide the full circle")]
    Beamwidth(f64),

    #[error("area diagonal {diagonal} km exceeds communication range {range} km (one-hop model violated)")]
    NotOneHop { diagonal: f64, range: f64 },

    #[error("transmit probability {0} must lie strictly inside (0, 1)")]
    TransmitProbability(f64),

    #[error("{0} requires a high-resolution radar list")]
    NeedsExactCounts(&'static str),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("no analytic model for {0}")]
    NoAnalyticModel(String),

    #[error("probability clamp in strict mode: {0}")]
    Clamp(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, NdError>;
