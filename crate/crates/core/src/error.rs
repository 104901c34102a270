use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates a model or construction precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed or inconsistent experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// The adaptive integrator could not continue.
    #[error("integration failed at t = {last_time}: {reason}")]
    Integration { last_time: f64, reason: String },

    /// The integration horizon was exhausted before the epidemic died out.
    #[error("no extinction before horizon t = {horizon}")]
    NoExtinction { horizon: f64 },

    /// A root bracket had no sign change.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// A query falls outside the simulated time window.
    #[error("time {t} outside trajectory horizon [0, {horizon}]")]
    OutsideHorizon { t: f64, horizon: f64 },

    /// A trajectory that never reached extinction was asked for its final size.
    #[error("trajectory did not reach extinction before t_max = {t_max}")]
    NotExtinct { t_max: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by user input rather than numerical breakdown.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Config(_) | Error::Json(_)
        )
    }
}
