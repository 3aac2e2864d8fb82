use thiserror::Error;

use crate::mps::MpsCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
///
/// The variants line up with the CLI exit codes: domain and aliasing
/// problems are caller mistakes, capacity errors mean the input is valid but
/// too large for the exhaustive or dense routine, and the accuracy /
/// construction / optimization variants carry numerical diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("aliasing error: grid size {grid} is too small, need at least {required}")]
    Aliasing { grid: usize, required: usize },

    #[error("accuracy error: {message} (best estimate {estimate}, relative change {rel_change:.3e} at grid {grid})")]
    Accuracy {
        message: String,
        estimate: f64,
        rel_change: f64,
        grid: usize,
    },

    #[error("construction rejected: {reason}")]
    Construction {
        reason: String,
        certificate: Option<Box<MpsCertificate>>,
    },

    #[error("optimization error: {0}")]
    Optimization(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn construction(reason: impl Into<String>, certificate: Option<MpsCertificate>) -> Self {
        Error::Construction {
            reason: reason.into(),
            certificate: certificate.map(Box::new),
        }
    }
}
