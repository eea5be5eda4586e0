use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("rotation alphabet needs at least one angle")]
    ZeroRotations,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("relay {0} is transmitting and cannot listen")]
    RelayTransmitting(usize),

    #[error("multiplexing gain {0} outside [0, 1]")]
    GainOutOfRange(f64),

    #[error("configurations differ in {0}, only the SNR may vary")]
    CrnMismatch(&'static str),

    #[error("slope needs at least two points with distinct SNR and nonzero outage: {0}")]
    InvalidSlopePoints(String),
}
