use thiserror::Error;

/// Errors raised by the group, measure, and operator routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group spec `{spec}`: {reason}")]
    GroupSpec { spec: String, reason: String },

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("element {element} out of range for group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },

    #[error("empty generating set")]
    EmptySet,

    #[error("group `{0}` is not abelian")]
    NotAbelian(String),

    #[error("measures live on different carriers (`{left}` vs `{right}`)")]
    CarrierMismatch { left: String, right: String },

    #[error("operation requires a finite carrier")]
    FiniteCarrierRequired,

    #[error("lattice support of {size} atoms exceeds the cap of {cap}")]
    SupportCap { size: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("representation is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
