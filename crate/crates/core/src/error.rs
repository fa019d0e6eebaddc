use thiserror::Error;

/// Errors raised by the algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid exponent {exponent}: must lie in [1, {max}]")]
    InvalidExponent { exponent: u32, max: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ring mismatch: Z/{left_p}^{left_s} vs Z/{right_p}^{right_s}")]
    RingMismatch {
        left_p: u64,
        left_s: u32,
        right_p: u64,
        right_s: u32,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// The map has a nonzero kernel. `witness` holds a domain element in
    /// summand coordinates, `degree` its degree.
    #[error("map is not injective: nonzero kernel element {witness:?} in degree {degree}")]
    NotInjective { degree: i64, witness: Vec<u64> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("complex is not acyclic: nonzero homology at degree {degree}, weight {weight}")]
    NotAcyclic { degree: i64, weight: usize },

    #[error("resource guard exceeded: {0}")]
    Resource(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
