use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Chain length outside the range the bit-encoded basis supports.
    #[error("chain length {n} outside supported range {min}..={max}")]
    Capacity { n: usize, min: usize, max: usize },

    /// Invalid argument (site index out of range, malformed pair, ...).
    #[error("{0}")]
    Domain(String),

    /// A matrix or vector contained NaN or infinite entries.
    #[error("non-finite entries encountered")]
    NonFinite,

    /// A unique ground state was requested but the spectrum is degenerate
    /// at the bottom. `sectors` lists the n_up values of all tied blocks
    /// (a repeated value signals a tie inside one block).
    #[error("degenerate ground state at energy {energy}: tied sectors n_up = {sectors:?}")]
    Degenerate { energy: f64, sectors: Vec<usize> },

    /// The Marshall sign rule is only defined for uniformly signed
    /// transverse couplings (all positive or all non-positive).
    #[error("sign rule undefined: transverse couplings change sign along the chain")]
    MixedCouplingSigns,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
