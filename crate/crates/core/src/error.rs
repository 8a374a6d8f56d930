use thiserror::Error;

/// Errors raised by the numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A floor or ceiling could not be certified at the maximum working precision.
    #[error("precision exhausted: {what} undecided at {bits} bits")]
    PrecisionExhausted { what: String, bits: u32 },

    /// A brute-force routine was asked for more work than its guard allows.
    #[error("size guard exceeded: {0}")]
    Guard(String),

    /// A search that must succeed did not (root bracketing, for instance).
    #[error("search failed: {0}")]
    Search(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
