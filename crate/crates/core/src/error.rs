use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree m={m} is outside the supported range 1..={max}")]
    Capacity { m: u32, max: u32 },

    #[error("modulus {poly} is not a monic polynomial of degree {m} with digits in {{0,1,2}}")]
    MalformedModulus { poly: String, m: u32 },

    #[error("modulus {poly} is reducible over GF(3): divisible by {factor}")]
    ReducibleModulus { poly: String, factor: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("field mismatch: set built over m={set_m} modulus {set_modulus:?}, context is m={ctx_m} modulus {ctx_modulus:?}")]
    FieldMismatch {
        set_m: u32,
        set_modulus: Vec<u8>,
        ctx_m: u32,
        ctx_modulus: Vec<u8>,
    },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.into(),
            reason: reason.into(),
        }
    }
}
