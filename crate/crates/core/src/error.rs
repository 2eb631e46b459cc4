use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid page index {r} for the {ss} spectral sequence")]
    InvalidPage { ss: &'static str, r: u32 },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cannot parse monomial `{0}`")]
    BadMonomial(String),
    #[error("invalid field spec `{0}`: {1}")]
    InvalidField(String, &'static str),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("boundary row is not a cycle")]
    Containment,
    #[error("differential at ({t}, {c}) lands outside the cycles of its target")]
    InconsistentDifferential { t: i32, c: i32 },
    #[error("class at ({t}, {c}) touches the edge of the computed window")]
    Unstable { t: i32, c: i32 },
    #[error("unsupported direction ({0}, {1})")]
    Direction(i32, i32),
}
