use thiserror::Error;

use crate::book::ShoutId;

#[derive(Debug, Error, PartialEq)]
pub enum BookError {
    #[error("shout {0:?} is already in the book")]
    DuplicateShout(ShoutId),
    #[error("invalid shout price {0}")]
    InvalidPrice(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenomeError {
    #[error("genome string is empty")]
    Empty,
    #[error("expected 6 policy components (M + Q + A + C + P + G), found {0}")]
    ComponentCount(usize),
    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),
    #[error("policy `{policy}` listed in the {found} position, expected a {expected} policy")]
    WrongFamily { policy: String, expected: &'static str, found: &'static str },
    #[error("malformed parameter list in `{0}`")]
    Malformed(String),
    #[error("policy `{policy}` has no parameter `{param}`")]
    UnknownParam { policy: String, param: String },
    #[error("parameter `{param}` of `{policy}` is missing")]
    MissingParam { policy: String, param: &'static str },
    #[error("parameter `{param}` = {value} is out of range for `{policy}`")]
    OutOfRange { policy: String, param: &'static str, value: f64 },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid genome for market `{name}`: {source}")]
    Genome { name: String, source: GenomeError },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("failed to read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),
}
