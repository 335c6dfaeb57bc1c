use thiserror::Error;

/// Errors produced while parsing inputs, enumerating factors or running the
/// graph constructions.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in token `{0}`")]
    MalformedExponent(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("generator `{0}` is declared more than once")]
    AlphabetClash(String),
    #[error("coset enumeration exceeded the cap of {0} cosets")]
    CosetCapExceeded(usize),
    #[error("edge map is not injective: |phi1(A)| = {image1}, |phi2(A)| = {image2}, |A| = {joint}")]
    NonInjective {
        image1: usize,
        image2: usize,
        joint: usize,
    },
    #[error("the edge subgroup is all of factor {0}; the amalgam collapses to a finite group")]
    ImproperEdgeSubgroup(usize),
    #[error("the element is a member of the subgroup; nothing to separate")]
    IsMember,
    #[error("separability is only constructive when A is cyclic, central or malnormal in a factor")]
    UnsupportedSeparability,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
