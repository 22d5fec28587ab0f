use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("inadmissible fusion triple ({n},{k},{l})")]
    Fusion { n: usize, k: usize, l: usize },

    #[error("grading mismatch: {0}")]
    Grading(String),

    #[error("odd strand count {0} has no concrete image")]
    NotRepresentable(usize),

    #[error("tensor dimension {needed} exceeds budget {budget}")]
    Resource { needed: usize, budget: usize },

    #[error("coefficient overflow in exact arithmetic")]
    Overflow,

    #[error("square-root parts differ: {0} vs {1}")]
    RadicalMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
