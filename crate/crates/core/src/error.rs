use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} qubits vs {right} qubits")]
    Dimension { left: usize, right: usize },

    #[error("{what} = {value} exceeds the configured cap of {cap}")]
    ResourceCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid stabilizer group: {0}")]
    InvalidGroup(String),

    #[error("input qubit {0} has no neighbours")]
    IsolatedInput(usize),

    #[error("{name} = {value} is outside its allowed range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("graph is not generatable by a single emitter: {0}")]
    NotGeneratable(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("monotonicity violated: {0}")]
    NotMonotone(String),

    #[error("verification failed at step {step}: {reason}")]
    Verification { step: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
