//! Concatenated graph codes generated by quantum emitters.
//!
//! * [`pauli`]: symplectic Pauli operators and stabilizer groups.
//! * [`graph`] and [`enumerate`]: graph states, local complementation and the
//!   single-emitter graph class.
//! * [`code`]: graph codes, logical operator sets and dual codes.
//! * [`fusion`]: exact erasure and Pauli-error analysis of transversal logical
//!   fusions between two identical codes.
//! * [`threshold`]: bias models, loss thresholds and correctable regions.
//! * [`compiler`]: two-emitter generation sequences, verification and resource
//!   counts.

pub mod code;
pub mod compiler;
pub mod enumerate;
pub mod error;
pub mod fusion;
pub mod graph;
pub mod pauli;
pub mod threshold;

pub use code::{GraphCode, LogicalBasis};
pub use error::{Error, Result};
pub use graph::{GenerationOp, GraphState};
pub use pauli::{PauliOperator, StabilizerGroup};
