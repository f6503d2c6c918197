//! Genuine multipartite EPR-steering witnesses for qudit graph states.
//!
//! The crate builds `d`-dimensional `N`-partite graph states and hyperentangled
//! states, evaluates the steering-witness kernel on arbitrary density operators,
//! computes the preexisting-state (classical) bound both in closed form and by
//! exhaustive enumeration of cheating strategies, and derives noise thresholds,
//! fidelity windows and one-way gate certificates from those quantities.
//!
//! Everything is dense linear algebra over small composite Hilbert spaces.
//! Party and vertex indices are 0-based in the API; the text formats and the
//! CLI use 1-based labels.

pub mod bound;
pub mod error;
pub mod exec;
pub mod fidelity;
pub mod fullstate;
pub mod graph;
pub mod noise;
pub mod numfmt;
pub mod oneway;
pub mod tensor;
pub mod witness;

pub use error::{Error, Result};
pub use exec::Execution;
pub use tensor::{
    c64, DensityOperator, LinearOperator, QuditRegister, StateVector,
};
