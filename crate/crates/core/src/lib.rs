//! Numerical laboratory for entanglement structure of tripartite Haar random
//! states.
//!
//! The crate is layered bottom-up:
//!
//! * [`qstate`]: dense states, reduced density matrices, partial transpose,
//!   Schmidt decompositions and Hermitian spectra.
//! * [`random`]: reproducible Haar sampling keyed by [`random::SeedSpec`].
//! * [`measures`]: entropies, mutual information, logarithmic negativity,
//!   hashing bound, Page deviation and EPR-projector expectations.
//! * [`distill`]: local-unitary and local-operation EPR distillation searches,
//!   closed-form oracles and logical-operator searches for random encodings.
//! * [`stabilizer`]: uniform random Clifford/stabilizer ensembles, GF(2)
//!   entropies and tripartite EPR/GHZ counts.
//! * [`bounds`]: log-domain evaluators for cap areas, net cardinalities,
//!   concentration tails and the assembled probability bounds.
//!
//! Qubit ordering is fixed crate-wide: bit `k` of a basis index is qubit `k`,
//! so qubit 0 is the least significant bit. Index lists naming subsystems are
//! ordered, and element `j` of a list is bit `j` of the local index.

pub mod bounds;
pub mod distill;
pub mod error;
pub mod measures;
pub mod qstate;
pub mod random;
pub mod serial;
pub mod stabilizer;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
