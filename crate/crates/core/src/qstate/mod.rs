//! Dense linear-algebra substrate: states, reduced density matrices, partial
//! transpose, Schmidt decomposition and Hermitian spectra.
//!
//! All types are immutable after construction; every operation returns a new
//! value.

mod density;
mod isometry;
pub(crate) mod layout;
pub mod linalg;
mod partition;
mod state;

pub use density::{partial_trace, partial_transpose, reduce_onto, DensityMatrix, Reducible};
pub use isometry::IsometryMap;
pub use linalg::hermitian_eigvals;
pub use partition::{Block, Partition};
pub use state::{apply_local, schmidt, PureState, Schmidt};

/// Numerical acceptance windows used by the validating constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a state's 2-norm from 1.
    pub norm: f64,
    /// Allowed entrywise deviation from Hermiticity of a density matrix.
    pub hermitian: f64,
    /// Allowed deviation of a density matrix trace from 1.
    pub trace: f64,
    /// Most negative eigenvalue tolerated in a density matrix.
    pub psd: f64,
    /// Allowed entrywise deviation of `V†V` from the identity.
    pub isometry: f64,
    /// Hermiticity window accepted by [`hermitian_eigvals`].
    pub eig_hermitian: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-12,
        hermitian: 1e-10,
        trace: 1e-10,
        psd: 1e-10,
        isometry: 1e-10,
        eig_hermitian: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
