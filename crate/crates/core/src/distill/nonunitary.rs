//! Post-selected logical operator: project `C1` onto `|0…0⟩` and distill one
//! EPR pair between A and the single qubit `C0` while B stays untouched.

use nalgebra::DVector;

use super::{lu_distill, LUSearchConfig, SearchResult};
use crate::error::{ensure, Error, Result};
use crate::qstate::layout::scatter_table;
use crate::qstate::{Block, Partition, PureState};
use crate::C64;

/// Result of [`nonunitary_logical_demo`].
#[derive(Debug, Clone)]
pub struct NonunitaryDemo {
    /// Best A–C0 EPR fidelity with local unitaries on A and C0.
    pub fidelity: f64,
    /// `‖(I ⊗ ⟨0…0|_{C1})|ψ⟩‖²`.
    pub postselect_probability: f64,
    pub search: SearchResult,
}

/// The partition must carry a split `C = C0 ∪ C1` with `|C0| = 1`. The search
/// runs with A and C0 as the two parties and B traced out; `config.m` must be 1.
pub fn nonunitary_logical_demo(state: &PureState, partition: &Partition, config: &LUSearchConfig) -> Result<NonunitaryDemo> {
    ensure!(config.m == 1, InvalidArgument, "the demo distills a single pair");
    let c0 = partition
        .block(Block::C0)
        .ok_or_else(|| Error::InvalidArgument("partition has no C0/C1 split".into()))?;
    let c1 = partition.block(Block::C1).unwrap_or(&[]);
    ensure!(c0.len() == 1, InvalidArgument, "|C0| must be 1, got {}", c0.len());
    ensure!(state.n() == partition.n(), Dimension, "state and partition sizes differ");
    let (a, b) = (partition.a(), partition.b());

    // new register: A, then C0, then B
    let keep: Vec<usize> = a.iter().chain(c0).chain(b).copied().collect();
    let table = scatter_table(&keep);
    let amps = state.amplitudes();
    let projected: DVector<C64> = DVector::from_iterator(table.len(), table.iter().map(|&x| amps[x]));
    let prob = projected.norm_squared();
    if prob < 1e-24 {
        return Err(Error::Numerical(format!(
            "projection of C1 = {c1:?} onto |0…0⟩ has norm {}; resample",
            prob.sqrt()
        )));
    }
    let n = keep.len();
    let phi = PureState::normalized(n, projected)?;
    let n_a = a.len();
    let local = Partition::tripartite(n_a, 1, b.len()).with_leading_pairs(1)?;
    let search = lu_distill(&phi, &local, config)?;
    Ok(NonunitaryDemo { fidelity: search.best_value, postselect_probability: prob, search })
}
