//! Bit gathering between global basis indices and local subsystem indices.

use crate::error::{ensure, Result};

/// Local index of `global` restricted to `qubits` (element `j` of the list is
/// bit `j` of the result).
#[inline]
pub(crate) fn gather(global: usize, qubits: &[usize]) -> usize {
    let mut local = 0usize;
    for (j, &q) in qubits.iter().enumerate() {
        local |= ((global >> q) & 1) << j;
    }
    local
}

/// Inverse of [`gather`]: places the bits of `local` at the listed positions.
#[inline]
pub(crate) fn scatter(local: usize, qubits: &[usize]) -> usize {
    let mut global = 0usize;
    for (j, &q) in qubits.iter().enumerate() {
        global |= ((local >> j) & 1) << q;
    }
    global
}

/// Table mapping every local index of `qubits` to its scattered global bits.
pub(crate) fn scatter_table(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len()).map(|l| scatter(l, qubits)).collect()
}

/// Checks that `list` has distinct entries below `n`.
pub(crate) fn check_indices(list: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &q in list {
        ensure!(q < n, Indices, "qubit {q} out of range for {n} qubits");
        ensure!(!seen[q], Indices, "qubit {q} listed twice");
        seen[q] = true;
    }
    Ok(())
}

/// Qubits of `0..n` not in `list`, ascending.
pub(crate) fn complement(list: &[usize], n: usize) -> Vec<usize> {
    let mut mask = vec![false; n];
    for &q in list {
        mask[q] = true;
    }
    (0..n).filter(|&q| !mask[q]).collect()
}

/// Positions of `sub` inside `list`, or `None` if some element is missing.
pub(crate) fn positions_in(sub: &[usize], list: &[usize]) -> Option<Vec<usize>> {
    sub.iter()
        .map(|q| list.iter().position(|x| x == q))
        .collect()
}
