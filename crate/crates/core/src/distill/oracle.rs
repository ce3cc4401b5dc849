//! Closed-form optimum for pure bipartite states and the Schmidt-basis
//! construction that attains it.

use nalgebra::DMatrix;

use super::engine::pair_positions;
use super::lu_objective;
use crate::error::{ensure, Result};
use crate::qstate::layout::{complement, scatter};
use crate::qstate::linalg::complete_basis;
use crate::qstate::{IsometryMap, Partition, PureState};
use crate::C64;

fn check_spectrum(lambda: &[f64]) -> Result<()> {
    ensure!(
        lambda.windows(2).all(|w| w[0] >= w[1] - 1e-12) && lambda.iter().all(|&l| l >= -1e-12),
        InvalidArgument,
        "Schmidt coefficients must be nonnegative and descending"
    );
    let norm: f64 = lambda.iter().map(|l| l * l).sum();
    ensure!((norm - 1.0).abs() < 1e-9, InvalidArgument, "Σλ² = {norm}, expected 1");
    Ok(())
}

/// Maximum of the LU objective over `U_A ⊗ U_B` for a pure bipartite state
/// with Schmidt coefficients `lambda` (descending):
/// `2^{-m} Σ_k (Σ_{i ∈ G_k} λ_i)²` with `G_k` the `k`-th run of `2^m`
/// consecutive coefficients.
///
/// Each environment value `k` shared by both sides carries one block of `2^m`
/// Schmidt vectors, and a block's overlap with `|Φ_m⟩` is at most
/// `2^{-m/2} Σ λ_i` by Cauchy-Schwarz. Sorting makes the greedy grouping
/// optimal. Missing coefficients count as zero.
pub fn pure_epr_fidelity_closed_form(lambda: &[f64], m: usize) -> Result<f64> {
    check_spectrum(lambda)?;
    let r = 1usize << m;
    let total: f64 = lambda.chunks(r).map(|g| g.iter().sum::<f64>().powi(2)).sum();
    Ok(total / r as f64)
}

/// `(2^{-m/2} Σ_{i<2^m} λ_i)²`: the overlap reached using only the leading
/// block of Schmidt vectors.
pub fn single_block_epr_overlap(lambda: &[f64], m: usize) -> Result<f64> {
    check_spectrum(lambda)?;
    let r = 1usize << m;
    let s: f64 = lambda.iter().take(r).sum();
    Ok(s * s / r as f64)
}

/// Output of [`schmidt_distill`].
#[derive(Debug, Clone)]
pub struct SchmidtDistill {
    pub u_a: IsometryMap,
    pub u_b: IsometryMap,
    pub fidelity: f64,
}

/// Sends Schmidt vector `i` to `|i mod 2^m⟩` on the pair register and
/// `|⌊i / 2^m⌋⟩` on the spectators, on both sides.
pub fn schmidt_distill(state: &PureState, partition: &Partition, m: usize) -> Result<SchmidtDistill> {
    ensure!(partition.n_c() == 0, InvalidArgument, "state must be bipartite (C is not empty)");
    ensure!(
        m >= 1 && m <= partition.n_a() && m <= partition.n_b(),
        InvalidArgument,
        "m = {m} exceeds n_A = {} or n_B = {}",
        partition.n_a(),
        partition.n_b()
    );
    let (pa, pb) = pair_positions(partition, m)?;
    let s = state.schmidt(partition.a())?;
    let left = complete_basis(&s.left)?;
    let right = complete_basis(&s.right)?;
    let u_a = target_map(&pa, partition.n_a(), m) * left.adjoint();
    let u_b = target_map(&pb, partition.n_b(), m) * right.adjoint();
    let u_a = IsometryMap::with_tolerance(u_a, 1e-8)?;
    let u_b = IsometryMap::with_tolerance(u_b, 1e-8)?;
    let fidelity = lu_objective(state, &u_a, &u_b, partition, m)?;
    Ok(SchmidtDistill { u_a, u_b, fidelity })
}

/// Permutation taking `i` to the local index with pair bits `i mod 2^m` and
/// spectator bits `⌊i / 2^m⌋`.
fn target_map(pair_bits: &[usize], n: usize, m: usize) -> DMatrix<C64> {
    let rest = complement(pair_bits, n);
    let d = 1usize << n;
    let mut p = DMatrix::zeros(d, d);
    for i in 0..d {
        let target = scatter(i & ((1 << m) - 1), pair_bits) | scatter(i >> m, &rest);
        p[(target, i)] = C64::new(1.0, 0.0);
    }
    p
}
