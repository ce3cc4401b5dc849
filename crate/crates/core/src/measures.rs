//! Entanglement and correlation functionals. All entropic quantities are in
//! bits.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::qstate::layout::{complement, positions_in, scatter_table};
use crate::qstate::{hermitian_eigvals, partial_trace, reduce_onto, DensityMatrix, Partition, PureState};
use crate::C64;

/// Eigenvalues within this distance outside `[0, 1]` are clamped; anything
/// further out is reported as a numerical failure.
pub const CLIP_WINDOW: f64 = 1e-9;

/// Von Neumann entropy `−Σ p log₂ p` of a density matrix.
pub fn entropy_vn(dm: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&hermitian_eigvals(dm.matrix())?)
}

/// Entropy of a probability spectrum with the clipping rule above.
pub fn entropy_of_spectrum(eigs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in eigs {
        ensure!(
            (-CLIP_WINDOW..=1.0 + CLIP_WINDOW).contains(&p),
            Numerical,
            "eigenvalue {p:e} outside the clipping window"
        );
        let p = p.clamp(0.0, 1.0);
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s)
}

/// `S(ρ_R)` for a region of a pure state. Uses the smaller side of the cut.
pub fn region_entropy(state: &PureState, region: &[usize]) -> Result<f64> {
    if region.is_empty() || region.len() == state.n() {
        return Ok(0.0);
    }
    let rest = complement(region, state.n());
    let side = if region.len() <= rest.len() { region.to_vec() } else { rest };
    entropy_vn(&partial_trace(state, &side)?)
}

/// `I(A:B) = S_A + S_B − S_AB`.
pub fn mutual_information(state: &PureState, partition: &Partition) -> Result<f64> {
    let s_a = entropy_vn(&partial_trace(state, partition.a())?)?;
    let s_b = entropy_vn(&partial_trace(state, partition.b())?)?;
    let s_ab = entropy_vn(&partial_trace(state, &partition.ab())?)?;
    Ok(s_a + s_b - s_ab)
}

/// `log₂ Σ_j |λ_j|` over the spectrum of `ρ^{T_block}`.
pub fn log_negativity(dm: &DensityMatrix, block: &[usize]) -> Result<f64> {
    let pt = dm.partial_transpose(block)?;
    let norm: f64 = hermitian_eigvals(&pt)?.iter().map(|l| l.abs()).sum();
    Ok(norm.log2())
}

/// `Tr(ρ · (Π_EPR ⊗ I))` with `r_a[i]` paired to `r_b[i]`, computed without
/// forming the projector.
pub fn epr_expectation(dm: &DensityMatrix, r_a: &[usize], r_b: &[usize]) -> Result<f64> {
    ensure!(
        r_a.len() == r_b.len() && !r_a.is_empty(),
        InvalidArgument,
        "pair lists of lengths {} and {}",
        r_a.len(),
        r_b.len()
    );
    let m = r_a.len();
    let pa = positions_in(r_a, dm.qubits()).ok_or_else(|| Error::Indices("R_A not in density matrix".into()))?;
    let pb = positions_in(r_b, dm.qubits()).ok_or_else(|| Error::Indices("R_B not in density matrix".into()))?;
    let mut both = pa.clone();
    both.extend(&pb);
    crate::qstate::layout::check_indices(&both, dm.qubits().len())?;
    let rest = complement(&both, dm.qubits().len());
    let ta = scatter_table(&pa);
    let tb = scatter_table(&pb);
    let te = scatter_table(&rest);
    let rho = dm.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for &e in &te {
        for s in 0..1usize << m {
            let row = ta[s] | tb[s] | e;
            for t in 0..1usize << m {
                acc += rho[(row, ta[t] | tb[t] | e)];
            }
        }
    }
    Ok(acc.re / (1u64 << m) as f64)
}

/// Pure-state form of [`epr_expectation`]: `‖(⟨Φ_m| ⊗ I)|ψ⟩‖²`.
pub fn epr_expectation_pure(state: &PureState, r_a: &[usize], r_b: &[usize]) -> Result<f64> {
    ensure!(
        r_a.len() == r_b.len() && !r_a.is_empty(),
        InvalidArgument,
        "pair lists of lengths {} and {}",
        r_a.len(),
        r_b.len()
    );
    let mut both = r_a.to_vec();
    both.extend(r_b);
    crate::qstate::layout::check_indices(&both, state.n())?;
    let rest = complement(&both, state.n());
    let ta = scatter_table(r_a);
    let tb = scatter_table(r_b);
    let amps = state.amplitudes();
    let mut total = 0.0;
    for e in scatter_table(&rest) {
        let amp: C64 = (0..ta.len()).map(|s| amps[ta[s] | tb[s] | e]).sum();
        total += amp.norm_sqr();
    }
    Ok(total / ta.len() as f64)
}

/// `max(S_A − S_AB, S_B − S_AB, 0)`.
pub fn hashing_bound(s_a: f64, s_b: f64, s_ab: f64) -> f64 {
    (s_a - s_ab).max(s_b - s_ab).max(0.0)
}

/// Trace distance `‖ρ_A − I/2^{n_A}‖₁` for a region smaller than its complement.
pub fn page_deviation(state: &PureState, a: &[usize]) -> Result<f64> {
    ensure!(
        !a.is_empty() && 2 * a.len() < state.n(),
        InvalidArgument,
        "|A| = {} must be below n/2 = {}",
        a.len(),
        state.n() as f64 / 2.0
    );
    let rho = partial_trace(state, a)?;
    let d = rho.dim();
    let diff = rho.matrix() - nalgebra::DMatrix::<C64>::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
    Ok(hermitian_eigvals(&diff)?.iter().map(|l| l.abs()).sum())
}

/// Entropic profile of a tripartite pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub s_ab: f64,
    pub i_ab: f64,
    pub e_n: f64,
    pub hash_ab: f64,
    /// Only defined when `|A| < n/2`.
    pub page_dev_a: Option<f64>,
}

impl MeasureReport {
    pub fn compute(state: &PureState, partition: &Partition) -> Result<Self> {
        let s_a = entropy_vn(&partial_trace(state, partition.a())?)?;
        let s_b = entropy_vn(&partial_trace(state, partition.b())?)?;
        let s_c = if partition.n_c() == 0 { 0.0 } else { entropy_vn(&partial_trace(state, partition.c())?)? };
        let rho_ab = reduce_onto(state, &[partition.a(), partition.b()])?;
        let s_ab = entropy_vn(&rho_ab)?;
        let e_n = log_negativity(&rho_ab, partition.a())?;
        let page_dev_a = if 2 * partition.n_a() < partition.n() {
            Some(page_deviation(state, partition.a())?)
        } else {
            None
        };
        Ok(MeasureReport {
            s_a,
            s_b,
            s_c,
            s_ab,
            i_ab: s_a + s_b - s_ab,
            e_n,
            hash_ab: hashing_bound(s_a, s_b, s_ab),
            page_dev_a,
        })
    }

    /// Flat `(name, value)` pairs for record output.
    pub fn fields(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("s_a", self.s_a),
            ("s_b", self.s_b),
            ("s_c", self.s_c),
            ("s_ab", self.s_ab),
            ("i_ab", self.i_ab),
            ("e_n", self.e_n),
            ("hash_ab", self.hash_ab),
        ];
        if let Some(p) = self.page_dev_a {
            out.push(("page_dev_a", p));
        }
        out
    }
}
