use nalgebra::DMatrix;

use super::layout::{check_indices, complement, positions_in, scatter_table};
use super::linalg::{hermitian_eigvals, hermiticity_error};
use super::state::PureState;
use super::Tolerances;
use crate::error::{ensure, Result};
use crate::C64;

/// Hermitian, positive semidefinite, unit-trace matrix on a list of qubits.
///
/// `qubits` gives the global label of each local index bit. `blocks`
/// partitions `qubits` into registered subsystems; partial transposes act on
/// unions of registered blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity with default tolerances.
    pub fn new(qubits: Vec<usize>, blocks: Vec<Vec<usize>>, matrix: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(qubits, blocks, matrix, &Tolerances::DEFAULT)
    }

    pub fn with_tolerance(
        qubits: Vec<usize>,
        blocks: Vec<Vec<usize>>,
        matrix: DMatrix<C64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let dm = Self::from_parts(qubits, blocks, matrix)?;
        let herm = hermiticity_error(&dm.matrix);
        ensure!(herm <= tol.hermitian, Numerical, "not Hermitian (deviation {herm:e})");
        let tr = dm.matrix.trace();
        ensure!(
            (tr.re - 1.0).abs() <= tol.trace && tr.im.abs() <= tol.trace,
            Numerical,
            "trace {tr} is not 1"
        );
        let min = hermitian_eigvals(&dm.matrix)?.first().copied().unwrap_or(0.0);
        ensure!(min >= -tol.psd, Numerical, "negative eigenvalue {min:e}");
        Ok(dm)
    }

    fn from_parts(qubits: Vec<usize>, blocks: Vec<Vec<usize>>, matrix: DMatrix<C64>) -> Result<Self> {
        let max = qubits.iter().copied().max().map_or(0, |q| q + 1);
        check_indices(&qubits, max)?;
        ensure!(
            matrix.nrows() == 1 << qubits.len() && matrix.is_square(),
            Dimension,
            "{}x{} matrix for {} qubits",
            matrix.nrows(),
            matrix.ncols(),
            qubits.len()
        );
        let mut flat: Vec<usize> = blocks.iter().flatten().copied().collect();
        flat.sort_unstable();
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        ensure!(flat == sorted, Indices, "blocks must partition the qubit list");
        Ok(DensityMatrix { qubits, blocks, matrix })
    }

    /// Maximally mixed state `I/2^k` on `qubits`, one block per qubit.
    pub fn maximally_mixed(qubits: Vec<usize>) -> Result<Self> {
        let d = 1usize << qubits.len();
        let blocks = qubits.iter().map(|&q| vec![q]).collect();
        let m = DMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
        Self::from_parts(qubits, blocks, m)
    }

    /// `|ψ⟩⟨ψ|` on all qubits of `state`, one block per qubit.
    pub fn from_pure(state: &PureState) -> Self {
        let qubits: Vec<usize> = (0..state.n()).collect();
        let blocks = qubits.iter().map(|&q| vec![q]).collect();
        let a = state.amplitudes();
        let matrix = a * a.adjoint();
        DensityMatrix { qubits, blocks, matrix }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Dimension of each registered block.
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| 1 << b.len()).collect()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Replaces the block registration (must still partition the qubits).
    pub fn with_blocks(self, blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_parts(self.qubits, blocks, self.matrix)
    }

    /// Local bit positions of `block`, which must be a union of registered blocks.
    fn registered_positions(&self, block: &[usize]) -> Result<Vec<usize>> {
        ensure!(!block.is_empty(), Indices, "empty block");
        let pos = positions_in(block, &self.qubits)
            .ok_or_else(|| crate::Error::Indices(format!("block {block:?} not in {:?}", self.qubits)))?;
        for b in &self.blocks {
            let inside = b.iter().filter(|q| block.contains(q)).count();
            ensure!(
                inside == 0 || inside == b.len(),
                Indices,
                "block {block:?} splits registered block {b:?}"
            );
        }
        Ok(pos)
    }

    /// Reduced matrix on `keep` (a subset of this matrix's qubits).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        ensure!(!keep.is_empty(), Indices, "keep list is empty");
        let keep_pos = positions_in(keep, &self.qubits)
            .ok_or_else(|| crate::Error::Indices(format!("{keep:?} not in {:?}", self.qubits)))?;
        check_indices(&keep_pos, self.qubits.len())?;
        let rest_pos = complement(&keep_pos, self.qubits.len());
        let kt = scatter_table(&keep_pos);
        let rt = scatter_table(&rest_pos);
        let mut out = DMatrix::<C64>::zeros(kt.len(), kt.len());
        for j in 0..kt.len() {
            for i in 0..kt.len() {
                let mut acc = C64::new(0.0, 0.0);
                for &e in &rt {
                    acc += self.matrix[(kt[i] | e, kt[j] | e)];
                }
                out[(i, j)] = acc;
            }
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|q| keep.contains(q)).collect::<Vec<_>>())
            .filter(|b: &Vec<usize>| !b.is_empty())
            .collect();
        // kept blocks follow the original registration order, qubits follow `keep`
        Ok(DensityMatrix { qubits: keep.to_vec(), blocks, matrix: out })
    }

    /// `ρ^{T_block}`; Hermitian with the same trace, not necessarily PSD.
    pub fn partial_transpose(&self, block: &[usize]) -> Result<DMatrix<C64>> {
        let pos = self.registered_positions(block)?;
        let mask: usize = pos.iter().map(|p| 1usize << p).sum();
        let d = self.dim();
        Ok(DMatrix::from_fn(d, d, |i, j| {
            let ii = (i & !mask) | (j & mask);
            let jj = (j & !mask) | (i & mask);
            self.matrix[(ii, jj)]
        }))
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Anything a reduced density matrix can be taken from.
pub trait Reducible {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix>;
}

impl Reducible for PureState {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        ensure!(!keep.is_empty(), Indices, "keep list is empty");
        check_indices(keep, self.n())?;
        let rest = complement(keep, self.n());
        let m = self.matrix(keep, &rest)?;
        let matrix = &m * m.adjoint();
        let blocks = keep.iter().map(|&q| vec![q]).collect();
        Ok(DensityMatrix { qubits: keep.to_vec(), blocks, matrix })
    }
}

impl Reducible for DensityMatrix {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.partial_trace(keep)
    }
}

/// Reduced density matrix on `keep`, registering one block per qubit.
pub fn partial_trace<S: Reducible + ?Sized>(state: &S, keep: &[usize]) -> Result<DensityMatrix> {
    state.reduce(keep)
}

/// Reduced density matrix on the concatenation of `blocks`, registering each
/// given block as a subsystem.
pub fn reduce_onto(state: &PureState, blocks: &[&[usize]]) -> Result<DensityMatrix> {
    let keep: Vec<usize> = blocks.iter().flat_map(|b| b.iter().copied()).collect();
    let dm = state.reduce(&keep)?;
    dm.with_blocks(blocks.iter().map(|b| b.to_vec()).collect())
}

pub fn partial_transpose(dm: &DensityMatrix, block: &[usize]) -> Result<DMatrix<C64>> {
    dm.partial_transpose(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::hermitian_eigvals;

    fn close(a: C64, b: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() < 1e-14
    }

    #[test]
    fn epr_marginal_is_maximally_mixed() {
        let epr = PureState::epr_pairs(2, &[(0, 1)]).unwrap();
        let rho = partial_trace(&epr, &[0]).unwrap();
        assert!(close(rho.matrix()[(0, 0)], 0.5) && close(rho.matrix()[(1, 1)], 0.5));
        assert!(close(rho.matrix()[(0, 1)], 0.0));
    }

    #[test]
    fn product_marginal() {
        // qubit 0 in |0⟩, qubit 1 in |+⟩
        let s = 0.5f64.sqrt();
        let amps = nalgebra::DVector::from_vec(vec![
            C64::new(s, 0.),
            C64::new(0., 0.),
            C64::new(s, 0.),
            C64::new(0., 0.),
        ]);
        let psi = PureState::new(2, amps).unwrap();
        let rho = partial_trace(&psi, &[0]).unwrap();
        assert!(close(rho.matrix()[(0, 0)], 1.0) && close(rho.matrix()[(1, 1)], 0.0));
    }

    #[test]
    fn ghz_two_qubit_marginal() {
        let rho = partial_trace(&PureState::ghz(3).unwrap(), &[0, 1]).unwrap();
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j && (i == 0 || i == 3) { 0.5 } else { 0.0 };
                assert!(close(m[(i, j)], want));
            }
        }
    }

    #[test]
    fn trace_errors() {
        let psi = PureState::ghz(2).unwrap();
        assert!(partial_trace(&psi, &[]).is_err());
        assert!(partial_trace(&psi, &[4]).is_err());
    }

    #[test]
    fn epr_partial_transpose_spectrum() {
        let epr = PureState::epr_pairs(2, &[(0, 1)]).unwrap();
        let rho = DensityMatrix::from_pure(&epr);
        let pt = rho.partial_transpose(&[0]).unwrap();
        let ev = hermitian_eigvals(&pt).unwrap();
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (e, w) in ev.iter().zip(want) {
            assert!((e - w).abs() < 1e-12);
        }
    }

    #[test]
    fn unregistered_block_rejected() {
        let psi = PureState::ghz(3).unwrap();
        let rho = reduce_onto(&psi, &[&[0, 1], &[2]]).unwrap();
        assert!(rho.partial_transpose(&[0]).is_err());
        assert!(rho.partial_transpose(&[0, 1]).is_ok());
        assert!(rho.partial_transpose(&[5]).is_err());
    }

    #[test]
    fn density_of_marginal_of_marginal() {
        let psi = PureState::ghz(3).unwrap();
        let direct = partial_trace(&psi, &[2]).unwrap();
        let twice = partial_trace(&partial_trace(&psi, &[0, 2]).unwrap(), &[2]).unwrap();
        assert!((direct.matrix() - twice.matrix()).norm() < 1e-14);
    }

    #[test]
    fn validating_constructor() {
        let bad = DMatrix::from_row_slice(2, 2, &[C64::new(1.5, 0.), C64::new(0., 0.), C64::new(0., 0.), C64::new(-0.5, 0.)]);
        assert!(DensityMatrix::new(vec![0], vec![vec![0]], bad).is_err());
        let mixed = DensityMatrix::maximally_mixed(vec![0, 1]).unwrap();
        assert!(DensityMatrix::new(vec![0, 1], vec![vec![0], vec![1]], mixed.matrix().clone()).is_ok());
    }
}
