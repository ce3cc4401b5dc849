use nalgebra::{DMatrix, DVector};

use super::isometry::IsometryMap;
use super::layout::{check_indices, complement, gather, scatter_table};
use super::linalg::svd_sorted;
use super::Tolerances;
use crate::error::{ensure, Result};
use crate::C64;

/// Largest supported register for dense states.
pub const MAX_QUBITS: usize = 24;

/// Normalised state vector of `n` qubits; basis bit `k` is qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: DVector<C64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalised within 1e-12.
    pub fn new(n: usize, amps: DVector<C64>) -> Result<Self> {
        Self::with_tolerance(n, amps, Tolerances::DEFAULT.norm)
    }

    pub fn with_tolerance(n: usize, amps: DVector<C64>, tol: f64) -> Result<Self> {
        ensure!(n <= MAX_QUBITS, InvalidArgument, "{n} qubits exceed the dense limit");
        ensure!(
            amps.len() == 1 << n,
            Dimension,
            "{} amplitudes for {n} qubits",
            amps.len()
        );
        let norm = amps.norm();
        ensure!((norm - 1.0).abs() <= tol, Numerical, "state norm {norm} is not 1");
        Ok(PureState { n, amps })
    }

    /// Normalises `amps`; fails on a (numerically) zero vector.
    pub fn normalized(n: usize, amps: DVector<C64>) -> Result<Self> {
        let norm = amps.norm();
        ensure!(norm > 1e-300, Numerical, "cannot normalise a zero vector");
        Self::new(n, amps / C64::new(norm, 0.0))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        ensure!(index < 1 << n, Indices, "basis index {index} out of range");
        let mut amps = DVector::zeros(1 << n);
        amps[index] = C64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    /// `|0…0⟩` with an EPR pair `(|00⟩+|11⟩)/√2` on each listed qubit pair.
    pub fn epr_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        check_indices(&flat, n)?;
        let mut amps = DVector::zeros(1 << n);
        let weight = C64::new((0.5f64).powf(pairs.len() as f64 / 2.0), 0.0);
        for s in 0..1usize << pairs.len() {
            let mut idx = 0usize;
            for (j, &(a, b)) in pairs.iter().enumerate() {
                if (s >> j) & 1 == 1 {
                    idx |= (1 << a) | (1 << b);
                }
            }
            amps[idx] = weight;
        }
        Self::new(n, amps)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n: usize) -> Result<Self> {
        ensure!(n >= 1, InvalidArgument, "GHZ needs at least one qubit");
        let mut amps = DVector::zeros(1 << n);
        let s = C64::new(0.5f64.sqrt(), 0.0);
        amps[0] = s;
        amps[(1 << n) - 1] = s;
        Self::new(n, amps)
    }

    /// `self ⊗ high`: `self` occupies qubits `0..self.n`.
    pub fn tensor(&self, high: &PureState) -> Result<Self> {
        let n = self.n + high.n;
        ensure!(n <= MAX_QUBITS, InvalidArgument, "{n} qubits exceed the dense limit");
        let amps = high.amps.kronecker(&self.amps);
        Ok(PureState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        ensure!(self.n == other.n, Dimension, "{} vs {} qubits", self.n, other.n);
        Ok(self.amps.dotc(&other.amps))
    }

    /// Reshapes amplitudes into a matrix with row index over `rows` and column
    /// index over `cols`; the two lists must partition the register.
    pub fn matrix(&self, rows: &[usize], cols: &[usize]) -> Result<DMatrix<C64>> {
        let all: Vec<usize> = rows.iter().chain(cols).copied().collect();
        check_indices(&all, self.n)?;
        ensure!(all.len() == self.n, Indices, "rows and cols must cover all {} qubits", self.n);
        let row_table = scatter_table(rows);
        let col_table = scatter_table(cols);
        Ok(DMatrix::from_fn(row_table.len(), col_table.len(), |r, c| {
            self.amps[row_table[r] | col_table[c]]
        }))
    }

    /// Inverse of [`PureState::matrix`]; renormalises nothing.
    pub fn from_matrix(n: usize, rows: &[usize], cols: &[usize], m: &DMatrix<C64>) -> Result<Self> {
        let all: Vec<usize> = rows.iter().chain(cols).copied().collect();
        check_indices(&all, n)?;
        ensure!(all.len() == n, Indices, "rows and cols must cover all {n} qubits");
        ensure!(
            m.nrows() == 1 << rows.len() && m.ncols() == 1 << cols.len(),
            Dimension,
            "matrix shape {}x{} does not match blocks",
            m.nrows(),
            m.ncols()
        );
        let mut amps = DVector::zeros(1 << n);
        for x in 0..1usize << n {
            amps[x] = m[(gather(x, rows), gather(x, cols))];
        }
        Self::new(n, amps)
    }

    /// Returns `(U ⊗ I_rest)|ψ⟩` with `U` acting on `block`.
    pub fn apply_local(&self, u: &IsometryMap, block: &[usize]) -> Result<Self> {
        ensure!(u.is_unitary(), Dimension, "local map must be unitary");
        ensure!(
            u.d_in() == 1 << block.len(),
            Dimension,
            "unitary of dimension {} on {} qubits",
            u.d_in(),
            block.len()
        );
        check_indices(block, self.n)?;
        let rest = complement(block, self.n);
        let m = self.matrix(block, &rest)?;
        let rotated = u.matrix() * m;
        Self::from_matrix(self.n, block, &rest, &rotated)
    }

    /// Schmidt decomposition across `cut | rest`.
    pub fn schmidt(&self, cut: &[usize]) -> Result<Schmidt> {
        ensure!(
            !cut.is_empty() && cut.len() < self.n,
            InvalidArgument,
            "cut must be a nonempty proper subset"
        );
        check_indices(cut, self.n)?;
        let rest = complement(cut, self.n);
        let m = self.matrix(cut, &rest)?;
        let (u, s, v_t) = svd_sorted(&m);
        Ok(Schmidt { coefficients: s, left: u, right: v_t.transpose() })
    }
}

/// `|ψ⟩ = Σ_i λ_i |left_i⟩ ⊗ |right_i⟩` with `λ` descending.
///
/// `left` holds the cut-side vectors as columns and `right` the complement
/// vectors as columns, so the state matrix is `left · diag(λ) · rightᵀ`.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub left: DMatrix<C64>,
    pub right: DMatrix<C64>,
}

impl Schmidt {
    /// Number of coefficients above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > threshold).count()
    }

    /// `left · diag(λ) · rightᵀ`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let mut scaled = self.left.clone();
        for (k, &l) in self.coefficients.iter().enumerate() {
            scaled.column_mut(k).scale_mut(l);
        }
        scaled * self.right.transpose()
    }
}

pub fn apply_local(state: &PureState, u: &IsometryMap, block: &[usize]) -> Result<PureState> {
    state.apply_local(u, block)
}

pub fn schmidt(state: &PureState, cut: &[usize]) -> Result<Schmidt> {
    state.schmidt(cut)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn hadamard() -> IsometryMap {
        let s = 0.5f64.sqrt();
        IsometryMap::new(DMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)])).unwrap()
    }

    fn cnot_control0_target1() -> IsometryMap {
        // local index bit 0 = control, bit 1 = target
        let mut m = DMatrix::<C64>::zeros(4, 4);
        for x in 0..4usize {
            let y = if x & 1 == 1 { x ^ 2 } else { x };
            m[(y, x)] = c(1.0);
        }
        IsometryMap::new(m).unwrap()
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let psi = PureState::ghz(3).unwrap();
        let out = psi.apply_local(&IsometryMap::identity(4), &[2, 0]).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn x_on_qubit0_flips_lsb() {
        let x = IsometryMap::new(DMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(1.), c(0.)])).unwrap();
        let psi = PureState::basis(2, 0).unwrap().apply_local(&x, &[0]).unwrap();
        assert_eq!(psi, PureState::basis(2, 1).unwrap());
    }

    #[test]
    fn hadamard_then_cnot_gives_epr() {
        let psi = PureState::basis(2, 0).unwrap();
        let psi = psi.apply_local(&hadamard(), &[0]).unwrap();
        let psi = psi.apply_local(&cnot_control0_target1(), &[0, 1]).unwrap();
        let s = 0.5f64.sqrt();
        let want = [s, 0.0, 0.0, s];
        for (a, w) in psi.amplitudes().iter().zip(want) {
            assert!((a - c(w)).norm() < 1e-15);
        }
        assert_eq!(psi, PureState::epr_pairs(2, &[(0, 1)]).unwrap());
    }

    #[test]
    fn apply_local_errors() {
        let psi = PureState::basis(2, 0).unwrap();
        assert!(psi.apply_local(&IsometryMap::identity(4), &[0]).is_err());
        assert!(psi.apply_local(&IsometryMap::identity(2), &[5]).is_err());
    }

    #[test]
    fn schmidt_of_epr_and_product() {
        let epr = PureState::epr_pairs(2, &[(0, 1)]).unwrap();
        let s = epr.schmidt(&[0]).unwrap();
        let h = 0.5f64.sqrt();
        assert!((s.coefficients[0] - h).abs() < 1e-14 && (s.coefficients[1] - h).abs() < 1e-14);

        let prod = PureState::basis(3, 0b101).unwrap();
        let s = prod.schmidt(&[1]).unwrap();
        assert_eq!(s.rank(1e-12), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-14);
        assert!(prod.schmidt(&[]).is_err());
        assert!(prod.schmidt(&[0, 1, 2]).is_err());
    }

    #[test]
    fn schmidt_reconstructs_state() {
        let psi = PureState::ghz(4).unwrap();
        let cut = [3, 1];
        let s = psi.schmidt(&cut).unwrap();
        let rest = complement(&cut, 4);
        let back = PureState::from_matrix(4, &cut, &rest, &s.reconstruct()).unwrap();
        assert!((back.amplitudes() - psi.amplitudes()).norm() < 1e-12);
        let total: f64 = s.coefficients.iter().map(|l| l * l).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_orders_low_then_high() {
        let one = PureState::basis(1, 1).unwrap();
        let zero = PureState::basis(1, 0).unwrap();
        assert_eq!(one.tensor(&zero).unwrap(), PureState::basis(2, 0b01).unwrap());
    }
}
