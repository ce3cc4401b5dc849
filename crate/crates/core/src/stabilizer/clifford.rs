//! Uniform sampling of Clifford tableaux by the quantum-Mallows
//! decomposition `C = F1 · H · S · F2` of Bravyi and Maslov.

use rand::Rng;

use super::pauli::PauliString;
use super::MAX_TABLEAU_QUBITS;
use crate::error::{ensure, Result};

/// Images of `X_j` (rows `0..n`) and `Z_j` (rows `n..2n`) under conjugation
/// by a Clifford unitary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clifford {
    n: usize,
    rows: Vec<PauliString>,
}

/// `2n × 2n` GF(2) matrix with row `i` stored as `x | z << n`.
type BitMatrix = Vec<u64>;

fn bit(row: u64, col: usize) -> bool {
    (row >> col) & 1 == 1
}

fn gf2_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    a.iter()
        .map(|&row| {
            let mut acc = 0u64;
            for (k, &bk) in b.iter().enumerate() {
                if bit(row, k) {
                    acc ^= bk;
                }
            }
            acc
        })
        .collect()
}

/// Hadamard mask and qubit permutation drawn from the quantum Mallows law.
fn sample_qmallows<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<bool>, Vec<usize>) {
    let mut had = vec![false; n];
    let mut perm = vec![0; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let m = (n - i) as i32;
        let eps = 4f64.powi(-m);
        let r: f64 = rng.random();
        let index = -((r + (1.0 - r) * eps).log2().ceil()) as i32;
        had[i] = index < m;
        let k = if index < m { index } else { 2 * m - index - 1 };
        perm[i] = remaining.remove(k as usize);
    }
    (had, perm)
}

/// Random strictly-lower entries; mirrored above the diagonal if `symmetric`.
fn fill_tril<R: Rng + ?Sized>(mat: &mut [Vec<bool>], rng: &mut R, symmetric: bool) {
    let n = mat.len();
    for i in 1..n {
        for j in 0..i {
            let v: bool = rng.random();
            mat[i][j] = v;
            if symmetric {
                mat[j][i] = v;
            }
        }
    }
}

/// Inverse of a unit lower-triangular GF(2) matrix.
fn inverse_unit_lower(l: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = l.len();
    let mut inv = vec![vec![false; n]; n];
    for col in 0..n {
        inv[col][col] = true;
        for i in col + 1..n {
            let mut acc = false;
            for k in col..i {
                acc ^= l[i][k] & inv[k][col];
            }
            inv[i][col] = acc;
        }
    }
    inv
}

fn matmul_bool(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(false, |acc, k| acc ^ (a[i][k] & b[k][j]))).collect())
        .collect()
}

/// `[[delta, 0], [gamma·delta, delta^{-T}]]` as a bit matrix.
fn layer(n: usize, gamma: &[Vec<bool>], delta: &[Vec<bool>]) -> BitMatrix {
    let prod = matmul_bool(gamma, delta);
    let inv = inverse_unit_lower(delta);
    let mut out = vec![0u64; 2 * n];
    for i in 0..n {
        for j in 0..n {
            if delta[i][j] {
                out[i] |= 1 << j;
            }
            if prod[i][j] {
                out[n + i] |= 1 << j;
            }
            // transpose of the inverse
            if inv[j][i] {
                out[n + i] |= 1 << (n + j);
            }
        }
    }
    out
}

impl Clifford {
    pub fn identity(n: usize) -> Result<Self> {
        ensure!(n <= MAX_TABLEAU_QUBITS, InvalidArgument, "{n} qubits exceed {MAX_TABLEAU_QUBITS}");
        let mut rows: Vec<PauliString> = (0..n).map(PauliString::single_x).collect();
        rows.extend((0..n).map(PauliString::single_z));
        Ok(Clifford { n, rows })
    }

    /// Uniformly random element of the `n`-qubit Clifford group, including
    /// random signs.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        ensure!(
            (1..=MAX_TABLEAU_QUBITS).contains(&n),
            InvalidArgument,
            "need 1 ≤ n ≤ {MAX_TABLEAU_QUBITS}, got {n}"
        );
        let (had, perm) = sample_qmallows(n, rng);
        let diag = |rng: &mut R| {
            let mut m = vec![vec![false; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = rng.random();
            }
            m
        };
        let eye = || {
            let mut m = vec![vec![false; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = true;
            }
            m
        };
        let mut gamma1 = diag(rng);
        let mut gamma2 = diag(rng);
        let mut delta1 = eye();
        let mut delta2 = eye();
        fill_tril(&mut gamma1, rng, true);
        fill_tril(&mut gamma2, rng, true);
        fill_tril(&mut delta1, rng, false);
        fill_tril(&mut delta2, rng, false);

        let table1 = layer(n, &gamma1, &delta1);
        let table2 = layer(n, &gamma2, &delta2);
        let mut table: BitMatrix = (0..2 * n).map(|i| table2[if i < n { perm[i] } else { n + perm[i - n] }]).collect();
        for (i, &h) in had.iter().enumerate() {
            if h {
                table.swap(i, n + i);
            }
        }
        let tableau = gf2_mul(&table1, &table);
        let mask = (1u64 << n) - 1;
        let rows = tableau
            .into_iter()
            .map(|row| PauliString { x: row & mask, z: (row >> n) & mask, sign: rng.random() })
            .collect();
        Ok(Clifford { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `C X_j C†`.
    pub fn image_x(&self, j: usize) -> PauliString {
        self.rows[j]
    }

    /// `C Z_j C†`.
    pub fn image_z(&self, j: usize) -> PauliString {
        self.rows[self.n + j]
    }

    /// Checks the commutation relations of a symplectic tableau.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        (0..2 * n).all(|i| {
            (0..2 * n).all(|j| {
                let partner = i != j && (i % n == j % n);
                self.rows[i].commutes(&self.rows[j]) != partner
            })
        })
    }
}
