//! Logical-operator search for encodings `V: C → A ⊗ B`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::qstate::linalg::svd_sorted;
use crate::qstate::IsometryMap;
use crate::random::{haar_isometry, haar_unitary, SeedSpec};
use crate::C64;

/// Largest input register scanned exhaustively by [`logical_pauli_scan`].
pub const MAX_SCAN_QUBITS: usize = 6;

/// Encoding isometry with output index `a + d_A · b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    v: IsometryMap,
    n_a: usize,
    n_b: usize,
    n_c: usize,
}

impl Encoding {
    pub fn new(v: IsometryMap, n_a: usize, n_b: usize) -> Result<Self> {
        ensure!(
            v.d_out() == 1usize << (n_a + n_b),
            Dimension,
            "encoding output {} does not match n_A + n_B = {}",
            v.d_out(),
            n_a + n_b
        );
        ensure!(v.d_in().is_power_of_two(), Dimension, "input dimension {} is not a power of two", v.d_in());
        let n_c = v.d_in().trailing_zeros() as usize;
        ensure!(n_a >= 1, InvalidArgument, "A must be nonempty");
        Ok(Encoding { v, n_a, n_b, n_c })
    }

    /// Haar random isometry `C^{2^{n_C}} → C^{2^{n_A + n_B}}`.
    pub fn haar(n_a: usize, n_b: usize, n_c: usize, seed: SeedSpec) -> Result<Self> {
        let v = haar_isometry(1 << n_c, 1 << (n_a + n_b), seed)?;
        Self::new(v, n_a, n_b)
    }

    /// `V|c⟩ = |c⟩` on the low qubits of A, zeros elsewhere.
    pub fn trivial(n_a: usize, n_b: usize, n_c: usize) -> Result<Self> {
        ensure!(n_c <= n_a, InvalidArgument, "cannot embed {n_c} qubits into {n_a}");
        let d_c = 1usize << n_c;
        let mut v = DMatrix::zeros(1 << (n_a + n_b), d_c);
        for c in 0..d_c {
            v[(c, c)] = C64::new(1.0, 0.0);
        }
        Self::new(IsometryMap::new(v)?, n_a, n_b)
    }

    pub fn map(&self) -> &IsometryMap {
        &self.v
    }
    pub fn n_a(&self) -> usize {
        self.n_a
    }
    pub fn n_b(&self) -> usize {
        self.n_b
    }
    pub fn n_c(&self) -> usize {
        self.n_c
    }
    pub fn d_a(&self) -> usize {
        1 << self.n_a
    }
    pub fn d_c(&self) -> usize {
        1 << self.n_c
    }
}

/// `G = Tr_B(V U_C† V†)`, so that the fidelity is `Tr(U_A G) / d_C`.
pub fn reduced_logical_operator(enc: &Encoding, u_c: &IsometryMap) -> Result<DMatrix<C64>> {
    ensure!(
        u_c.is_unitary() && u_c.d_in() == enc.d_c(),
        Dimension,
        "U_C must be a unitary of dimension {}",
        enc.d_c()
    );
    let v = enc.map().matrix();
    let w = v * u_c.matrix().adjoint();
    let d_a = enc.d_a();
    let mut g = DMatrix::zeros(d_a, d_a);
    for b in 0..1usize << enc.n_b() {
        g += w.rows(b * d_a, d_a) * v.rows(b * d_a, d_a).adjoint();
    }
    Ok(g)
}

/// `⟨Φ|(V ⊗ I)† (U_A ⊗ U_C^*) (V ⊗ I)|Φ⟩` for the normalised maximally
/// entangled `|Φ⟩` on C and a reference copy.
pub fn logical_fidelity(enc: &Encoding, u_a: &IsometryMap, u_c: &IsometryMap) -> Result<C64> {
    ensure!(
        u_a.is_unitary() && u_a.d_in() == enc.d_a(),
        Dimension,
        "U_A must be a unitary of dimension {}",
        enc.d_a()
    );
    let g = reduced_logical_operator(enc, u_c)?;
    Ok((u_a.matrix() * g).trace() / enc.d_c() as f64)
}

/// `max_{U_A} |f| = ‖G‖₁ / d_C`, attained at `U_A = X W†` for `G = W Σ X†`.
pub fn logical_best_over_ua(enc: &Encoding, u_c: &IsometryMap) -> Result<(f64, IsometryMap)> {
    let g = reduced_logical_operator(enc, u_c)?;
    let (w, s, x_t) = svd_sorted(&g);
    let u_a = x_t.adjoint() * w.adjoint();
    let value = s.iter().sum::<f64>() / enc.d_c() as f64;
    Ok((value, IsometryMap::with_tolerance(u_a, 1e-8)?))
}

/// Dense Pauli string; character `j` (one of `IXYZ`) acts on qubit `j`.
pub fn pauli_matrix(label: &str) -> Result<DMatrix<C64>> {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    let mut m = DMatrix::from_element(1, 1, one);
    for ch in label.chars() {
        let p = match ch {
            'I' => DMatrix::from_row_slice(2, 2, &[one, zero, zero, one]),
            'X' => DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
            'Y' => DMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]),
            'Z' => DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
            other => return Err(crate::Error::Parse(format!("'{other}' is not a Pauli letter"))),
        };
        m = p.kronecker(&m);
    }
    Ok(m)
}

/// Best non-identity Pauli logical found by [`logical_pauli_scan`].
#[derive(Debug, Clone)]
pub struct PauliScan {
    pub value: f64,
    pub pauli: String,
    pub u_a: IsometryMap,
}

/// Exhaustive search over the `4^{n_C} − 1` non-identity Pauli strings on C.
pub fn logical_pauli_scan(enc: &Encoding) -> Result<PauliScan> {
    let n_c = enc.n_c();
    ensure!(
        (1..=MAX_SCAN_QUBITS).contains(&n_c),
        InvalidArgument,
        "Pauli scan needs 1 ≤ n_C ≤ {MAX_SCAN_QUBITS}, got {n_c}"
    );
    let mut best: Option<PauliScan> = None;
    for k in 1..1usize << (2 * n_c) {
        let label: String = (0..n_c).map(|j| b"IXYZ"[(k >> (2 * j)) & 3] as char).collect();
        let p = IsometryMap::new(pauli_matrix(&label)?)?;
        let (value, u_a) = logical_best_over_ua(enc, &p)?;
        if best.as_ref().is_none_or(|b| value > b.value + 1e-12) {
            best = Some(PauliScan { value, pauli: label, u_a });
        }
    }
    Ok(best.expect("scan covers at least three strings"))
}

/// Settings for the penalised continuous search over `U_C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousLogicalConfig {
    /// Weight of `|Tr U_C / d_C|²` subtracted from the fidelity.
    pub penalty: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: SeedSpec,
}

impl ContinuousLogicalConfig {
    pub fn new(seed: SeedSpec) -> Self {
        ContinuousLogicalConfig { penalty: 1.0, restarts: 8, max_iters: 200, seed }
    }
}

/// Result of [`logical_continuous_search`].
#[derive(Debug, Clone)]
pub struct ContinuousLogical {
    /// Penalised objective at the returned `U_C`.
    pub objective: f64,
    /// `max_{U_A} |f|` at the returned `U_C`.
    pub value: f64,
    /// `|Tr U_C| / d_C`.
    pub w: f64,
    pub u_a: IsometryMap,
    pub u_c: IsometryMap,
}

/// Maximises `‖G(U_C)‖₁ / d_C − penalty · |Tr U_C / d_C|²` by accepting polar
/// steps on the linearised objective while they improve it.
pub fn logical_continuous_search(enc: &Encoding, config: &ContinuousLogicalConfig) -> Result<ContinuousLogical> {
    ensure!(config.restarts >= 1, InvalidArgument, "restarts must be at least 1");
    ensure!(config.penalty >= 0.0, InvalidArgument, "penalty must be nonnegative");
    let d_c = enc.d_c();
    let dc = d_c as f64;
    let v = enc.map().matrix();
    let eval = |u_c: &IsometryMap| -> Result<(f64, f64, IsometryMap)> {
        let (value, u_a) = logical_best_over_ua(enc, u_c)?;
        let w = (u_c.matrix().trace() / dc).norm();
        Ok((value - config.penalty * w * w, value, u_a))
    };
    let mut best: Option<ContinuousLogical> = None;
    for r in 0..config.restarts {
        let mut u_c = haar_unitary(d_c, config.seed.derive(r as u64))?;
        let (mut obj, mut value, mut u_a) = eval(&u_c)?;
        for _ in 0..config.max_iters {
            let d_b = 1usize << enc.n_b();
            let ua_ib = DMatrix::<C64>::identity(d_b, d_b).kronecker(u_a.matrix());
            let k = v.adjoint() * ua_ib * v;
            let t0 = u_c.matrix().trace();
            let shift = DMatrix::<C64>::identity(d_c, d_c) * (t0 * (2.0 * config.penalty / dc));
            let target = k - shift;
            let (w_, _, x_t) = svd_sorted(&target);
            let candidate = IsometryMap::with_tolerance(w_ * x_t, 1e-8)?;
            let (c_obj, c_value, c_ua) = eval(&candidate)?;
            if c_obj <= obj + 1e-12 {
                break;
            }
            u_c = candidate;
            obj = c_obj;
            value = c_value;
            u_a = c_ua;
        }
        let w = (u_c.matrix().trace() / dc).norm();
        if best.as_ref().is_none_or(|b| obj > b.objective) {
            best = Some(ContinuousLogical { objective: obj, value, w, u_a, u_c });
        }
    }
    Ok(best.expect("at least one restart"))
}
