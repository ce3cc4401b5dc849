//! Stabilizer states: uniform sampling, GF(2) entropies, the tripartite
//! EPR/GHZ decomposition and Clifford encodings with known logical
//! operators.

mod clifford;
mod pauli;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::distill::Encoding;
use crate::error::{ensure, Error, Result};
use crate::qstate::layout::check_indices;
use crate::qstate::{IsometryMap, Partition, PureState};
use crate::random::SeedSpec;
use crate::C64;

pub use clifford::Clifford;
pub use pauli::PauliString;

/// Widest register a tableau can hold (`x` and `z` share one `u64` in the
/// GF(2) routines).
pub const MAX_TABLEAU_QUBITS: usize = 32;
/// Widest register [`to_dense`] expands.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Stabilizer state given by `n` independent commuting generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tableau {
    n: usize,
    generators: Vec<PauliString>,
}

/// `x | z << 32` restricted to the qubits in `mask`.
fn packed(p: &PauliString, mask: u64) -> u64 {
    (p.x & mask) | ((p.z & mask) << 32)
}

fn mask_of(qubits: &[usize]) -> u64 {
    qubits.iter().fold(0, |m, &q| m | (1 << q))
}

/// GF(2) rank of packed row vectors.
fn gf2_rank(rows: impl IntoIterator<Item = u64>) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in rows {
        for &b in &basis {
            if v & (1 << b.trailing_zeros()) != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

impl Tableau {
    /// Checks that the generators commute and are independent.
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        ensure!(n <= MAX_TABLEAU_QUBITS, InvalidArgument, "{n} qubits exceed {MAX_TABLEAU_QUBITS}");
        ensure!(generators.len() == n, Dimension, "{} generators for {n} qubits", generators.len());
        let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
        ensure!(
            generators.iter().all(|g| g.support() & !full == 0),
            Indices,
            "generator acts outside {n} qubits"
        );
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                ensure!(a.commutes(b), InvalidArgument, "generators {} and {} anticommute", a.label(n), b.label(n));
            }
        }
        let rank = gf2_rank(generators.iter().map(|g| packed(g, full)));
        ensure!(rank == n, InvalidArgument, "generators have GF(2) rank {rank} < {n}");
        Ok(Tableau { n, generators })
    }

    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(PauliString::single_z).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Independent elements of the stabilizer group supported inside the
    /// complement of `outside`, packed over all qubits.
    fn supported_away_from(&self, outside: u64) -> Vec<u64> {
        let full = u64::MAX >> (64 - self.n.max(1));
        let mut basis: Vec<(u64, u64)> = Vec::new();
        let mut kernel = Vec::new();
        for g in &self.generators {
            let mut v = packed(g, outside);
            let mut f = packed(g, full);
            for &(bv, bf) in &basis {
                if v & (1 << bv.trailing_zeros()) != 0 {
                    v ^= bv;
                    f ^= bf;
                }
            }
            if v == 0 {
                kernel.push(f);
            } else {
                basis.push((v, f));
            }
        }
        kernel
    }
}

/// Uniformly random `n`-qubit stabilizer state: the image of `|0…0⟩` under a
/// uniform Clifford.
pub fn random_stabilizer_state(n: usize, seed: SeedSpec) -> Result<Tableau> {
    let c = Clifford::random(n, &mut seed.rng())?;
    Tableau::new(n, (0..n).map(|j| c.image_z(j)).collect())
}

/// Entropy in bits of `region`: `|R| − dim(stabilizers supported in R)`.
pub fn subsystem_entropy_gf2(tableau: &Tableau, region: &[usize]) -> Result<usize> {
    check_indices(region, tableau.n)?;
    let outside = mask_of(&crate::qstate::layout::complement(region, tableau.n));
    let inside = tableau.supported_away_from(outside).len();
    Ok(region.len() - inside)
}

/// EPR-pair counts across each cut and the GHZ count of a tripartite
/// stabilizer state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripartiteCounts {
    pub e_ab: usize,
    pub e_ac: usize,
    pub e_bc: usize,
    pub g: usize,
    pub s_a: usize,
    pub s_b: usize,
    pub s_c: usize,
}

impl TripartiteCounts {
    /// `I(A:B) = S_A + S_B − S_C` for a pure state.
    pub fn mutual_information_ab(&self) -> usize {
        self.s_a + self.s_b - self.s_c
    }
}

/// Number of EPR pairs between `x` and `y`: half the rank of the commutation
/// matrix of the `XY`-supported stabilizers restricted to `x`.
fn epr_count(tableau: &Tableau, x: &[usize], rest: &[usize]) -> usize {
    let local = tableau.supported_away_from(mask_of(rest));
    let mx = mask_of(x);
    let restricted: Vec<(u64, u64)> = local.iter().map(|&f| (f & mx, (f >> 32) & mx)).collect();
    let rows = restricted.iter().map(|&(xi, zi)| {
        restricted.iter().enumerate().fold(0u64, |acc, (j, &(xj, zj))| {
            let bit = ((xi & zj).count_ones() + (zi & xj).count_ones()) & 1;
            acc | ((bit as u64) << j)
        })
    });
    gf2_rank(rows) / 2
}

/// Decomposes the state into EPR pairs on each cut plus GHZ triples.
pub fn tripartite_counts(tableau: &Tableau, partition: &Partition) -> Result<TripartiteCounts> {
    ensure!(partition.n() == tableau.n, Dimension, "partition and tableau sizes differ");
    let (a, b, c) = (partition.a(), partition.b(), partition.c());
    let s_a = subsystem_entropy_gf2(tableau, a)? as i64;
    let s_b = subsystem_entropy_gf2(tableau, b)? as i64;
    let s_c = subsystem_entropy_gf2(tableau, c)? as i64;
    let e_ab = epr_count(tableau, a, c) as i64;
    let e_ac = epr_count(tableau, a, b) as i64;
    let e_bc = epr_count(tableau, b, a) as i64;
    let g = s_a + s_b - s_c - 2 * e_ab;
    let consistent = g >= 0
        && s_a == e_ab + e_ac + g
        && s_b == e_ab + e_bc + g
        && s_c == e_ac + e_bc + g;
    if !consistent {
        return Err(Error::Numerical(format!(
            "inconsistent decomposition: S = ({s_a}, {s_b}, {s_c}), e = ({e_ab}, {e_ac}, {e_bc}), g = {g}"
        )));
    }
    let u = |v: i64| v as usize;
    Ok(TripartiteCounts { e_ab: u(e_ab), e_ac: u(e_ac), e_bc: u(e_bc), g: u(g), s_a: u(s_a), s_b: u(s_b), s_c: u(s_c) })
}

/// A basis state in the support of the stabilizer state.
fn support_point(tableau: &Tableau) -> Result<usize> {
    let n = tableau.n;
    // eliminate X parts, keeping exact signs
    let mut rows: Vec<PauliString> = tableau.generators.clone();
    let mut pivot_row = 0;
    for q in 0..n {
        let Some(k) = (pivot_row..n).find(|&k| (rows[k].x >> q) & 1 == 1) else { continue };
        rows.swap(pivot_row, k);
        let p = rows[pivot_row];
        for k in 0..n {
            if k != pivot_row && (rows[k].x >> q) & 1 == 1 {
                rows[k] = rows[k].mul(&p)?;
            }
        }
        pivot_row += 1;
    }
    // remaining rows are diagonal: z·b = sign (mod 2)
    let mut eqs: Vec<(u64, bool)> = rows[pivot_row..].iter().map(|p| (p.z, p.sign)).collect();
    let mut b = 0usize;
    let mut r = 0;
    for q in 0..n {
        let Some(k) = (r..eqs.len()).find(|&k| (eqs[k].0 >> q) & 1 == 1) else { continue };
        eqs.swap(r, k);
        let (pz, ps) = eqs[r];
        for (k, e) in eqs.iter_mut().enumerate() {
            if k != r && (e.0 >> q) & 1 == 1 {
                e.0 ^= pz;
                e.1 ^= ps;
            }
        }
        r += 1;
    }
    for &(z, s) in &eqs[..r] {
        if s {
            b |= 1 << z.trailing_zeros();
        }
    }
    if eqs[r..].iter().any(|&(_, s)| s) {
        return Err(Error::Numerical("stabilizer group contains −I".into()));
    }
    Ok(b)
}

/// Dense amplitudes of the stabilizer state; the first nonzero amplitude is
/// made real and positive.
pub fn to_dense(tableau: &Tableau) -> Result<PureState> {
    let n = tableau.n;
    ensure!(n <= MAX_DENSE_QUBITS, InvalidArgument, "{n} qubits exceed {MAX_DENSE_QUBITS} for dense expansion");
    let dim = 1usize << n;
    let mut v = DVector::<C64>::zeros(dim);
    v[support_point(tableau)?] = C64::new(1.0, 0.0);
    for p in &tableau.generators {
        let mut w = v.clone();
        for b in 0..dim {
            if v[b] != C64::new(0.0, 0.0) {
                let (t, phase) = p.act(b);
                w[t] += phase * v[b];
            }
        }
        v = w * C64::new(0.5, 0.0);
    }
    let norm = v.norm();
    ensure!(norm > 1e-6, Numerical, "projection onto the stabilizer space vanished");
    let lead = v.iter().find(|z| z.norm() > 1e-9).copied().expect("nonzero vector");
    let phase = lead.conj() / lead.norm();
    PureState::normalized(n, v * phase)
}

/// Clifford isometry `V|c⟩ = U(|c⟩ ⊗ |0…0⟩)` from `n_C` qubits into
/// `A ⊗ B` (A on the low output qubits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordEncoding {
    n_a: usize,
    n_b: usize,
    n_c: usize,
    unitary: Clifford,
}

/// Counts of independent logical Pauli operators supported on A and on B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalCounts {
    pub g_a: usize,
    pub g_b: usize,
    pub k: usize,
}

impl CliffordEncoding {
    pub fn new(n_a: usize, n_b: usize, n_c: usize, unitary: Clifford) -> Result<Self> {
        ensure!(
            unitary.n() == n_a + n_b,
            Dimension,
            "Clifford on {} qubits for n_A + n_B = {}",
            unitary.n(),
            n_a + n_b
        );
        ensure!(n_c <= n_a + n_b, InvalidArgument, "cannot encode {n_c} qubits into {}", n_a + n_b);
        ensure!(
            n_a + n_b + n_c <= MAX_TABLEAU_QUBITS,
            InvalidArgument,
            "Choi state exceeds {MAX_TABLEAU_QUBITS} qubits"
        );
        Ok(CliffordEncoding { n_a, n_b, n_c, unitary })
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

    /// Stabilizers of `(V ⊗ I)|Φ⟩` with outputs on qubits `0..n_A+n_B` and
    /// the reference copy of C above them.
    pub fn choi(&self) -> Result<Tableau> {
        let n = self.n_a + self.n_b;
        let mut gens = Vec::with_capacity(n + self.n_c);
        for j in 0..self.n_c {
            let x = self.unitary.image_x(j);
            gens.push(PauliString { x: x.x | 1 << (n + j), ..x });
            let z = self.unitary.image_z(j);
            gens.push(PauliString { z: z.z | 1 << (n + j), ..z });
        }
        for j in self.n_c..n {
            gens.push(self.unitary.image_z(j));
        }
        Tableau::new(n + self.n_c, gens)
    }

    /// Choi partition: A, B and the reference as C.
    pub fn choi_partition(&self) -> Partition {
        Partition::tripartite(self.n_a, self.n_b, self.n_c)
    }

    /// Dense isometry (up to a global phase) for the logical-operator search.
    pub fn to_encoding(&self) -> Result<Encoding> {
        let n = self.n_a + self.n_b;
        let psi = to_dense(&self.choi()?)?;
        let d_c = 1usize << self.n_c;
        let scale = C64::new((d_c as f64).sqrt(), 0.0);
        let amps = psi.amplitudes();
        let v = DMatrix::from_fn(1 << n, d_c, |ab, c| amps[ab + (c << n)] * scale);
        Encoding::new(IsometryMap::with_tolerance(v, 1e-8)?, self.n_a, self.n_b)
    }
}

/// Encoding by a uniformly random Clifford on `A ⊗ B`.
pub fn clifford_encoding(n_a: usize, n_b: usize, n_c: usize, seed: SeedSpec) -> Result<CliffordEncoding> {
    let u = Clifford::random(n_a + n_b, &mut seed.rng())?;
    CliffordEncoding::new(n_a, n_b, n_c, u)
}

/// `V|c⟩ = |c⟩ ⊗ |0…0⟩`, placing C on the low qubits of A.
pub fn trivial_encoding(n_a: usize, n_b: usize, n_c: usize) -> Result<CliffordEncoding> {
    CliffordEncoding::new(n_a, n_b, n_c, Clifford::identity(n_a + n_b)?)
}

/// `g_A = I(A:C)` and `g_B = I(B:C)` on the Choi state.
pub fn clifford_logical_counts(encoding: &CliffordEncoding) -> Result<LogicalCounts> {
    let choi = encoding.choi()?;
    let p = encoding.choi_partition();
    let s_a = subsystem_entropy_gf2(&choi, p.a())?;
    let s_b = subsystem_entropy_gf2(&choi, p.b())?;
    let s_r = subsystem_entropy_gf2(&choi, p.c())?;
    // S_AR = S_B and S_BR = S_A on a pure state
    Ok(LogicalCounts { g_a: s_a + s_r - s_b, g_b: s_b + s_r - s_a, k: encoding.n_c })
}
