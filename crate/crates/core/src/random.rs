//! Reproducible sampling of Haar random states, unitaries, isometries and
//! complex Ginibre matrices.
//!
//! Every sampler is a pure function of a [`SeedSpec`]. The generator is
//! ChaCha20 keyed by the master seed with the trial index selecting the
//! stream, so distinct trials never share a stream regardless of scheduling.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::qstate::{IsometryMap, PureState};
use crate::C64;

/// Largest register accepted by [`haar_state`].
pub const MAX_HAAR_QUBITS: usize = 16;

/// Key of one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        SeedSpec { master_seed, trial_index }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.trial_index);
        rng
    }

    /// Independent sub-stream labelled `label` (restarts, sub-samplers).
    pub fn derive(&self, label: u64) -> SeedSpec {
        SeedSpec {
            master_seed: splitmix64(self.master_seed ^ splitmix64(label.wrapping_add(0x51_7c_c1_b7))),
            trial_index: self.trial_index,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Standard complex normal: real and imaginary parts N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

/// Ginibre matrix drawn column by column, so the leading columns of a wider
/// draw coincide with a narrower draw from the same generator state.
pub fn ginibre_with<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    let data: Vec<C64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    DMatrix::from_vec(rows, cols, data)
}

/// `rows × cols` matrix of independent standard complex normals.
pub fn ginibre(rows: usize, cols: usize, seed: SeedSpec) -> Result<DMatrix<C64>> {
    ensure!(rows >= 1 && cols >= 1, InvalidArgument, "empty Ginibre shape {rows}x{cols}");
    Ok(ginibre_with(&mut seed.rng(), rows, cols))
}

pub fn haar_state_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<PureState> {
    ensure!(
        (1..=MAX_HAAR_QUBITS).contains(&n),
        InvalidArgument,
        "n = {n} outside 1..={MAX_HAAR_QUBITS}"
    );
    let v: Vec<C64> = (0..1usize << n).map(|_| complex_normal(rng)).collect();
    PureState::normalized(n, DVector::from_vec(v))
}

/// Uniformly random pure state on `n` qubits.
pub fn haar_state(n: usize, seed: SeedSpec) -> Result<PureState> {
    haar_state_with(&mut seed.rng(), n)
}

/// `Q · diag(R_jj / |R_jj|)` from a Householder QR of `g`; Haar-distributed
/// when `g` is Ginibre.
fn phase_fixed_q(g: DMatrix<C64>) -> DMatrix<C64> {
    let k = g.ncols();
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let phase = if norm > 0.0 { rjj / norm } else { C64::new(1.0, 0.0) };
        q.column_mut(j).scale_mut_complex(phase);
    }
    q
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, z: C64);
}

impl<S> ScaleComplex for nalgebra::Matrix<C64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<C64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, z: C64) {
        for x in self.iter_mut() {
            *x *= z;
        }
    }
}

pub fn haar_isometry_with<R: Rng + ?Sized>(rng: &mut R, d_in: usize, d_out: usize) -> Result<IsometryMap> {
    ensure!(d_in >= 1, InvalidArgument, "d_in must be positive");
    ensure!(d_in <= d_out, Dimension, "d_in = {d_in} exceeds d_out = {d_out}");
    let q = phase_fixed_q(ginibre_with(rng, d_out, d_in));
    IsometryMap::new(q)
}

pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<IsometryMap> {
    haar_isometry_with(rng, d, d)
}

/// Haar random `d × d` unitary.
pub fn haar_unitary(d: usize, seed: SeedSpec) -> Result<IsometryMap> {
    haar_unitary_with(&mut seed.rng(), d)
}

/// Haar random isometry `C^{d_in} → C^{d_out}`: the first `d_in` columns of
/// `haar_unitary(d_out, seed)`.
pub fn haar_isometry(d_in: usize, d_out: usize, seed: SeedSpec) -> Result<IsometryMap> {
    haar_isometry_with(&mut seed.rng(), d_in, d_out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_is_deterministic_per_seed() {
        let a = ginibre(5, 3, SeedSpec::new(1, 0)).unwrap();
        let b = ginibre(5, 3, SeedSpec::new(1, 0)).unwrap();
        let c = ginibre(5, 3, SeedSpec::new(1, 1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(ginibre(0, 3, SeedSpec::new(1, 0)).is_err());
    }

    #[test]
    fn ginibre_unit_complex_variance() {
        let g = ginibre(64, 64, SeedSpec::new(42, 0)).unwrap();
        let mean = g.iter().map(|z| z.norm_sqr()).sum::<f64>() / 4096.0;
        assert!((mean - 1.0).abs() < 0.05, "{mean}");
        // real and imaginary parts carry half the variance each
        let re = g.iter().map(|z| z.re * z.re).sum::<f64>() / 4096.0;
        assert!((re - 0.5).abs() < 0.05, "{re}");
    }

    #[test]
    fn derived_streams_differ() {
        let s = SeedSpec::new(9, 3);
        assert_ne!(s.derive(0), s.derive(1));
        assert_eq!(s.derive(5), s.derive(5));
        assert_eq!(s.derive(5).trial_index, 3);
    }

    #[test]
    fn haar_state_norm_and_range() {
        let psi = haar_state(6, SeedSpec::new(3, 0)).unwrap();
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
        assert!(haar_state(0, SeedSpec::new(3, 0)).is_err());
        assert!(haar_state(17, SeedSpec::new(3, 0)).is_err());
    }

    #[test]
    fn haar_unitary_is_unitary_with_unit_determinant_modulus() {
        let u = haar_unitary(8, SeedSpec::new(5, 2)).unwrap();
        assert!(u.isometry_error() < 1e-12);
        let det = u.matrix().clone().determinant();
        assert!((det.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn isometry_is_leading_columns_of_unitary() {
        let seed = SeedSpec::new(11, 4);
        let u = haar_unitary(6, seed).unwrap();
        let v = haar_isometry(2, 6, seed).unwrap();
        let lead = u.matrix().columns(0, 2).into_owned();
        assert!((v.matrix() - lead).norm() < 1e-12);
        assert_eq!(haar_isometry(6, 6, seed).unwrap(), u);
        assert!(haar_isometry(7, 6, seed).is_err());
    }
}
