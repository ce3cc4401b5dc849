//! Dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, Dyn, Matrix, RawStorage};

use super::Tolerances;
use crate::error::{ensure, Error, Result};
use crate::C64;

/// Largest entrywise deviation of `m` from its adjoint.
pub fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Real spectrum of a Hermitian matrix, ascending.
///
/// Input must be square and Hermitian within 1e-8 (entrywise); the
/// symmetrised matrix `(M + M†)/2` is diagonalised.
pub fn hermitian_eigvals(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    hermitian_eigvals_tol(m, Tolerances::DEFAULT.eig_hermitian)
}

pub fn hermitian_eigvals_tol(m: &DMatrix<C64>, tol: f64) -> Result<Vec<f64>> {
    ensure!(m.is_square(), Dimension, "{}x{} matrix is not square", m.nrows(), m.ncols());
    let err = hermiticity_error(m);
    ensure!(err <= tol, InvalidArgument, "matrix is not Hermitian (deviation {err:e})");
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Thin SVD with singular values sorted descending: `m = u · diag(s) · v_t`.
///
/// nalgebra's bidiagonal SVD occasionally returns factors that do not
/// reproduce `m` on structured inputs, so its output is verified and a
/// one-sided Jacobi SVD is used when the check fails.
pub fn svd_sorted(m: &DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested u");
    let v_t = svd.v_t.expect("requested v_t");
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    if svd_is_faithful(m, &u, &s, &v_t) {
        sort_svd(u, s, v_t)
    } else if m.nrows() >= m.ncols() {
        jacobi_svd(m)
    } else {
        let (u, s, v_t) = jacobi_svd(&m.adjoint());
        (v_t.adjoint(), s, u.adjoint())
    }
}

const SVD_CHECK_TOL: f64 = 1e-10;

fn svd_is_faithful(m: &DMatrix<C64>, u: &DMatrix<C64>, s: &[f64], v_t: &DMatrix<C64>) -> bool {
    let scale = m.norm().max(1.0);
    let mut us = u.clone();
    for (k, &sk) in s.iter().enumerate() {
        us.column_mut(k).scale_mut(sk);
    }
    s.iter().all(|x| x.is_finite() && *x >= 0.0)
        && (us * v_t - m).norm() <= SVD_CHECK_TOL * scale
        && isometry_error(u) <= SVD_CHECK_TOL
        && isometry_error(&v_t.adjoint()) <= SVD_CHECK_TOL
}

fn sort_svd(u: DMatrix<C64>, s: Vec<f64>, v_t: DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let sorted = order.iter().map(|&i| s[i]).collect();
    let u = DMatrix::from_fn(u.nrows(), order.len(), |r, k| u[(r, order[k])]);
    let v_t = DMatrix::from_fn(order.len(), v_t.ncols(), |k, c| v_t[(order[k], c)]);
    (u, sorted, v_t)
}

/// One-sided (Hestenes) Jacobi SVD of a tall matrix.
fn jacobi_svd(m: &DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = DMatrix::<C64>::identity(cols, cols);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for r in 0..mat.nrows() {
                        let xp = mat[(r, p)];
                        let xq = mat[(r, q)] * phase.conj();
                        mat[(r, p)] = xp * c - xq * s;
                        mat[(r, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let (a, s, v_t) = sort_svd(a, s, v.adjoint());
    let floor = s.first().copied().unwrap_or(0.0) * 1e-14;
    let kept = s.iter().take_while(|&&x| x > floor && x > 0.0).count();
    let mut u = DMatrix::<C64>::zeros(rows, kept);
    for j in 0..kept {
        u.set_column(j, &(a.column(j) / C64::new(s[j], 0.0)));
    }
    let u = complete_basis(&u).expect("Jacobi columns are orthonormal").columns(0, cols).into_owned();
    (u, s, v_t)
}

/// Isometric polar factor `W X†` of `g = W Σ X†` (requires `nrows >= ncols`).
///
/// This is the maximiser of `Re Tr(g† V)` over isometries `V` of the same
/// shape as `g`.
pub fn polar_isometry(g: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    ensure!(
        g.nrows() >= g.ncols(),
        Dimension,
        "polar isometry needs a tall matrix, got {}x{}",
        g.nrows(),
        g.ncols()
    );
    let (u, _, v_t) = svd_sorted(g);
    Ok(u * v_t)
}

/// Sum of singular values.
pub fn nuclear_norm(m: &DMatrix<C64>) -> f64 {
    svd_sorted(m).1.iter().sum()
}

/// Extends orthonormal columns to a full unitary by Gram-Schmidt against the
/// standard basis. The leading columns of the result are `cols`.
pub fn complete_basis(cols: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let d = cols.nrows();
    let k = cols.ncols();
    ensure!(k <= d, Dimension, "{k} columns cannot be orthonormal in dimension {d}");
    let mut basis: Vec<nalgebra::DVector<C64>> = (0..k).map(|j| cols.column(j).into_owned()).collect();
    for e in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = nalgebra::DVector::<C64>::zeros(d);
        v[e] = C64::new(1.0, 0.0);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / C64::new(norm, 0.0));
        }
    }
    if basis.len() != d {
        return Err(Error::Numerical("basis completion lost rank".into()));
    }
    Ok(DMatrix::from_columns(&basis))
}

/// Largest entrywise deviation of `v†v` from the identity.
pub fn isometry_error(v: &DMatrix<C64>) -> f64 {
    let g = v.adjoint() * v;
    let mut worst = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// How an operand enters [`gemm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// As stored.
    N,
    /// Transposed.
    T,
    /// Conjugate transposed.
    H,
}

/// `op_a(a) · op_b(b)` through a cache-blocked complex kernel. Accepts views.
pub fn gemm<SA, SB>(a: &Matrix<C64, Dyn, Dyn, SA>, op_a: Op, b: &Matrix<C64, Dyn, Dyn, SB>, op_b: Op) -> DMatrix<C64>
where
    SA: RawStorage<C64, Dyn, Dyn>,
    SB: RawStorage<C64, Dyn, Dyn>,
{
    match (op_a, op_b) {
        (Op::H, _) => gemm(&a.map(|z| z.conj()), Op::T, b, op_b),
        (_, Op::H) => gemm_raw(a, op_a, &b.map(|z| z.conj()), Op::T),
        _ => gemm_raw(a, op_a, b, op_b),
    }
}

fn gemm_raw<SA, SB>(a: &Matrix<C64, Dyn, Dyn, SA>, op_a: Op, b: &Matrix<C64, Dyn, Dyn, SB>, op_b: Op) -> DMatrix<C64>
where
    SA: RawStorage<C64, Dyn, Dyn>,
    SB: RawStorage<C64, Dyn, Dyn>,
{
    use matrixmultiply::CGemmOption::Standard;
    fn shape<S: RawStorage<C64, Dyn, Dyn>>(m: &Matrix<C64, Dyn, Dyn, S>, op: Op) -> (usize, usize, isize, isize) {
        let (r, c) = m.shape();
        let (rs, cs) = m.strides();
        let (rs, cs) = (rs as isize, cs as isize);
        match op {
            Op::N => (r, c, rs, cs),
            Op::T | Op::H => (c, r, cs, rs),
        }
    }
    let (m, k, rsa, csa) = shape(a, op_a);
    let (k2, n, rsb, csb) = shape(b, op_b);
    assert_eq!(k, k2, "inner dimensions differ");
    let mut out = DMatrix::<C64>::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return out;
    }
    // SAFETY: Complex<f64> is repr(C) with layout [re, im]; the strides and
    // extents come from the operands' own storage, and `out` is a fresh
    // column-major m×n buffer.
    unsafe {
        matrixmultiply::zgemm(
            Standard,
            Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.data.ptr() as *const [f64; 2],
            rsa,
            csa,
            b.data.ptr() as *const [f64; 2],
            rsb,
            csb,
            [0.0, 0.0],
            out.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    out
}
