//! Alternating polar ascent for `f(V_A, V_B) = ‖(⟨Φ_m| ⊗ I)(V_A ⊗ V_B ⊗ I_C)|ψ⟩‖²`.
//!
//! For a fixed `V_B` the objective is a convex quadratic in `V_A`, so the
//! polar factor of its gradient never lowers it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::layout::{complement, positions_in, scatter_table};
use crate::qstate::linalg::{gemm, isometry_error, polar_isometry, Op};
use crate::qstate::{IsometryMap, Partition, PureState};
use crate::C64;

/// Largest tolerated decrease of the objective across one update.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Where the `m` pair qubits and the environment sit inside one side's
/// output index: `index = pair[s] + env[e]`.
#[derive(Debug, Clone)]
pub(crate) struct OutputLayout {
    pub pair: Vec<usize>,
    pub env: Vec<usize>,
}

impl OutputLayout {
    /// Pair qubits at the given bit positions of an `n_out`-qubit register.
    pub fn bits(positions: &[usize], n_out: usize) -> Self {
        OutputLayout {
            pair: scatter_table(positions),
            env: scatter_table(&complement(positions, n_out)),
        }
    }

    /// Pair register in the low `m` bits, environment of dimension `d_env`
    /// above it.
    pub fn low(m: usize, d_env: usize) -> Self {
        let r = 1usize << m;
        OutputLayout { pair: (0..r).collect(), env: (0..d_env).map(|e| e * r).collect() }
    }

    pub fn dim(&self) -> usize {
        self.pair.len() * self.env.len()
    }
}

/// Ascent history of a single start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective before each full update, followed by the final value.
    pub trace: Vec<f64>,
}

/// The state reshaped once for both sides.
pub(crate) struct Bilocal {
    /// Rows `a + d_A c`, columns `b`.
    t_a: DMatrix<C64>,
    /// Rows `b + d_B c`, columns `a`.
    t_b: DMatrix<C64>,
    d_a: usize,
    d_b: usize,
    d_c: usize,
    layout_a: OutputLayout,
    layout_b: OutputLayout,
    norm: f64,
}

impl Bilocal {
    pub fn new(state: &PureState, partition: &Partition, layout_a: OutputLayout, layout_b: OutputLayout) -> Result<Self> {
        if state.n() != partition.n() {
            return Err(Error::Dimension(format!(
                "state has {} qubits, partition {}",
                state.n(),
                partition.n()
            )));
        }
        if layout_a.pair.len() != layout_b.pair.len() {
            return Err(Error::Dimension("pair registers differ in size".into()));
        }
        let ta = scatter_table(partition.a());
        let tb = scatter_table(partition.b());
        let tc = scatter_table(partition.c());
        let (d_a, d_b, d_c) = (ta.len(), tb.len(), tc.len());
        let amps = state.amplitudes();
        let t_a = DMatrix::from_fn(d_a * d_c, d_b, |row, b| amps[ta[row % d_a] | tc[row / d_a] | tb[b]]);
        let t_b = DMatrix::from_fn(d_b * d_c, d_a, |row, a| amps[tb[row % d_b] | tc[row / d_b] | ta[a]]);
        let norm = 1.0 / layout_a.pair.len() as f64;
        Ok(Bilocal { t_a, t_b, d_a, d_b, d_c, layout_a, layout_b, norm })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn check_maps(&self, v_a: &DMatrix<C64>, v_b: &DMatrix<C64>) -> Result<()> {
        for (v, d_in, layout, name) in [
            (v_a, self.d_a, &self.layout_a, "A"),
            (v_b, self.d_b, &self.layout_b, "B"),
        ] {
            if v.ncols() != d_in || v.nrows() != layout.dim() {
                return Err(Error::Dimension(format!(
                    "map on {name} is {}x{}, expected {}x{d_in}",
                    v.nrows(),
                    v.ncols(),
                    layout.dim()
                )));
            }
        }
        Ok(())
    }

    /// Rows of `v` whose output index has pair value `s`, in environment order.
    fn rows_for(v: &DMatrix<C64>, layout: &OutputLayout, s: usize) -> DMatrix<C64> {
        let p = layout.pair[s];
        DMatrix::from_fn(layout.env.len(), v.ncols(), |e, j| v[(p | layout.env[e], j)])
    }

    /// Objective at `(v_x, v_y)` and, if asked, its gradient with respect to
    /// `v_x`. Side `x` is A when `side_a` is set.
    ///
    /// With `K_s[(x, c), f] = Σ_y V_y[(s, f), y] T[x, y, c]` the amplitude
    /// of `⟨Φ|` at environments `(e, f)` and C value `c` is
    /// `2^{-m/2} Σ_s Σ_x V_x[(s, e), x] K_s[(x, c), f]`.
    fn eval(&self, side_a: bool, v_x: &DMatrix<C64>, v_y: &DMatrix<C64>, want_grad: bool) -> (f64, Option<DMatrix<C64>>) {
        let (t, d_x, lx, ly) = if side_a {
            (&self.t_a, self.d_a, &self.layout_a, &self.layout_b)
        } else {
            (&self.t_b, self.d_b, &self.layout_b, &self.layout_a)
        };
        let r = lx.pair.len();
        let cols = self.d_c * ly.env.len();
        let mut ks = Vec::with_capacity(r);
        let mut amp = DMatrix::<C64>::zeros(lx.env.len(), cols);
        for s in 0..r {
            let k = gemm(t, Op::N, &Self::rows_for(v_y, ly, s), Op::T);
            // (x + d_x c, f) read as x × (c + d_c f)
            let k = DMatrix::from_vec(d_x, cols, k.data.into());
            amp += gemm(&Self::rows_for(v_x, lx, s), Op::N, &k, Op::N);
            ks.push(k);
        }
        let value = amp.norm_squared() * self.norm;
        if !want_grad {
            return (value, None);
        }
        amp *= C64::new(self.norm, 0.0);
        let mut g = DMatrix::<C64>::zeros(lx.dim(), d_x);
        for (s, k) in ks.iter().enumerate() {
            let gs = gemm(&amp, Op::N, k, Op::H);
            let p = lx.pair[s];
            for (e, &off) in lx.env.iter().enumerate() {
                g.row_mut(p | off).copy_from(&gs.row(e));
            }
        }
        (value, Some(g))
    }

    pub fn value(&self, v_a: &DMatrix<C64>, v_b: &DMatrix<C64>) -> f64 {
        self.eval(true, v_a, v_b, false).0
    }

    /// Objective at `(v_x, v_y)` and the polar update of `v_x`.
    fn step(&self, side_a: bool, v_x: &DMatrix<C64>, v_y: &DMatrix<C64>) -> Result<(f64, DMatrix<C64>)> {
        let (value, g) = self.eval(side_a, v_x, v_y, true);
        let g = g.expect("requested gradient");
        if g.norm() < 1e-300 {
            return Ok((value, v_x.clone()));
        }
        let next = polar_isometry(&g)?;
        let err = isometry_error(&next);
        if err > 1e-8 {
            return Err(Error::Numerical(format!("polar update lost isometry ({err:e})")));
        }
        Ok((value, next))
    }

    /// Runs the ascent from `(v_a, v_b)`; relative change below `tol` stops it.
    pub fn ascend(
        &self,
        mut v_a: DMatrix<C64>,
        mut v_b: DMatrix<C64>,
        max_iters: usize,
        tol: f64,
    ) -> Result<(RestartOutcome, DMatrix<C64>, DMatrix<C64>)> {
        self.check_maps(&v_a, &v_b)?;
        let mut trace: Vec<f64> = Vec::with_capacity(max_iters.min(64) + 1);
        let mut converged = false;
        let mut iterations = 0;
        let mut last_half: Option<f64> = None;
        while iterations < max_iters {
            let (f0, next_a) = self.step(true, &v_a, &v_b)?;
            check_monotone(last_half, f0)?;
            if let Some(&prev) = trace.last() {
                if (f0 - prev).abs() <= tol * f64::max(prev.abs(), f64::MIN_POSITIVE) {
                    converged = true;
                    trace.push(f0);
                    break;
                }
            }
            trace.push(f0);
            v_a = next_a;
            let (f1, next_b) = self.step(false, &v_b, &v_a)?;
            check_monotone(Some(f0), f1)?;
            v_b = next_b;
            last_half = Some(f1);
            iterations += 1;
        }
        if !converged {
            let f = self.value(&v_a, &v_b);
            check_monotone(last_half, f)?;
            trace.push(f);
        }
        let value = *trace.last().expect("trace is nonempty");
        Ok((RestartOutcome { value, iterations, converged, trace }, v_a, v_b))
    }
}

fn check_monotone(prev: Option<f64>, next: f64) -> Result<()> {
    match prev {
        Some(p) if next < p - MONOTONE_SLACK => Err(Error::Numerical(format!(
            "ascent step lowered the objective from {p} to {next}"
        ))),
        _ => Ok(()),
    }
}

/// Bit positions of the pair registers inside A and B.
pub(crate) fn pair_positions(partition: &Partition, m: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let (r_a, r_b) = partition.pairs(m)?;
    let pa = positions_in(r_a, partition.a()).ok_or_else(|| Error::Indices("R_A not inside A".into()))?;
    let pb = positions_in(r_b, partition.b()).ok_or_else(|| Error::Indices("R_B not inside B".into()))?;
    Ok((pa, pb))
}

/// Pair registers of the partition, or the leading `m` qubits when none are
/// registered.
pub(crate) fn pair_positions_or_leading(partition: &Partition, m: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    match partition.pairs(m) {
        Ok(_) => pair_positions(partition, m),
        Err(_) if m <= partition.n_a() && m <= partition.n_b() => Ok(((0..m).collect(), (0..m).collect())),
        Err(e) => Err(e),
    }
}

pub(crate) fn into_map(m: DMatrix<C64>) -> IsometryMap {
    IsometryMap::new_unchecked(m)
}
