//! EPR distillation by local unitaries and local isometries, logical
//! operator search in random encodings, and the closed-form oracles used to
//! validate both.

mod engine;
mod logical;
mod nonunitary;
mod oracle;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::qstate::layout::{complement, gather};
use crate::qstate::{IsometryMap, Partition, PureState};
use crate::random::{haar_isometry, haar_unitary, SeedSpec};
use crate::C64;
use engine::{into_map, pair_positions, pair_positions_or_leading, Bilocal, OutputLayout};

pub use engine::{RestartOutcome, MONOTONE_SLACK};
pub use logical::{
    logical_best_over_ua, logical_continuous_search, logical_fidelity, logical_pauli_scan, pauli_matrix,
    reduced_logical_operator, ContinuousLogical, ContinuousLogicalConfig, Encoding, PauliScan, MAX_SCAN_QUBITS,
};
pub use nonunitary::{nonunitary_logical_demo, NonunitaryDemo};
pub use oracle::{pure_epr_fidelity_closed_form, schmidt_distill, single_block_epr_overlap, SchmidtDistill};

pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_MAX_ITERS: usize = 500;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Local-unitary search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LUSearchConfig {
    pub m: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: SeedSpec,
}

impl LUSearchConfig {
    pub fn new(m: usize, seed: SeedSpec) -> Self {
        LUSearchConfig { m, restarts: DEFAULT_RESTARTS, max_iters: DEFAULT_MAX_ITERS, tol: DEFAULT_TOL, seed }
    }

    fn validate(&self) -> Result<()> {
        ensure!(self.m >= 1, InvalidArgument, "m must be positive");
        ensure!(self.restarts >= 1, InvalidArgument, "restarts must be at least 1");
        ensure!(self.tol > 0.0, InvalidArgument, "tol must be positive, got {}", self.tol);
        Ok(())
    }
}

/// Local-isometry search settings. Environment dimensions default to
/// `d_A · 2^m` and `d_B · 2^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LOSearchConfig {
    pub m: usize,
    pub d_ea: Option<usize>,
    pub d_eb: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: SeedSpec,
    /// Also climb from the embedded result of [`lu_distill`] with the same
    /// settings.
    pub lu_warm_start: bool,
}

impl LOSearchConfig {
    pub fn new(m: usize, seed: SeedSpec) -> Self {
        LOSearchConfig {
            m,
            d_ea: None,
            d_eb: None,
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
            seed,
            lu_warm_start: true,
        }
    }

    /// The LU settings sharing this search's budget and seed.
    pub fn lu(&self) -> LUSearchConfig {
        LUSearchConfig { m: self.m, restarts: self.restarts, max_iters: self.max_iters, tol: self.tol, seed: self.seed }
    }

    /// Resolved `(d_EA, d_EB)` for the given input dimensions.
    pub fn environments(&self, d_a: usize, d_b: usize) -> Result<(usize, usize)> {
        self.lu().validate()?;
        let r = 1usize << self.m;
        let d_ea = self.d_ea.unwrap_or(d_a * r);
        let d_eb = self.d_eb.unwrap_or(d_b * r);
        for (d_e, d, side) in [(d_ea, d_a, "A"), (d_eb, d_b, "B")] {
            ensure!(
                d_e >= d && d_e <= d * r,
                InvalidArgument,
                "environment on {side} must lie in [{d}, {}], got {d_e}",
                d * r
            );
        }
        Ok((d_ea, d_eb))
    }
}

/// Best maps found by a search together with every restart's history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_value: f64,
    pub best_restart: usize,
    #[serde(skip)]
    pub map_a: Option<IsometryMap>,
    #[serde(skip)]
    pub map_b: Option<IsometryMap>,
    pub restarts: Vec<RestartOutcome>,
}

impl SearchResult {
    fn from_outcomes(outcomes: Vec<(RestartOutcome, DMatrix<C64>, DMatrix<C64>)>) -> Self {
        let mut best = 0;
        for (i, (o, _, _)) in outcomes.iter().enumerate() {
            if o.value > outcomes[best].0.value {
                best = i;
            }
        }
        let mut restarts = Vec::with_capacity(outcomes.len());
        let mut maps = None;
        for (i, (o, a, b)) in outcomes.into_iter().enumerate() {
            if i == best {
                maps = Some((into_map(a), into_map(b)));
            }
            restarts.push(o);
        }
        let (a, b) = maps.expect("at least one restart");
        SearchResult {
            best_value: restarts[best].value,
            best_restart: best,
            map_a: Some(a),
            map_b: Some(b),
            restarts,
        }
    }

    pub fn map_a(&self) -> &IsometryMap {
        self.map_a.as_ref().expect("maps are present on computed results")
    }

    pub fn map_b(&self) -> &IsometryMap {
        self.map_b.as_ref().expect("maps are present on computed results")
    }

    pub fn iterations(&self) -> usize {
        self.restarts[self.best_restart].iterations
    }

    pub fn converged(&self) -> bool {
        self.restarts[self.best_restart].converged
    }

    /// Best value of each restart, in restart order.
    pub fn restart_values(&self) -> Vec<f64> {
        self.restarts.iter().map(|r| r.value).collect()
    }
}

fn lu_engine(state: &PureState, partition: &Partition, pa: &[usize], pb: &[usize]) -> Result<Bilocal> {
    Bilocal::new(
        state,
        partition,
        OutputLayout::bits(pa, partition.n_a()),
        OutputLayout::bits(pb, partition.n_b()),
    )
}

fn lo_engine(state: &PureState, partition: &Partition, m: usize, d_ea: usize, d_eb: usize) -> Result<Bilocal> {
    Bilocal::new(state, partition, OutputLayout::low(m, d_ea), OutputLayout::low(m, d_eb))
}

/// `Tr((U_A ⊗ U_B) ρ_AB (U_A ⊗ U_B)† Π_EPR)` on the partition's pair registers.
pub fn lu_objective(state: &PureState, u_a: &IsometryMap, u_b: &IsometryMap, partition: &Partition, m: usize) -> Result<f64> {
    ensure!(u_a.is_unitary() && u_b.is_unitary(), Dimension, "local maps must be unitary");
    let (pa, pb) = pair_positions(partition, m)?;
    let engine = lu_engine(state, partition, &pa, &pb)?;
    engine.check_maps(u_a.matrix(), u_b.matrix())?;
    Ok(engine.value(u_a.matrix(), u_b.matrix()))
}

/// Best EPR fidelity reachable with local unitaries. Restart 0 starts from
/// the identities, later restarts from Haar unitaries.
pub fn lu_distill(state: &PureState, partition: &Partition, config: &LUSearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let (pa, pb) = pair_positions(partition, config.m)?;
    let engine = lu_engine(state, partition, &pa, &pb)?;
    let (d_a, d_b) = (engine.d_a(), engine.d_b());
    let mut outcomes = Vec::with_capacity(config.restarts);
    for r in 0..config.restarts {
        let (u_a, u_b) = if r == 0 {
            (DMatrix::identity(d_a, d_a), DMatrix::identity(d_b, d_b))
        } else {
            let s = config.seed.derive(r as u64);
            (
                haar_unitary(d_a, s.derive(0))?.into_matrix(),
                haar_unitary(d_b, s.derive(1))?.into_matrix(),
            )
        };
        outcomes.push(engine.ascend(u_a, u_b, config.max_iters, config.tol)?);
    }
    Ok(SearchResult::from_outcomes(outcomes))
}

/// `⟨ψ|(V_A ⊗ V_B)† Π_EPR (V_A ⊗ V_B)|ψ⟩` where each map's output holds the
/// pair qubits in its low `m` bits and the environment above them.
pub fn lo_objective(state: &PureState, v_a: &IsometryMap, v_b: &IsometryMap, partition: &Partition, m: usize) -> Result<f64> {
    let r = 1usize << m;
    ensure!(
        v_a.d_out().is_multiple_of(r) && v_b.d_out().is_multiple_of(r),
        Dimension,
        "output dimensions {} and {} are not multiples of 2^m",
        v_a.d_out(),
        v_b.d_out()
    );
    let engine = lo_engine(state, partition, m, v_a.d_out() / r, v_b.d_out() / r)?;
    engine.check_maps(v_a.matrix(), v_b.matrix())?;
    Ok(engine.value(v_a.matrix(), v_b.matrix()))
}

/// `V|a⟩ = |0^m⟩ ⊗ |a⟩`: keep the input as environment, emit fresh zeros.
pub fn baseline_isometry(d_in: usize, m: usize, d_env: usize) -> Result<IsometryMap> {
    ensure!(d_env >= d_in, InvalidArgument, "environment {d_env} cannot hold input {d_in}");
    let r = 1usize << m;
    let mut v = DMatrix::zeros(r * d_env, d_in);
    for a in 0..d_in {
        v[(a * r, a)] = C64::new(1.0, 0.0);
    }
    IsometryMap::new(v)
}

/// Rewrites a unitary on an `n_in`-qubit block with pair qubits at `pair_bits`
/// as an isometry in the LO output layout, so both objectives agree.
pub fn embed_unitary(u: &IsometryMap, pair_bits: &[usize], d_env: usize) -> Result<IsometryMap> {
    ensure!(u.is_unitary(), Dimension, "embedding expects a unitary");
    let d = u.d_in();
    let n_in = d.trailing_zeros() as usize;
    ensure!(d.is_power_of_two(), Dimension, "unitary dimension {d} is not a power of two");
    let m = pair_bits.len();
    let rest = complement(pair_bits, n_in);
    ensure!(
        d_env << m >= d,
        InvalidArgument,
        "environment {d_env} too small for a {d}-dimensional block"
    );
    let r = 1usize << m;
    let mut v = DMatrix::zeros(r * d_env, d);
    for x in 0..d {
        let row = gather(x, pair_bits) + r * gather(x, &rest);
        v.row_mut(row).copy_from(&u.matrix().row(x));
    }
    IsometryMap::new(v)
}

/// Best EPR fidelity reachable with local isometries (Stinespring dilations
/// of local channels). Restart 0 is the do-nothing channel, so the result is
/// never below `2^{-m}`.
pub fn lo_distill(state: &PureState, partition: &Partition, config: &LOSearchConfig) -> Result<SearchResult> {
    let (d_ea, d_eb) = config.environments(partition.d_a(), partition.d_b())?;
    let m = config.m;
    let engine = lo_engine(state, partition, m, d_ea, d_eb)?;
    let (d_a, d_b) = (engine.d_a(), engine.d_b());
    let r = 1usize << m;
    let mut starts = Vec::with_capacity(config.restarts + 1);
    for i in 0..config.restarts {
        if i == 0 {
            starts.push((baseline_isometry(d_a, m, d_ea)?, baseline_isometry(d_b, m, d_eb)?));
        } else {
            let s = config.seed.derive(i as u64);
            starts.push((haar_isometry(d_a, r * d_ea, s.derive(0))?, haar_isometry(d_b, r * d_eb, s.derive(1))?));
        }
    }
    if config.lu_warm_start && m <= partition.n_a() && m <= partition.n_b() {
        let (pa, pb) = pair_positions_or_leading(partition, m)?;
        let lu_partition = match partition.pairs(m) {
            Ok(_) => partition.clone(),
            Err(_) => partition.clone().with_leading_pairs(m)?,
        };
        let lu = lu_distill(state, &lu_partition, &config.lu())?;
        starts.push((embed_unitary(lu.map_a(), &pa, d_ea)?, embed_unitary(lu.map_b(), &pb, d_eb)?));
    }
    let mut outcomes = Vec::with_capacity(starts.len());
    for (v_a, v_b) in starts {
        outcomes.push(engine.ascend(v_a.into_matrix(), v_b.into_matrix(), config.max_iters, config.tol)?);
    }
    Ok(SearchResult::from_outcomes(outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::epr_expectation;
    use crate::qstate::partial_trace;
    use crate::random::haar_state;

    fn thirds(k: usize, m: usize) -> Partition {
        Partition::tripartite(k, k, k).with_leading_pairs(m).unwrap()
    }

    fn ids(p: &Partition) -> (IsometryMap, IsometryMap) {
        (IsometryMap::identity(p.d_a()), IsometryMap::identity(p.d_b()))
    }

    #[test]
    fn planted_pairs_reach_one() {
        let p = thirds(2, 2);
        // qubits 0,1 in A pair with 2,3 in B
        let psi = PureState::epr_pairs(6, &[(0, 2), (1, 3)]).unwrap();
        let (ia, ib) = ids(&p);
        assert!((lu_objective(&psi, &ia, &ib, &p, 2).unwrap() - 1.0).abs() < 1e-12);
        let r = lu_distill(&psi, &p, &LUSearchConfig::new(2, SeedSpec::new(0, 0))).unwrap();
        assert!(r.best_value >= 1.0 - 1e-9);
    }

    #[test]
    fn identity_mean_on_haar_states() {
        let p = thirds(2, 1);
        let (ia, ib) = ids(&p);
        let vals: Vec<f64> = (0..400)
            .map(|t| {
                let psi = haar_state(6, SeedSpec::new(17, t)).unwrap();
                lu_objective(&psi, &ia, &ib, &p, 1).unwrap()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
        assert!((mean - 0.25).abs() < 5.0 * (var / vals.len() as f64).sqrt());
    }

    #[test]
    fn objective_matches_rotated_marginal() {
        let p = thirds(2, 1);
        let psi = haar_state(6, SeedSpec::new(3, 0)).unwrap();
        let u_a = haar_unitary(4, SeedSpec::new(3, 1)).unwrap();
        let u_b = haar_unitary(4, SeedSpec::new(3, 2)).unwrap();
        let f = lu_objective(&psi, &u_a, &u_b, &p, 1).unwrap();
        let rotated = psi.apply_local(&u_a, p.a()).unwrap().apply_local(&u_b, p.b()).unwrap();
        let rho = partial_trace(&rotated, &p.ab()).unwrap();
        let (r_a, r_b) = p.pairs(1).unwrap();
        assert!((f - epr_expectation(&rho, r_a, r_b).unwrap()).abs() < 1e-12);
        let phased = lu_objective(&psi, &u_a.with_phase(0.7), &u_b, &p, 1).unwrap();
        assert!((f - phased).abs() < 1e-12);
    }

    #[test]
    fn spectator_unitaries_leave_objective_fixed() {
        let p = thirds(2, 1);
        let psi = haar_state(6, SeedSpec::new(5, 0)).unwrap();
        let u_a = haar_unitary(4, SeedSpec::new(5, 1)).unwrap();
        let (_, ib) = ids(&p);
        // qubit 1 of A is a spectator
        let d = haar_unitary(2, SeedSpec::new(5, 2)).unwrap();
        let spect = IsometryMap::identity(2).kron_low(&d);
        let f0 = lu_objective(&psi, &u_a, &ib, &p, 1).unwrap();
        let f1 = lu_objective(&psi, &spect.compose(&u_a).unwrap(), &ib, &p, 1).unwrap();
        assert!((f0 - f1).abs() < 1e-12);
    }

    #[test]
    fn traces_are_monotone_and_best_is_reproducible() {
        let p = thirds(2, 1);
        let psi = haar_state(6, SeedSpec::new(9, 0)).unwrap();
        let r = lu_distill(&psi, &p, &LUSearchConfig::new(1, SeedSpec::new(9, 1))).unwrap();
        for o in &r.restarts {
            assert!(o.trace.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK));
        }
        let again = lu_objective(&psi, r.map_a(), r.map_b(), &p, 1).unwrap();
        assert!((again - r.best_value).abs() < 1e-9);
        assert!(r.best_value >= 0.25);
    }

    #[test]
    fn maximally_entangled_bipartite_oracle() {
        let p = Partition::tripartite(2, 2, 0).with_leading_pairs(2).unwrap();
        for t in 0..5 {
            let psi = haar_state(4, SeedSpec::new(11, t)).unwrap();
            let lambda = psi.schmidt(p.a()).unwrap().coefficients;
            let want = pure_epr_fidelity_closed_form(&lambda, 2).unwrap();
            let r = lu_distill(&psi, &p, &LUSearchConfig::new(2, SeedSpec::new(11, 100 + t))).unwrap();
            assert!((r.best_value - want).abs() < 1e-6, "{} vs {want}", r.best_value);
        }
    }

    #[test]
    fn baseline_channel_gives_floor() {
        let p = thirds(2, 1);
        for t in 0..3 {
            let psi = haar_state(6, SeedSpec::new(13, t)).unwrap();
            for m in 1..=2 {
                let va = baseline_isometry(4, m, 4).unwrap();
                let vb = baseline_isometry(4, m, 8).unwrap();
                let f = lo_objective(&psi, &va, &vb, &p, m).unwrap();
                assert!((f - 0.5f64.powi(m as i32)).abs() < 1e-12);
            }
        }
        let psi = haar_state(6, SeedSpec::new(13, 9)).unwrap();
        let mut cfg = LOSearchConfig::new(1, SeedSpec::new(1, 1));
        cfg.restarts = 1;
        cfg.max_iters = 0;
        cfg.lu_warm_start = false;
        let r = lo_distill(&psi, &p, &cfg).unwrap();
        assert!((r.best_value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn embedded_unitaries_agree_with_lu() {
        let p = thirds(2, 1);
        let psi = haar_state(6, SeedSpec::new(15, 0)).unwrap();
        let u_a = haar_unitary(4, SeedSpec::new(15, 1)).unwrap();
        let u_b = haar_unitary(4, SeedSpec::new(15, 2)).unwrap();
        let f = lu_objective(&psi, &u_a, &u_b, &p, 1).unwrap();
        let v_a = embed_unitary(&u_a, &[0], 8).unwrap();
        let v_b = embed_unitary(&u_b, &[0], 2).unwrap();
        assert!((f - lo_objective(&psi, &v_a, &v_b, &p, 1).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn feasibility_ladder() {
        let p = thirds(2, 1);
        for t in 0..3 {
            let psi = haar_state(6, SeedSpec::new(19, t)).unwrap();
            let mut lu_cfg = LUSearchConfig::new(1, SeedSpec::new(19, 50 + t));
            lu_cfg.restarts = 3;
            lu_cfg.max_iters = 100;
            let mut lo_cfg = LOSearchConfig::new(1, lu_cfg.seed);
            lo_cfg.restarts = 3;
            lo_cfg.max_iters = 100;
            let lu = lu_distill(&psi, &p, &lu_cfg).unwrap();
            let lo = lo_distill(&psi, &p, &lo_cfg).unwrap();
            assert!(lo.best_value >= lu.best_value.max(0.5) - 1e-9);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let p = thirds(1, 1);
        let psi = haar_state(3, SeedSpec::new(0, 0)).unwrap();
        let mut cfg = LUSearchConfig::new(1, SeedSpec::new(0, 0));
        cfg.restarts = 0;
        assert!(lu_distill(&psi, &p, &cfg).is_err());
        let mut lo = LOSearchConfig::new(1, SeedSpec::new(0, 0));
        lo.d_ea = Some(1);
        assert!(lo_distill(&psi, &p, &lo).is_err());
        let unpaired = Partition::tripartite(1, 1, 1);
        assert!(lu_distill(&psi, &unpaired, &LUSearchConfig::new(1, SeedSpec::new(0, 0))).is_err());
    }
}
