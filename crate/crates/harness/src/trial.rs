//! Body of a single trial for each experiment kind.

use haarlab_core::bounds::{thm1_log_rhs, thm2_log_rhs, thm3_log_rhs, to_log2};
use haarlab_core::distill::{
    logical_pauli_scan, lo_distill, lu_distill, nonunitary_logical_demo, Encoding, LOSearchConfig, LUSearchConfig,
    SearchResult,
};
use haarlab_core::measures::{page_deviation, region_entropy, MeasureReport};
use haarlab_core::qstate::Partition;
use haarlab_core::random::{haar_state, SeedSpec};
use haarlab_core::stabilizer::{clifford_encoding, clifford_logical_counts, random_stabilizer_state, tripartite_counts};

use crate::config::{EncodingKind, ExperimentConfig, ExperimentKind};
use crate::record::Outcome;

type CoreResult<T> = haarlab_core::Result<T>;

const STATE_STREAM: u64 = 0;
const SEARCH_STREAM: u64 = 1;

/// Runs trial `index`. Every random draw comes from `SeedSpec::new(seed, index)`.
pub fn run_trial(config: &ExperimentConfig, index: u64) -> CoreResult<Outcome> {
    let seed = SeedSpec::new(config.seed, index);
    match config.kind {
        ExperimentKind::Page => page(config, seed),
        ExperimentKind::Measures => measures(config, seed),
        ExperimentKind::DistillLu | ExperimentKind::DistillLo => distill(config, seed),
        ExperimentKind::Logical => logical(config, seed),
        ExperimentKind::Stabilizer => stabilizer(config, seed),
        ExperimentKind::Bounds => bounds(config),
        ExperimentKind::NonunitaryDemo => nonunitary(config, seed),
    }
}

fn partition(config: &ExperimentConfig) -> Partition {
    Partition::tripartite(config.n_a, config.n_b, config.n_c)
}

fn page(config: &ExperimentConfig, seed: SeedSpec) -> CoreResult<Outcome> {
    let psi = haar_state(config.n, seed.derive(STATE_STREAM))?;
    let a: Vec<usize> = (0..config.n_a).collect();
    let dev = page_deviation(&psi, &a)?;
    let scale = 2f64.powf((2.0 * config.n_a as f64 - config.n as f64) / 2.0);
    let mut out = Outcome::default();
    out.value("page_dev", dev)
        .value("page_scale", scale)
        .value("page_ratio", dev / scale)
        .value("s_a", region_entropy(&psi, &a)?);
    Ok(out)
}

fn measures(config: &ExperimentConfig, seed: SeedSpec) -> CoreResult<Outcome> {
    let psi = haar_state(config.n, seed.derive(STATE_STREAM))?;
    let report = MeasureReport::compute(&psi, &partition(config))?;
    let mut out = Outcome::default();
    for (name, v) in report.fields() {
        out.value(name, v);
    }
    Ok(out)
}

fn search_outcome(result: &SearchResult) -> Outcome {
    let mut out = Outcome::default();
    out.value("best_value", result.best_value)
        .value("best_restart", result.best_restart as f64)
        .value("iterations", result.iterations() as f64)
        .flag("converged", result.converged());
    for (k, r) in result.restarts.iter().enumerate() {
        out.value(format!("restart_{k}_value"), r.value)
            .value(format!("restart_{k}_iterations"), r.iterations as f64);
    }
    out
}

fn distill(config: &ExperimentConfig, seed: SeedSpec) -> CoreResult<Outcome> {
    let psi = haar_state(config.n, seed.derive(STATE_STREAM))?;
    let p = partition(config).with_leading_pairs(config.m)?;
    let opt = &config.optimizer;
    let search_seed = seed.derive(SEARCH_STREAM);
    let result = if config.kind == ExperimentKind::DistillLu {
        let cfg = LUSearchConfig {
            m: config.m,
            restarts: opt.restarts,
            max_iters: opt.max_iters,
            tol: opt.tol,
            seed: search_seed,
        };
        lu_distill(&psi, &p, &cfg)?
    } else {
        let cfg = LOSearchConfig {
            m: config.m,
            d_ea: opt.d_ea,
            d_eb: opt.d_eb,
            restarts: opt.restarts,
            max_iters: opt.max_iters,
            tol: opt.tol,
            seed: search_seed,
            lu_warm_start: opt.lu_warm_start,
        };
        lo_distill(&psi, &p, &cfg)?
    };
    Ok(search_outcome(&result))
}

fn logical(config: &ExperimentConfig, seed: SeedSpec) -> CoreResult<Outcome> {
    let (n_a, n_b, n_c) = (config.n_a, config.n_b, config.n_c);
    let mut out = Outcome::default();
    let enc = match config.encoding {
        EncodingKind::Haar => Encoding::haar(n_a, n_b, n_c, seed.derive(STATE_STREAM))?,
        EncodingKind::Clifford => {
            let cliff = clifford_encoding(n_a, n_b, n_c, seed.derive(STATE_STREAM))?;
            let counts = clifford_logical_counts(&cliff)?;
            out.value("g_a", counts.g_a as f64)
                .value("g_b", counts.g_b as f64)
                .value("k", counts.k as f64);
            cliff.to_encoding()?
        }
    };
    let scan = logical_pauli_scan(&enc)?;
    out.value("scan_value", scan.value);
    Ok(out)
}

fn stabilizer(config: &ExperimentConfig, seed: SeedSpec) -> CoreResult<Outcome> {
    let tableau = random_stabilizer_state(config.n, seed.derive(STATE_STREAM))?;
    let c = tripartite_counts(&tableau, &partition(config))?;
    let i_ab = c.mutual_information_ab();
    let mut out = Outcome::default();
    out.value("e_ab", c.e_ab as f64)
        .value("e_ac", c.e_ac as f64)
        .value("e_bc", c.e_bc as f64)
        .value("g", c.g as f64)
        .value("s_a", c.s_a as f64)
        .value("s_b", c.s_b as f64)
        .value("s_c", c.s_c as f64)
        .value("i_ab", i_ab as f64)
        .value("half_i_ab", (i_ab / 2) as f64)
        .flag("ghz_free", c.g == 0)
        .flag("e_ab_matches_half_i", c.e_ab == i_ab / 2);
    Ok(out)
}

fn bounds(config: &ExperimentConfig) -> CoreResult<Outcome> {
    let b = &config.bounds;
    let dim = |q: usize| 2f64.powi(q as i32);
    let (d, d_a, d_b, d_c) = (dim(config.n), dim(config.n_a), dim(config.n_b), dim(config.n_c));
    let m = config.m as u32;
    let h_for = |floor: f64| b.h.unwrap_or_else(|| (b.delta + floor).sqrt());
    let mut out = Outcome::default();

    let t1 = thm1_log_rhs(d, d_a, d_b, m, h_for(0.25f64.powi(m as i32)), &b.params)?;
    out.value("thm1_delta", t1.delta)
        .value("thm1_eps", t1.eps)
        .value("thm1_prefactor", t1.prefactor)
        .value("thm1_a1", t1.a1)
        .value("thm1_a1_bound", t1.a1_bound)
        .value("thm1_a2", t1.a2)
        .value("thm1_a3", t1.a3)
        .value("thm1_total", t1.total)
        .value("thm1_total_log2", to_log2(t1.total));

    let t2 = thm2_log_rhs(d, d_a, d_b, m, h_for(0.5f64.powi(m as i32)), None, &b.params)?;
    out.value("thm2_delta", t2.delta)
        .value("thm2_eps", t2.eps)
        .value("thm2_net", t2.net)
        .value("thm2_concentration", t2.concentration)
        .value("thm2_total", t2.total)
        .value("thm2_total_log2", to_log2(t2.total));

    let t3 = thm3_log_rhs(d, d_a, d_c, h_for(b.w), b.w, &b.params)?;
    out.value("thm3_delta", t3.delta)
        .value("thm3_eps", t3.eps)
        .value("thm3_prefactor", t3.prefactor)
        .value("thm3_net", t3.net)
        .value("thm3_concentration", t3.concentration)
        .value("thm3_total", t3.total)
        .value("thm3_total_log2", to_log2(t3.total));
    for name in ["thm1", "thm2", "thm3"] {
        let total = out.values[&format!("{name}_total")];
        out.flag(format!("{name}_nontrivial"), total < 0.0);
    }
    Ok(out)
}

fn nonunitary(config: &ExperimentConfig, seed: SeedSpec) -> CoreResult<Outcome> {
    let psi = haar_state(config.n, seed.derive(STATE_STREAM))?;
    let p = partition(config);
    let c0 = p.c()[0];
    let p = p.with_c_split(vec![c0])?;
    let opt = &config.optimizer;
    let cfg = LUSearchConfig {
        m: 1,
        restarts: opt.restarts,
        max_iters: opt.max_iters,
        tol: opt.tol,
        seed: seed.derive(SEARCH_STREAM),
    };
    let demo = nonunitary_logical_demo(&psi, &p, &cfg)?;
    let mut out = Outcome::default();
    out.value("fidelity", demo.fidelity)
        .value("postselect_probability", demo.postselect_probability)
        .value("iterations", demo.search.iterations() as f64)
        .flag("converged", demo.search.converged());
    Ok(out)
}
