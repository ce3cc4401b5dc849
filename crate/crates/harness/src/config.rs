//! Experiment configuration: defaults, a TOML document and command-line
//! flags, merged in that order.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use haarlab_core::bounds::BoundParams;
use haarlab_core::distill::{DEFAULT_MAX_ITERS, DEFAULT_RESTARTS, DEFAULT_TOL};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

/// Tag written into every record and config.
pub const FORMAT_VERSION: &str = "haarlab/1";

const MAX_DENSE: usize = 16;
const MAX_STABILIZER: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Page,
    Measures,
    DistillLu,
    DistillLo,
    Logical,
    Stabilizer,
    Bounds,
    NonunitaryDemo,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Page => "page",
            ExperimentKind::Measures => "measures",
            ExperimentKind::DistillLu => "distill-lu",
            ExperimentKind::DistillLo => "distill-lo",
            ExperimentKind::Logical => "logical",
            ExperimentKind::Stabilizer => "stabilizer",
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::NonunitaryDemo => "nonunitary-demo",
        }
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ensemble of encodings for the `logical` experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingKind {
    #[default]
    Haar,
    Clifford,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub lu_warm_start: bool,
    pub d_ea: Option<usize>,
    pub d_eb: Option<usize>,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
            lu_warm_start: true,
            d_ea: None,
            d_eb: None,
        }
    }
}

/// Evaluation point of the `bounds` experiment. Each bound uses
/// `h² = δ + floor` with its own floor unless `h` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsSettings {
    pub h: Option<f64>,
    pub delta: f64,
    pub w: f64,
    pub params: BoundParams,
}

impl Default for BoundsSettings {
    fn default() -> Self {
        BoundsSettings { h: None, delta: 0.25, w: 0.0, params: BoundParams::default() }
    }
}

/// Fully resolved experiment. `workers` and `out` do not affect results and
/// are left out of the serialized form and the hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub version: String,
    pub kind: ExperimentKind,
    pub n: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub n_c: usize,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub optimizer: OptimizerSettings,
    pub encoding: EncodingKind,
    pub bounds: BoundsSettings,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Partial settings as read from a config file or the command line.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Overrides {
    #[arg(skip)]
    pub version: Option<String>,
    #[arg(skip)]
    pub kind: Option<ExperimentKind>,
    /// Total qubit count.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "na")]
    #[serde(rename = "na")]
    pub n_a: Option<usize>,
    #[arg(long = "nb")]
    #[serde(rename = "nb")]
    pub n_b: Option<usize>,
    #[arg(long = "nc")]
    #[serde(rename = "nc")]
    pub n_c: Option<usize>,
    /// EPR pairs to distill.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub lu_warm_start: Option<bool>,
    #[arg(long)]
    pub d_ea: Option<usize>,
    #[arg(long)]
    pub d_eb: Option<usize>,
    #[arg(long, value_enum)]
    pub encoding: Option<EncodingKind>,
    /// Fixed fidelity parameter `h` for every bound.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub c_net: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub eps_factor: Option<f64>,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Record file; summary and timing files are written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the settings above; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl Overrides {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// `self` with every field set in `top` replaced.
    pub fn merged_with(mut self, top: &Overrides) -> Overrides {
        merge_fields!(self, top; version, kind, n, n_a, n_b, n_c, m, trials, seed, restarts, max_iters, tol,
            lu_warm_start, d_ea, d_eb, encoding, h, delta, w, alpha, c_net, c1, c2, eps_factor, workers, out, config);
        self
    }
}

/// Splits `n` into the three blocks. Unspecified blocks share what is left
/// equally; with nothing specified the split is into thirds.
fn resolve_sizes(n: Option<usize>, sizes: [Option<usize>; 3]) -> Result<(usize, [usize; 3])> {
    let given: usize = sizes.iter().flatten().sum();
    let missing = sizes.iter().filter(|s| s.is_none()).count();
    let n = match n {
        Some(n) => n,
        None if missing == 0 => given,
        None => return Err(HarnessError::Config("--n is required unless --na, --nb and --nc are all given".into())),
    };
    if missing == 0 {
        if given != n {
            return Err(HarnessError::Config(format!("n_A + n_B + n_C = {given} but n = {n}")));
        }
        return Ok((n, sizes.map(|s| s.unwrap_or(0))));
    }
    let left = n
        .checked_sub(given)
        .ok_or_else(|| HarnessError::Config(format!("block sizes {given} exceed n = {n}")))?;
    if left % missing != 0 {
        return Err(HarnessError::Config(format!(
            "cannot split the remaining {left} qubits evenly over {missing} unspecified blocks"
        )));
    }
    Ok((n, sizes.map(|s| s.unwrap_or(left / missing))))
}

impl ExperimentConfig {
    /// Defaults, then `file`, then `flags`.
    pub fn resolve(kind: ExperimentKind, file: Option<&Overrides>, flags: &Overrides) -> Result<Self> {
        let merged = match file {
            Some(f) => f.clone().merged_with(flags),
            None => flags.clone(),
        };
        if let Some(v) = &merged.version {
            if v != FORMAT_VERSION {
                return Err(HarnessError::Config(format!("version {v:?} is not {FORMAT_VERSION:?}")));
            }
        }
        if let Some(k) = merged.kind {
            if k != kind {
                return Err(HarnessError::Config(format!("config file is for {k}, command is {kind}")));
            }
        }
        let mut n_c = merged.n_c;
        let mut n_a = merged.n_a;
        // page is bipartite, with A the largest block below half
        if kind == ExperimentKind::Page {
            n_c = n_c.or(Some(0));
            if n_a.is_none() && merged.n_b.is_none() {
                n_a = merged.n.map(|n| n.saturating_sub(n_c.unwrap_or(0)).saturating_sub(1) / 2);
            }
        }
        let (n, [n_a, n_b, n_c]) = resolve_sizes(merged.n, [n_a, merged.n_b, n_c])?;
        let opt_default = OptimizerSettings::default();
        let optimizer = OptimizerSettings {
            restarts: merged.restarts.unwrap_or(opt_default.restarts),
            max_iters: merged.max_iters.unwrap_or(opt_default.max_iters),
            tol: merged.tol.unwrap_or(opt_default.tol),
            lu_warm_start: merged.lu_warm_start.unwrap_or(opt_default.lu_warm_start),
            d_ea: merged.d_ea,
            d_eb: merged.d_eb,
        };
        let p = BoundParams::default();
        let bounds = BoundsSettings {
            h: merged.h,
            delta: merged.delta.unwrap_or(0.25),
            w: merged.w.unwrap_or(0.0),
            params: BoundParams {
                alpha: merged.alpha.unwrap_or(p.alpha),
                c_net: merged.c_net.unwrap_or(p.c_net),
                c1: merged.c1.unwrap_or(p.c1),
                c2: merged.c2.unwrap_or(p.c2),
                eps_factor: merged.eps_factor.unwrap_or(p.eps_factor),
                ..p
            },
        };
        let workers = merged
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |w| w.get()));
        let cfg = ExperimentConfig {
            version: FORMAT_VERSION.to_string(),
            kind,
            n,
            n_a,
            n_b,
            n_c,
            m: merged.m.unwrap_or(1),
            trials: merged.trials.unwrap_or(1),
            seed: merged.seed.unwrap_or(0),
            optimizer,
            encoding: merged.encoding.unwrap_or_default(),
            bounds,
            workers,
            out: merged.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Command-line entry: reads `--config` if given.
    pub fn from_flags(kind: ExperimentKind, flags: &Overrides) -> Result<Self> {
        let file = flags.config.as_deref().map(Overrides::from_file).transpose()?;
        Self::resolve(kind, file.as_ref(), flags)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.version != FORMAT_VERSION {
            return fail(format!("version {:?} is not {FORMAT_VERSION:?}", self.version));
        }
        if self.n_a + self.n_b + self.n_c != self.n {
            return fail(format!("n_A + n_B + n_C ≠ n = {}", self.n));
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.workers == 0 {
            return fail("workers must be at least 1".into());
        }
        let opt = &self.optimizer;
        if opt.restarts == 0 || opt.tol.is_nan() || opt.tol <= 0.0 {
            return fail("restarts must be ≥ 1 and tol > 0".into());
        }
        let dense = self.n >= 1 && self.n <= MAX_DENSE;
        match self.kind {
            ExperimentKind::Page => {
                if !dense || self.n_a == 0 || 2 * self.n_a >= self.n {
                    return fail(format!("page needs 1 ≤ n ≤ {MAX_DENSE} and 1 ≤ 2 n_A < n"));
                }
            }
            ExperimentKind::Measures => {
                if !dense || self.n_a == 0 || self.n_b == 0 {
                    return fail(format!("measures needs n ≤ {MAX_DENSE} and nonempty A, B"));
                }
            }
            ExperimentKind::DistillLu | ExperimentKind::DistillLo => {
                if !dense || self.m == 0 || self.n_a < self.m || self.n_b < self.m {
                    return fail(format!("distillation needs n ≤ {MAX_DENSE} and 1 ≤ m ≤ n_A, n_B"));
                }
            }
            ExperimentKind::Logical => {
                let scan = haarlab_core::distill::MAX_SCAN_QUBITS;
                if !dense || self.n_a == 0 || self.n_c == 0 || self.n_c > scan || self.n_c > self.n_a + self.n_b {
                    return fail(format!("logical needs n ≤ {MAX_DENSE}, n_A ≥ 1 and 1 ≤ n_C ≤ {scan}"));
                }
            }
            ExperimentKind::Stabilizer => {
                if self.n == 0 || self.n > MAX_STABILIZER {
                    return fail(format!("stabilizer needs 1 ≤ n ≤ {MAX_STABILIZER}"));
                }
            }
            ExperimentKind::Bounds => {
                if self.n == 0 || self.n > 60 || self.m == 0 || self.n_a == 0 || self.n_b == 0 {
                    return fail("bounds needs 1 ≤ n ≤ 60, m ≥ 1 and nonempty A, B".into());
                }
                let b = &self.bounds;
                if !(b.delta > 0.0 && b.delta < 1.0) || !(0.0..=1.0).contains(&b.w) {
                    return fail("bounds needs 0 < δ < 1 and 0 ≤ w ≤ 1".into());
                }
                if b.h.is_some_and(|h| !(0.0..=1.0).contains(&h)) {
                    return fail("h must lie in [0, 1]".into());
                }
            }
            ExperimentKind::NonunitaryDemo => {
                if !dense || self.m != 1 || self.n_a == 0 || self.n_c == 0 {
                    return fail(format!("nonunitary-demo needs n ≤ {MAX_DENSE}, m = 1, n_A ≥ 1 and n_C ≥ 1"));
                }
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the serialized configuration.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
