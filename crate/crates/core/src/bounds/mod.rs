//! Analytic right-hand sides of the concentration bounds, in natural log.
//!
//! Every function returns `ln` of the quantity; [`to_log2`] converts for
//! display.

mod beta;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{ensure, Result};
use crate::random::SeedSpec;

/// Constants left symbolic by the covering and concentration lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Covering constant: a net of `S^{p−1}` has at most `α p ln p · …` points.
    pub alpha: f64,
    /// Net constant of the unitary group and Stiefel manifold.
    pub c_net: f64,
    /// Prefactor of the isometry concentration tail.
    pub c1: f64,
    /// Exponent constant of the isometry concentration tail.
    pub c2: f64,
    /// `ε = eps_factor · δ` unless `eps` is given.
    pub eps_factor: f64,
    pub eps: Option<f64>,
    /// Defaults to `ε²`.
    pub eps_prime: Option<f64>,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { alpha: 400.0, c_net: 1.0, c1: 1.0, c2: 1.0, eps_factor: 0.05, eps: None, eps_prime: None }
    }
}

impl BoundParams {
    fn eps_for(&self, delta: f64) -> f64 {
        self.eps.unwrap_or(self.eps_factor * delta)
    }
}

pub fn to_log2(ln_value: f64) -> f64 {
    ln_value / std::f64::consts::LN_2
}

/// `ln` of the area of the unit sphere in `R^p`, `2π^{p/2} / Γ(p/2)`.
pub fn sphere_log_area(p: f64) -> Result<f64> {
    ensure!(p >= 1.0, InvalidArgument, "dimension {p} below 1");
    Ok(std::f64::consts::LN_2 + 0.5 * p * std::f64::consts::PI.ln() - ln_gamma(0.5 * p))
}

/// `ln` of the volume of the unit ball in `R^p`, `π^{p/2} / Γ(p/2 + 1)`.
pub fn ball_log_volume(p: f64) -> Result<f64> {
    ensure!(p >= 1.0, InvalidArgument, "dimension {p} below 1");
    Ok(0.5 * p * std::f64::consts::PI.ln() - ln_gamma(0.5 * p + 1.0))
}

/// `ln Γ(p + ½) − ln Γ(p)`, switching to its asymptotic series where the
/// direct difference would cancel.
fn ln_gamma_half_shift(p: f64) -> f64 {
    if p < 1e5 {
        ln_gamma(p + 0.5) - ln_gamma(p)
    } else {
        0.5 * p.ln() - 1.0 / (8.0 * p) + 1.0 / (192.0 * p * p * p)
    }
}

/// `ln(S_{2p−1} / V_{2p−1}) = ln(2√π Γ(p + ½) / Γ(p))`.
pub fn log_sphere_ball_ratio(p: f64) -> Result<f64> {
    ensure!(p >= 1.0, InvalidArgument, "dimension {p} below 1");
    Ok((2.0 * std::f64::consts::PI.sqrt()).ln() + ln_gamma_half_shift(p))
}

fn check_cap(d: f64, d_tilde: f64, h: f64) -> Result<()> {
    ensure!(
        d_tilde >= 1.0 && d_tilde <= d - 1.0,
        InvalidArgument,
        "need 1 ≤ d̃ ≤ d − 1, got d = {d}, d̃ = {d_tilde}"
    );
    ensure!((0.0..=1.0).contains(&h), InvalidArgument, "h = {h} outside [0, 1]");
    Ok(())
}

/// `ln` of the normalized area of `{|x_{1..d̃}|² ≥ h²}` on the unit sphere of
/// `C^d`, the survival function of `Beta(d̃, d − d̃)` at `h²`.
pub fn log_cap_ratio(d: f64, d_tilde: f64, h: f64) -> Result<f64> {
    check_cap(d, d_tilde, h)?;
    Ok(beta::ln_beta_survival(d_tilde, d - d_tilde, h * h))
}

pub fn cap_ratio(d: f64, d_tilde: f64, h: f64) -> Result<f64> {
    Ok(log_cap_ratio(d, d_tilde, h)?.exp())
}

/// Monte Carlo estimate of [`cap_ratio`] with its standard error.
pub fn mc_cap_ratio(d: usize, d_tilde: usize, h: f64, samples: usize, seed: SeedSpec) -> Result<(f64, f64)> {
    check_cap(d as f64, d_tilde as f64, h)?;
    ensure!(d <= 64, InvalidArgument, "Monte Carlo oracle limited to d ≤ 64, got {d}");
    ensure!(samples >= 2, InvalidArgument, "need at least two samples");
    let mut rng = seed.rng();
    let h2 = h * h;
    let mut hits = 0usize;
    let mut x = vec![0.0f64; 2 * d];
    for _ in 0..samples {
        for v in x.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        let total: f64 = x.iter().map(|v| v * v).sum();
        let head: f64 = x[..2 * d_tilde].iter().map(|v| v * v).sum();
        if head >= h2 * total {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
}

/// `ε √(1 − ε²/4)`.
pub fn f_eps(eps: f64) -> Result<f64> {
    ensure!(
        eps > 0.0 && eps < std::f64::consts::SQRT_2,
        InvalidArgument,
        "f(ε) needs 0 < ε < √2, got {eps}"
    );
    Ok(eps * (1.0 - eps * eps / 4.0).sqrt())
}

/// `ε / √(1 − ε²)`.
pub fn g_eps(eps: f64) -> Result<f64> {
    ensure!(eps > 0.0 && eps < 1.0, InvalidArgument, "g(ε) needs 0 < ε < 1, got {eps}");
    Ok(eps / (1.0 - eps * eps).sqrt())
}

/// `ln` of `2α d ln(2d) f(ε)^{−(2d−1)} S_{2d−1} / V_{2d−1}`, the size of an
/// ε-net of unit vectors in `C^d`.
pub fn net_log_cardinality_state(d: f64, eps: f64, params: &BoundParams) -> Result<f64> {
    ensure!(d >= 1.0, InvalidArgument, "d = {d} below 1");
    Ok(covering_prefactor(d, params)? - (2.0 * d - 1.0) * f_eps(eps)?.ln() + log_sphere_ball_ratio(d)?)
}

/// `ln(2α p ln(2p))` for a sphere in `C^p`.
fn covering_prefactor(p: f64, params: &BoundParams) -> Result<f64> {
    ensure!(params.alpha > 0.0, InvalidArgument, "α must be positive");
    Ok((2.0 * params.alpha * p * (2.0 * p).ln()).ln())
}

/// `(2 d_small d_big − d_small²) ln(c/ε)`: operator-norm net of isometries
/// `C^{d_small} → C^{d_big}`.
pub fn net_log_cardinality_isometry(d_small: f64, d_big: f64, eps: f64, params: &BoundParams) -> Result<f64> {
    ensure!(d_small <= d_big && d_small >= 1.0, InvalidArgument, "need 1 ≤ d_small ≤ d_big");
    ensure!(eps > 0.0, InvalidArgument, "ε must be positive");
    Ok((2.0 * d_small * d_big - d_small * d_small) * (params.c_net / eps).ln())
}

/// `ln` of the Levy tail `exp(−p η² / (2K²))`.
pub fn levy_log_tail(p: f64, k: f64, eta: f64) -> Result<f64> {
    ensure!(p >= 1.0 && k > 0.0 && eta >= 0.0, InvalidArgument, "need p ≥ 1, K > 0, η ≥ 0");
    Ok(-p * eta * eta / (2.0 * k * k))
}

pub fn levy_tail(p: f64, k: f64, eta: f64) -> Result<f64> {
    Ok(levy_log_tail(p, k, eta)?.exp())
}

/// Term-by-term evaluation of the local-unitary bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm1Terms {
    pub delta: f64,
    pub eps: f64,
    pub eps_prime: f64,
    /// Net-size prefactors `Σ ln(2α p ln 2p)` over `p ∈ {d_A², d_B², d}`.
    pub prefactor: f64,
    /// `ln(S/V)` of the two unitary nets.
    pub a1: f64,
    /// `ln(4π d_A d_B)`, the closed-form upper bound on `a1`.
    pub a1_bound: f64,
    /// Log cap ratio at `h − 2ε`.
    pub a2: f64,
    pub a3: f64,
    pub total: f64,
}

/// Explicit log upper bound on the probability that a Haar state on `C^d`
/// admits an `m`-pair EPR fidelity `h²` under local unitaries.
pub fn thm1_log_rhs(d: f64, d_a: f64, d_b: f64, m: u32, h: f64, params: &BoundParams) -> Result<Thm1Terms> {
    let q = 4f64.powi(m as i32);
    let delta = h * h - 1.0 / q;
    let eps = params.eps_for(delta);
    let eps_prime = params.eps_prime.unwrap_or(eps * eps);
    ensure!(delta > 4.0 * eps && eps > 0.0, InvalidArgument, "need δ = {delta} > 4ε = {}", 4.0 * eps);
    ensure!(eps + 2.0 * eps_prime < 1.0, InvalidArgument, "need ε + 2ε′ < 1");
    ensure!(d_a * d_b <= d && d_a >= 1.0 && d_b >= 1.0, InvalidArgument, "d_A d_B must divide into d");
    let (pa, pb) = (d_a * d_a, d_b * d_b);
    let prefactor = covering_prefactor(pa, params)? + covering_prefactor(pb, params)? + covering_prefactor(d, params)?;
    let a1 = log_sphere_ball_ratio(pa)? + log_sphere_ball_ratio(pb)?;
    let a1_bound = (4.0 * std::f64::consts::PI * d_a * d_b).ln();
    let a2 = log_cap_ratio(d, d / q, h - 2.0 * eps)?;
    let a3 = -(2.0 * pa + 2.0 * pb - 2.0) * f_eps(eps_prime)?.ln() - (2.0 * d - 1.0) * f_eps(eps)?.ln()
        + (2.0 * d - 1.0) * g_eps(eps + 2.0 * eps_prime)?.ln();
    Ok(Thm1Terms { delta, eps, eps_prime, prefactor, a1, a1_bound, a2, a3, total: prefactor + a1 + a2 + a3 })
}

/// Terms of the local-operation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm2Terms {
    pub delta: f64,
    pub eps: f64,
    /// Net exponent `(2 d_A d′_A + 2 d_B d′_B) ln(c/ε)`.
    pub net: f64,
    /// `−d (δ − 2ε)²`.
    pub concentration: f64,
    pub total: f64,
}

/// Explicit log upper bound for local isometries with output dimensions
/// `d′ = d · 4^m` unless given.
pub fn thm2_log_rhs(
    d: f64,
    d_a: f64,
    d_b: f64,
    m: u32,
    h: f64,
    outputs: Option<(f64, f64)>,
    params: &BoundParams,
) -> Result<Thm2Terms> {
    let delta = h * h - 0.5f64.powi(m as i32);
    let eps = params.eps_for(delta);
    ensure!(delta > 2.0 * eps && eps > 0.0, InvalidArgument, "need δ = {delta} > 2ε = {}", 2.0 * eps);
    let q = 4f64.powi(m as i32);
    let (da_out, db_out) = outputs.unwrap_or((d_a * q, d_b * q));
    let net = (2.0 * d_a * da_out + 2.0 * d_b * db_out) * (params.c_net / eps).ln();
    let concentration = -d * (delta - 2.0 * eps).powi(2);
    Ok(Thm2Terms { delta, eps, net, concentration, total: net + concentration })
}

/// Terms of the logical-operator bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm3Terms {
    pub delta: f64,
    pub eps: f64,
    pub prefactor: f64,
    pub net: f64,
    pub concentration: f64,
    pub total: f64,
}

/// Explicit log upper bound on a Haar encoding `C → AB` (total dimension
/// `d = d_A d_B d_C`) admitting a logical operator on A with fidelity `h²`
/// and input trace `w`.
pub fn thm3_log_rhs(d: f64, d_a: f64, d_c: f64, h: f64, w: f64, params: &BoundParams) -> Result<Thm3Terms> {
    let delta = h * h - w;
    let eps = params.eps_for(delta);
    ensure!(delta > 4.0 * eps && eps > 0.0, InvalidArgument, "need δ = {delta} > 4ε = {}", 4.0 * eps);
    ensure!((0.0..=1.0).contains(&w), InvalidArgument, "w = {w} outside [0, 1]");
    let prefactor = (2.0 * params.c1).ln();
    let net = (d_a * d_a + d_c * d_c) * (params.c_net / eps).ln();
    let concentration = -params.c2 * d * (h * h - 4.0 * eps - w).powi(2);
    Ok(Thm3Terms { delta, eps, prefactor, net, concentration, total: prefactor + net + concentration })
}

#[cfg(test)]
mod tests;
