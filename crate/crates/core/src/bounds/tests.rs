use super::*;
use std::f64::consts::PI;

const P: BoundParams = BoundParams {
    alpha: 400.0,
    c_net: 1.0,
    c1: 1.0,
    c2: 1.0,
    eps_factor: 0.05,
    eps: None,
    eps_prime: None,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn sphere_and_ball_small_cases() {
    assert!(close(sphere_log_area(2.0).unwrap(), (2.0 * PI).ln(), 1e-14));
    assert!(close(sphere_log_area(3.0).unwrap(), (4.0 * PI).ln(), 1e-14));
    assert!(close(ball_log_volume(2.0).unwrap(), PI.ln(), 1e-14));
    assert!(close(ball_log_volume(3.0).unwrap(), (4.0 * PI / 3.0).ln(), 1e-14));
    // d = 4: Γ(4) = 6, Γ(4.5) = 105√π/16.
    let direct = (2.0 * PI.powi(4) / 6.0) / (PI.powf(3.5) / (105.0 * PI.sqrt() / 16.0));
    assert!(close(log_sphere_ball_ratio(4.0).unwrap(), direct.ln(), 1e-10));
    assert!(close(sphere_log_area(8.0).unwrap() - ball_log_volume(7.0).unwrap(), direct.ln(), 1e-10));
    assert!(sphere_log_area(0.5).is_err());
}

#[test]
fn sphere_ratio_series_is_continuous() {
    let p = 1e5;
    let direct = ln_gamma(p + 0.5) - ln_gamma(p);
    let series = 0.5 * p.ln() - 1.0 / (8.0 * p) + 1.0 / (192.0 * p * p * p);
    assert!((direct - series).abs() < 1e-9);
}

#[test]
fn huge_dimensions_stay_finite() {
    let d = 2f64.powi(40);
    assert!(sphere_log_area(d).unwrap().is_finite());
    assert!(ball_log_volume(d).unwrap().is_finite());
    assert!(log_sphere_ball_ratio(d).unwrap().is_finite());
    assert!(log_cap_ratio(d, d / 4.0, 0.6).unwrap().is_finite());
    assert!(net_log_cardinality_state(d, 0.01, &P).unwrap().is_finite());
    assert!(levy_log_tail(d, 1.0, 0.3).unwrap().is_finite());
    let t = thm1_log_rhs(d, 2f64.powi(13), 2f64.powi(13), 1, 0.75f64.sqrt(), &P).unwrap();
    assert!(t.total.is_finite() && t.total < 0.0);
}

#[test]
fn cap_ratio_examples() {
    assert_eq!(cap_ratio(8.0, 2.0, 0.0).unwrap(), 1.0);
    assert!(close(cap_ratio(4.0, 1.0, 0.5f64.sqrt()).unwrap(), 0.125, 1e-12));
    for d in [2.0, 3.0, 7.0, 20.0, 100.0] {
        for k in 0..=10 {
            let h2 = k as f64 / 10.0;
            let want = (1.0 - h2).powf(d - 1.0);
            let got = cap_ratio(d, 1.0, h2.sqrt()).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.max(1e-300), "d={d} h²={h2}");
        }
    }
    assert!(cap_ratio(4.0, 0.0, 0.5).is_err());
    assert!(cap_ratio(4.0, 4.0, 0.5).is_err());
    assert!(cap_ratio(4.0, 1.0, 1.5).is_err());
}

#[test]
fn cap_ratio_is_monotone_and_subgaussian() {
    for d in [2.0, 4.0, 16.0, 64.0, 1024.0, 4096.0] {
        for dt in [1.0, d / 4.0, d / 2.0, d - 1.0] {
            if dt < 1.0 {
                continue;
            }
            let mut prev = 1.0;
            for k in 0..=40 {
                let h = k as f64 / 40.0;
                let v = cap_ratio(d, dt, h).unwrap();
                assert!((0.0..=1.0).contains(&v));
                assert!(v <= prev + 1e-15);
                prev = v;
                let delta = h * h - dt / d;
                if delta > 0.0 {
                    assert!(v <= (-2.0 * (d + 1.0) * delta * delta).exp() * (1.0 + 1e-12));
                }
            }
        }
    }
}

#[test]
fn monte_carlo_oracle() {
    assert_eq!(mc_cap_ratio(4, 1, 0.0, 100, SeedSpec::new(1, 0)).unwrap().0, 1.0);
    let (p, se) = mc_cap_ratio(4, 1, 0.5f64.sqrt(), 100_000, SeedSpec::new(2, 0)).unwrap();
    assert!((p - 0.125).abs() <= 3.0 * se);
    let (p, se) = mc_cap_ratio(16, 4, 0.4f64.sqrt(), 100_000, SeedSpec::new(3, 0)).unwrap();
    assert!((p - cap_ratio(16.0, 4.0, 0.4f64.sqrt()).unwrap()).abs() <= 3.0 * se);
    assert!(mc_cap_ratio(65, 1, 0.5, 10, SeedSpec::new(0, 0)).is_err());
}

#[test]
fn scalar_maps() {
    assert!(close(f_eps(1.0).unwrap(), 3f64.sqrt() / 2.0, 1e-15));
    assert!(close(g_eps(0.6).unwrap(), 0.75, 1e-15));
    for k in 1..100 {
        let e = k as f64 / 100.0;
        assert!(f_eps(e).unwrap() < e && e < g_eps(e).unwrap());
    }
    assert!(f_eps(0.0).is_err() && f_eps(1.5).is_err());
    assert!(g_eps(1.0).is_err());
}

#[test]
fn state_net_cardinality() {
    let hand = (2.0 * 400.0 * 2.0 * 4f64.ln()) - 3.0 * (0.5 * (1.0 - 0.0625f64).sqrt()).ln()
        + (2.0 * PI.powi(2) / 1.0 / (PI.powf(1.5) / (0.75 * PI.sqrt()))).ln();
    let hand = hand - 2.0 * 400.0 * 2.0 * 4f64.ln() + (2.0 * 400.0 * 2.0 * 4f64.ln()).ln();
    assert!(close(net_log_cardinality_state(2.0, 0.5, &P).unwrap(), hand, 1e-10));
    let mut prev = f64::INFINITY;
    for k in 1..100 {
        let v = net_log_cardinality_state(8.0, k as f64 / 100.0, &P).unwrap();
        assert!(v < prev);
        prev = v;
    }
    let d = 50.0;
    let a = net_log_cardinality_state(d, 1e-3, &P).unwrap();
    let b = net_log_cardinality_state(d, 1e-4, &P).unwrap();
    assert!(close((b - a) / 10f64.ln(), 2.0 * d - 1.0, 1e-6));
}

#[test]
fn isometry_net_cardinality() {
    let d = 6.0;
    assert!(close(net_log_cardinality_isometry(d, d, 0.1, &P).unwrap(), d * d * 10f64.ln(), 1e-14));
    let (da, m) = (4.0, 2);
    let q = 4f64.powi(m);
    let v = net_log_cardinality_isometry(da, da * q, 0.1, &P).unwrap();
    assert!(close(v / 10f64.ln(), (2.0 * q - 1.0) * da * da, 1e-14));
    let v2 = net_log_cardinality_isometry(da, da * q, 0.2, &P).unwrap();
    assert!(close(v - v2, (2.0 * da * da * q - da * da) * 2f64.ln(), 1e-12));
    assert!(net_log_cardinality_isometry(5.0, 4.0, 0.1, &P).is_err());
}

#[test]
fn levy_examples() {
    assert_eq!(levy_tail(10.0, 2.0, 0.0).unwrap(), 1.0);
    let (d, delta) = (64.0, 0.2);
    assert!(close(levy_tail(2.0 * d, 1.0, delta).unwrap(), (-d * delta * delta).exp(), 1e-14));
    let a = levy_log_tail(10.0, 1.5, 0.3).unwrap();
    let b = levy_log_tail(40.0, 1.5, 0.3).unwrap();
    assert!(close(b / a, 4.0, 1e-14));
    assert!(levy_tail(0.5, 1.0, 0.1).is_err());
}

#[test]
fn thm1_cap_term_tracks_leading_order() {
    let d = 4096.0;
    let h = 0.5f64.sqrt();
    let t = thm1_log_rhs(d, 16.0, 16.0, 1, h, &P).unwrap();
    assert!(close(t.delta, 0.25, 1e-15));
    let lead = -2.0 * d * t.delta * t.delta;
    assert!(t.a2 < 0.0 && ((t.a2 - lead) / lead).abs() < 0.25, "a2 {} lead {}", t.a2, lead);
    assert!(t.a1 <= t.a1_bound);
    assert!(close(t.total, t.prefactor + t.a1 + t.a2 + t.a3, 1e-14));

    let tiny = BoundParams { eps: Some(1e-9), ..P };
    let t = thm1_log_rhs(d, 16.0, 16.0, 1, h, &tiny).unwrap();
    assert!(close(t.a2, log_cap_ratio(d, d / 4.0, h).unwrap(), 1e-6));
    assert!(t.a2 <= -2.0 * (d + 1.0) * t.delta * t.delta);
}

#[test]
fn thm1_weakens_with_larger_local_dimension() {
    let d = 2f64.powi(20);
    let h = 0.75f64.sqrt();
    let mut prev = f64::NEG_INFINITY;
    for k in 1..=8 {
        let da = 2f64.powi(k);
        let v = thm1_log_rhs(d, da, 16.0, 1, h, &P).unwrap().total;
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn thm1_rejects_small_delta() {
    assert!(thm1_log_rhs(64.0, 2.0, 2.0, 1, 0.5, &P).is_err());
    let loose = BoundParams { eps: Some(0.2), ..P };
    assert!(thm1_log_rhs(64.0, 2.0, 2.0, 1, 1.0, &loose).is_err());
}

#[test]
fn thm2_examples() {
    let h = 1.0;
    let tiny = BoundParams { eps: Some(1e-300), ..P };
    let t = thm2_log_rhs(4096.0, 16.0, 16.0, 1, h, Some((16.0, 16.0)), &tiny).unwrap();
    assert!(close(t.concentration, -4096.0 * 0.25, 1e-12));
    let t = thm2_log_rhs(2f64.powi(20), 16.0, 16.0, 1, h, None, &P).unwrap();
    assert!(t.total < 0.0);
    for m in 1..4 {
        let q = 4f64.powi(m as i32);
        let t = thm2_log_rhs(2f64.powi(24), 8.0, 4.0, m, h, None, &P).unwrap();
        assert!(close(t.net / (t.eps.recip().ln() * 2.0 * q), 64.0 + 16.0, 1e-12));
    }
    assert!(thm2_log_rhs(64.0, 2.0, 2.0, 1, 0.7, None, &P).is_err());
}

#[test]
fn thm3_examples() {
    assert!(thm3_log_rhs(4096.0, 8.0, 4.0, 1.0, 1.0, &P).is_err());
    let h = 0.5f64.sqrt();
    assert!(thm3_log_rhs(4096.0, 8.0, 4.0, h, 0.0, &P).unwrap().total < 0.0);
    let mut prev = f64::NEG_INFINITY;
    for k in 0..10 {
        let w = k as f64 / 40.0;
        let v = thm3_log_rhs(4096.0, 8.0, 4.0, h, w, &P).unwrap().total;
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn bounds_tighten_with_dimension_at_fixed_ratios() {
    let mut prev = [f64::INFINITY; 3];
    for n in (24..=40).step_by(4) {
        let d = 2f64.powi(n);
        let local = 2f64.powi(n / 4);
        let t1 = thm1_log_rhs(d, local, local, 1, 0.5f64.sqrt(), &P).unwrap().total;
        let t2 = thm2_log_rhs(d, local, local, 1, 1.0, None, &P).unwrap().total;
        let t3 = thm3_log_rhs(d, local, local, 1.0, 0.75, &P).unwrap().total;
        let cur = [t1, t2, t3];
        for (c, p) in cur.iter().zip(prev.iter()) {
            assert!(c.is_finite() && c <= p, "n={n} {cur:?} {prev:?}");
        }
        prev = cur;
    }
}
