//! Independent reference computations shared by the integration tests and
//! the acceptance suite.
#![allow(dead_code)]

use std::f64::consts::PI;

use jcas_core::model::SystemParams;
use jcas_core::simulator::Estimate;

/// Sensing-probability decay rate `a` in `exp(-a d^alpha)`, rebuilt from
/// first principles: `mu * (P_th / P_tx) * (4 pi f_c / c)^2`.
pub fn sensing_rate(p: &SystemParams) -> f64 {
    let l0 = (4.0 * PI * p.f_c / 299_792_458.0).powi(2);
    let p_th = 10f64.powf((p.p_th_dbm - 30.0) / 10.0);
    let p_tx = 10f64.powf((p.p_tx_dbm - 30.0) / 10.0);
    p.mu * p_th / p_tx * l0
}

/// Midpoint rule with `n` cells.
pub fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// `int_a^inf f`, as a midpoint sum over `[a, b]` plus a midpoint sum of the
/// tail mapped through `x = 1 / v`.
pub fn midpoint_to_infinity(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let head = midpoint(&f, a, b, n);
    let tail = midpoint(|v| f(1.0 / v) / (v * v), 0.0, 1.0 / b, n);
    head + tail
}

fn sensing_reach(p: &SystemParams) -> f64 {
    // exp(-a d^alpha) < e^-60 beyond this distance.
    (60.0 / sensing_rate(p)).powf(1.0 / p.alpha)
}

/// `K_r` by a radial Riemann sum over `|x| > r_c`.
pub fn k_r_oracle(p: &SystemParams, r_c: f64) -> f64 {
    let a = sensing_rate(p);
    let reach = sensing_reach(p);
    let area = if r_c >= reach {
        0.0
    } else {
        midpoint(|r| 2.0 * PI * r * (-a * r.powf(p.alpha)).exp(), r_c, reach, 20_000)
    };
    p.eta * p.tau * p.lambda * (p.phi / (2.0 * PI)).min(1.0) * area
}

/// `K_c` by a 2-D polar Riemann sum around the receiver at the origin with
/// the transmitter at `(r_c, 0)` and an explicit indicator `|x| > r_c`.
pub fn k_c_oracle_2d(p: &SystemParams, r_c: f64, n_r: usize, n_theta: usize) -> f64 {
    let a = sensing_rate(p);
    let outer = r_c + sensing_reach(p);
    let hr = (outer - r_c) / n_r as f64;
    let ht = 2.0 * PI / n_theta as f64;
    let trig: Vec<(f64, f64)> = (0..n_theta)
        .map(|j| {
            let t = (j as f64 + 0.5) * ht;
            (t.cos(), t.sin())
        })
        .collect();
    let mut sum = 0.0;
    for i in 0..n_r {
        let r = r_c + (i as f64 + 0.5) * hr;
        if r <= r_c {
            continue;
        }
        let mut ring = 0.0;
        for &(c, s) in &trig {
            let d = ((r * c - r_c).powi(2) + (r * s).powi(2)).sqrt();
            ring += (-a * d.powf(p.alpha)).exp();
        }
        sum += r * ring;
    }
    (1.0 - p.tau) * p.lambda * sum * hr * ht
}

/// `K_c` by a radial Riemann sum around the transmitter, weighting each
/// circle by the arc length lying outside the receiver's ball.
pub fn k_c_oracle_arc(p: &SystemParams, r_c: f64, n: usize) -> f64 {
    let a = sensing_rate(p);
    let reach = sensing_reach(p);
    let f = |rho: f64| {
        let arc = if rho >= 2.0 * r_c { 2.0 * PI } else { 2.0 * PI - 2.0 * (rho / (2.0 * r_c)).acos() };
        rho * arc * (-a * rho.powf(p.alpha)).exp()
    };
    let area = if 2.0 * r_c < reach {
        midpoint(f, 0.0, 2.0 * r_c, n) + midpoint(f, 2.0 * r_c, reach, n)
    } else {
        midpoint(f, 0.0, reach, n)
    };
    (1.0 - p.tau) * p.lambda * area
}

fn link_grid(p: &SystemParams) -> (f64, f64) {
    let lambda_c = (1.0 - p.tau) * p.lambda;
    (lambda_c, (60.0 / (PI * lambda_c)).sqrt())
}

/// `q_w` as a Riemann sum over the link distance.
pub fn q_w_oracle(p: &SystemParams, n: usize) -> f64 {
    let (lambda_c, reach) = link_grid(p);
    let f = |r: f64| {
        let k_r = k_r_oracle(p, r);
        let k_c = k_c_oracle_arc(p, r, 2_000);
        let contention = if k_c == 0.0 { 1.0 } else { (1.0 - (-k_c).exp()) / k_c };
        2.0 * PI * lambda_c * r * (-lambda_c * PI * r * r).exp() * contention * (-k_r).exp()
    };
    midpoint(f, 0.0, reach, n)
}

/// `P_s` for a given `q_w` (independent `h1`) as a Riemann sum over the link
/// distance with mapped-tail Riemann sums for both interference fields.
pub fn p_s_oracle(p: &SystemParams, q_w: f64, n: usize) -> f64 {
    let (lambda_c, reach) = link_grid(p);
    let t = 10f64.powf(p.t_db / 10.0);
    let l0 = (4.0 * PI * p.f_c / 299_792_458.0).powi(2);
    let noise = 10f64.powf((p.noise_dbm - 30.0) / 10.0);
    let p_tx = 10f64.powf((p.p_tx_dbm - 30.0) / 10.0);
    let lambda_radar = p.eta * p.tau * p.lambda * (p.phi / (2.0 * PI)).min(1.0);
    let f = |r: f64| {
        let kernel = |x: f64| 2.0 * PI * x / (1.0 + (x / r).powf(p.alpha) / t);
        let radar = midpoint(kernel, 0.0, r, 2_000) + midpoint_to_infinity(kernel, r, 50.0 * r, 4_000);
        let comm = q_w * midpoint_to_infinity(kernel, r, 50.0 * r, 4_000);
        let snr_term = (-p.mu * t * l0 * r.powf(p.alpha) * noise / p_tx).exp();
        let pdf = 2.0 * PI * lambda_c * r * (-lambda_c * PI * r * r).exp();
        pdf * snr_term * (-lambda_radar * radar).exp() * (-lambda_c * comm).exp()
    };
    midpoint(f, 0.0, reach, n)
}

/// Largest deviation from monotonicity: pairs `(i, j)`, `i < j`, where
/// `values[j]` moves against `direction` (+1 non-decreasing, -1
/// non-increasing) and the two 95% intervals do not overlap.
pub fn monotone_violations(values: &[Estimate], direction: f64) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let (a, b) = (&values[i], &values[j]);
            if direction * (b.mean - a.mean) < 0.0 && !a.overlaps(b) {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// Whether `values` rises and then falls: some peak index with no
/// significant decrease before it, no significant increase after it, and a
/// peak significantly above both ends.
pub fn is_unimodal(values: &[Estimate]) -> Option<usize> {
    (0..values.len()).find(|&k| {
        monotone_violations(&values[..=k], 1.0).is_empty()
            && monotone_violations(&values[k..], -1.0).is_empty()
            && !values[k].overlaps(&values[0])
            && !values[k].overlaps(&values[values.len() - 1])
            && values[k].mean > values[0].mean
            && values[k].mean > values[values.len() - 1].mean
    })
}
