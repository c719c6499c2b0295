//! Radar-mode closed forms: echo power, slot collision factor and the
//! maximum unambiguous range.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{SystemParams, SPEED_OF_LIGHT};

/// Radar channel constant `kappa = c^2 / ((4 pi)^3 f_c^2)`.
pub fn radar_constant(f_c: f64) -> f64 {
    let four_pi = 4.0 * PI;
    SPEED_OF_LIGHT * SPEED_OF_LIGHT / (four_pi.powi(3) * f_c * f_c)
}

/// Echo power (W) returned by a target at range `d` (m).
pub fn echo_power(p: &SystemParams, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("echo power needs d > 0, got {d}")));
    }
    let g = p.antenna_gain();
    Ok(radar_constant(p.f_c) * p.p_tx_w() * g * g * p.sigma_rcs / d.powi(4))
}

/// Largest range at which the echo power is still at least `threshold` W.
/// Inverse of [`echo_power`].
pub fn echo_range(p: &SystemParams, threshold: f64) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("echo threshold must be > 0, got {threshold}")));
    }
    let g = p.antenna_gain();
    let at_one_metre = radar_constant(p.f_c) * p.p_tx_w() * g * g * p.sigma_rcs;
    Ok((at_one_metre / threshold).powf(0.25))
}

/// Probability that a neighbour with a uniformly random cycle offset
/// transmits at least once inside a radar's `M_r - 1` echo-wait slots.
///
/// Offsets `1..M_r` put the neighbour's pulse in the window; an offset
/// `i >= M_r` overlaps `N_i = min(M_r - 1, M - i)` of its communication slots,
/// each used with probability `q_w`.
pub fn collision_factor(total_slots: u32, radar_slots: u32, q_w: f64) -> Result<f64> {
    if radar_slots == 0 || radar_slots >= total_slots {
        return Err(Error::Domain(format!(
            "need 0 < M_r < M, got M_r = {radar_slots}, M = {total_slots}"
        )));
    }
    if !(0.0..=1.0).contains(&q_w) {
        return Err(Error::Domain(format!("q_w must lie in [0, 1], got {q_w}")));
    }
    let m = total_slots as f64;
    let idle = 1.0 - q_w;
    let miss: f64 = (radar_slots..total_slots)
        .map(|i| {
            let n_i = (radar_slots - 1).min(total_slots - i);
            idle.powi(n_i as i32)
        })
        .sum();
    Ok(1.0 - 1.0 / m - miss / m)
}

/// Maximum unambiguous radar range (m) for the target false-alarm rate, given
/// the communication medium-access probability.
///
/// The closed form contains no transmit power and no node intensity; density
/// enters only through `q_w` in the collision factor.
pub fn radar_max_range(p: &SystemParams, q_w: f64) -> Result<f64> {
    let c = collision_factor(p.total_slots, p.radar_slots, q_w)?;
    max_range_for_collision(p, c)
}

/// Same closed form with the collision factor supplied directly.
pub fn max_range_for_collision(p: &SystemParams, c: f64) -> Result<f64> {
    if p.p_fa >= c {
        return Err(Error::InfeasibleTarget(format!(
            "P_fa = {} is not below the collision factor C = {c}",
            p.p_fa
        )));
    }
    let scale = p.sigma_rcs * p.f_c * p.f_c / (4.0 * PI.powi(3) * SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    let log_term = -(-p.p_fa / c).ln_1p();
    Ok(scale.powf(0.125) * log_term.powf(0.25))
}
