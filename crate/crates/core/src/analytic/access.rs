//! Carrier-sense medium access: the link-distance density, the exclusion
//! integrals `K_r` and `K_c`, and the medium-access probability `q_w`.
//!
//! The typical receiver sits at the origin and its transmitter at `(r_c, 0)`.
//! `K_r` counts duty-active, beam-aligned radars outside `B(0, r_c)` that the
//! transmitter senses above `P_th` under Rayleigh fading; `K_c` counts
//! communication nodes outside the same ball, weighted by the sensing
//! probability around the transmitter.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::quadrature::{integrate, integrate_radial, QuadratureSpec};

/// `exp(-u)` is below 1e-26 past this point; the link-distance integrals stop
/// there.
pub(crate) const LINK_TAIL_CUTOFF: f64 = 60.0;

/// Nearest-neighbour distance density of a planar PPP with intensity
/// `lambda_c`: `2 pi lambda_c r exp(-lambda_c pi r^2)`.
pub fn nn_distance_pdf(lambda_c: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    2.0 * PI * lambda_c * r * (-lambda_c * PI * r * r).exp()
}

/// `(1 - e^-K) / K`, the probability that a node holds the smallest back-off
/// mark among a Poisson number (mean `K`) of sensed contenders.
pub fn contention_factor(k: f64) -> f64 {
    if k < 1e-6 {
        1.0 - k / 2.0 + k * k / 6.0
    } else {
        -(-k).exp_m1() / k
    }
}

/// Decay rate `a` of the sensing probability `exp(-a d^alpha)`:
/// `a = mu (P_th / P_tx) L0`.
pub(crate) fn sensing_rate(p: &SystemParams) -> f64 {
    p.mu * p.p_th_w() / p.p_tx_w() * p.path_loss().l0
}

/// Scale length `a^(-1/alpha)`, the distance at which the sensing probability
/// has dropped to `1/e`.
pub(crate) fn sensing_scale(p: &SystemParams, rate: f64) -> f64 {
    rate.powf(-1.0 / p.alpha)
}

/// Exclusion integrals `(K_r, K_c)` for link distance `r_c`.
pub fn exclusion_integrals(p: &SystemParams, r_c: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    if !(r_c >= 0.0) {
        return Err(Error::Domain(format!("link distance must be >= 0, got {r_c}")));
    }
    let rate = sensing_rate(p);
    if rate.is_infinite() {
        return Ok((0.0, 0.0));
    }
    if !(rate > 0.0) {
        return Err(Error::Domain("sensing threshold of 0 W senses the whole plane".into()));
    }
    let dens = p.intensities();
    let k_r = dens.lambda_r_active * p.beam_fraction() * radar_exclusion_area(p, rate, r_c, quad)?;
    let k_c = dens.lambda_c * comm_exclusion_area(p, rate, r_c, quad)?;
    Ok((k_r, k_c))
}

/// `int_{|x| > r_c} exp(-a |x|^alpha) dx`.
fn radar_exclusion_area(p: &SystemParams, rate: f64, r_c: f64, quad: &QuadratureSpec) -> Result<f64> {
    let alpha = p.alpha;
    let scale = sensing_scale(p, rate);
    let f = |r: f64| 2.0 * PI * r * (-rate * r.powf(alpha)).exp();
    Ok(integrate_radial(f, r_c, &[scale, 4.0 * scale], quad)?.value)
}

/// `int_{|x| > r_c} exp(-a |x - (r_c, 0)|^alpha) dx`, in polar coordinates
/// around the transmitter. A circle of radius `rho` around `(r_c, 0)` lies
/// outside `B(0, r_c)` on an arc of length `2 pi - 2 acos(rho / 2 r_c)`
/// (full circle once `rho >= 2 r_c`).
fn comm_exclusion_area(p: &SystemParams, rate: f64, r_c: f64, quad: &QuadratureSpec) -> Result<f64> {
    let alpha = p.alpha;
    let scale = sensing_scale(p, rate);
    let arc = |rho: f64| {
        if r_c <= 0.0 || rho >= 2.0 * r_c {
            2.0 * PI
        } else {
            2.0 * PI - 2.0 * (rho / (2.0 * r_c)).acos()
        }
    };
    let f = |rho: f64| rho * arc(rho) * (-rate * rho.powf(alpha)).exp();
    Ok(integrate_radial(f, 0.0, &[2.0 * r_c, scale, 4.0 * scale], quad)?.value)
}

/// Medium-access probability conditioned on the link distance:
/// `(1 - e^-K_c) / K_c * e^-K_r`.
pub fn access_given_link(p: &SystemParams, r_c: f64, quad: &QuadratureSpec) -> Result<f64> {
    let (k_r, k_c) = exclusion_integrals(p, r_c, quad)?;
    Ok(contention_factor(k_c) * (-k_r).exp())
}

/// Medium-access probability `q_w`, averaged over the link-distance density.
///
/// The outer integral runs over `u = pi lambda_c r^2`, which turns the
/// link-distance density into `e^-u du`.
pub fn medium_access_probability(p: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let lambda_c = p.intensities().lambda_c;
    if lambda_c <= 0.0 {
        // No contenders and the link distance diverges: nothing blocks.
        return Ok(1.0);
    }
    let inner = quad.tighter(1e-2);
    let failure = std::cell::RefCell::new(None);
    let f = |u: f64| {
        let r_c = (u / (PI * lambda_c)).sqrt();
        match access_given_link(p, r_c, &inner) {
            Ok(v) => v * (-u).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let out = integrate(f, 0.0, LINK_TAIL_CUTOFF, quad)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(out.value.clamp(0.0, 1.0))
}
