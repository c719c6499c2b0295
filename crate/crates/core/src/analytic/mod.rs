//! Closed-form performance model of the network.
//!
//! Evaluation order is `q_w -> C -> d_rm`, then `P_s` and the throughput
//! density. The medium-access probability does not depend on the collision
//! factor, so no fixed-point iteration is needed.

mod access;
mod h1;
mod radar;
mod success;

pub use access::{
    access_given_link, contention_factor, exclusion_integrals, medium_access_probability, nn_distance_pdf,
};
pub use h1::{h1_conditional_map, H1Strategy, H1Table};
pub use radar::{
    collision_factor, echo_power, echo_range, max_range_for_collision, radar_constant, radar_max_range,
};
pub use success::{
    comm_interference_area, noise_factor, noise_limited_success, radar_interference_area, success_given_link,
    success_probability,
};

pub use crate::quadrature::QuadratureSpec;

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Mean number of successful transmissions per m^2:
/// `(1 - epsilon) lambda_c q_w P_s`.
pub fn throughput_density(p: &SystemParams, q_w: f64, p_s: f64) -> Result<f64> {
    for (name, v) in [("q_w", q_w), ("P_s", p_s)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    Ok((1.0 - p.epsilon()) * p.intensities().lambda_c * q_w * p_s)
}

/// All analytic metrics for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticReport {
    pub q_w: f64,
    /// Collision factor evaluated at `q_w`.
    pub c: f64,
    /// Maximum unambiguous radar range (m).
    pub d_rm: f64,
    pub p_s: f64,
    /// Successful transmissions per m^2 per snapshot.
    pub throughput: f64,
}

pub fn analytic_report(p: &SystemParams, strategy: &H1Strategy, quad: &QuadratureSpec) -> Result<AnalyticReport> {
    p.validate()?;
    let q_w = medium_access_probability(p, quad)?;
    let c = collision_factor(p.total_slots, p.radar_slots, q_w)?;
    let d_rm = max_range_for_collision(p, c)?;
    let p_s = success_probability(p, q_w, strategy, quad)?;
    let throughput = throughput_density(p, q_w, p_s)?;
    Ok(AnalyticReport {
        q_w,
        c,
        d_rm,
        p_s,
        throughput,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn throughput_examples() {
        let p = SystemParams { lambda: 0.4, tau: 0.25, ..Default::default() };
        let t = throughput_density(&p, 0.5, 0.8).unwrap();
        assert!((t - 0.09).abs() < 1e-15);
        assert_eq!(throughput_density(&p, 0.0, 0.8).unwrap(), 0.0);
        // epsilon -> 1 leaves no communication slots.
        let all_radar = SystemParams { total_slots: 1_000_000, radar_slots: 999_999, ..p.clone() };
        assert!(throughput_density(&all_radar, 1.0, 1.0).unwrap() < 1e-6);
        assert!(throughput_density(&p, 1.2, 0.5).is_err());
    }

    #[test]
    fn sparse_limit() {
        let p = SystemParams { lambda: 1e-9, ..Default::default() };
        let quad = QuadratureSpec::default();
        let r = analytic_report(&p, &H1Strategy::Independent, &quad).unwrap();
        assert!(r.q_w > 1.0 - 1e-6);
        assert!((r.c - 0.99).abs() < 1e-6);
        assert!(r.p_s <= noise_limited_success(&p, &quad).unwrap() + 1e-12);
    }

    #[test]
    fn report_composes_operations() {
        let p = SystemParams::default();
        let quad = QuadratureSpec::default();
        let r = analytic_report(&p, &H1Strategy::Independent, &quad).unwrap();
        assert_eq!(r.q_w, medium_access_probability(&p, &quad).unwrap());
        assert_eq!(r.c, collision_factor(100, 25, r.q_w).unwrap());
        assert_eq!(r.d_rm, radar_max_range(&p, r.q_w).unwrap());
        assert_eq!(r.p_s, success_probability(&p, r.q_w, &H1Strategy::Independent, &quad).unwrap());
        assert_eq!(r.throughput, throughput_density(&p, r.q_w, r.p_s).unwrap());
        for v in [r.q_w, r.p_s, r.c] {
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn infeasible_target_propagates() {
        let p = SystemParams { radar_slots: 2, lambda: 5.0, ..Default::default() };
        let err = analytic_report(&p, &H1Strategy::Independent, &QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::InfeasibleTarget(_)), "{err:?}");
    }
}
