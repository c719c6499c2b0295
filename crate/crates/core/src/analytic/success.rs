//! Probability of successful reception under Rayleigh fading.
//!
//! For a link of length `r_c` the success probability is the product of a
//! noise factor and the Laplace functionals of the radar and communication
//! interference fields:
//!
//! ```text
//! exp(-mu T l(r_c) N / P_tx)
//!   * exp(-eta lambda_r' int_{R^2}          T l(r_c) / (l(|x|) + T l(r_c)) dx)
//!   * exp(-lambda_c     int_{|x| > r_c} h1 T l(r_c) / (l(|x|) + T l(r_c)) dx)
//! ```
//!
//! and is then averaged over the nearest-neighbour link-distance density.

use std::cell::RefCell;
use std::f64::consts::PI;

use super::access::LINK_TAIL_CUTOFF;
use super::h1::H1Strategy;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::quadrature::{integrate, integrate_pieces, integrate_radial, QuadratureSpec};

/// Interference-free success probability of a link of length `r_c`.
pub fn noise_factor(p: &SystemParams, r_c: f64) -> f64 {
    let l = p.path_loss().eval(r_c);
    (-p.mu * p.t_linear() * l * p.noise_w() / p.p_tx_w()).exp()
}

/// `T l(r_c) / (l(r) + T l(r_c))` rewritten as `1 / (1 + (r / r_c)^alpha / T)`,
/// so the path-loss reference cancels.
fn interference_kernel(alpha: f64, t: f64, r_c: f64) -> impl Fn(f64) -> f64 {
    move |r: f64| 1.0 / (1.0 + (r / r_c).powf(alpha) / t)
}

/// `int_{R^2} T l(r_c) / (l(|x|) + T l(r_c)) dx`.
pub fn radar_interference_area(p: &SystemParams, r_c: f64, quad: &QuadratureSpec) -> Result<f64> {
    let t = p.t_linear();
    let kernel = interference_kernel(p.alpha, t, r_c);
    let knee = t.powf(1.0 / p.alpha) * r_c;
    let f = |r: f64| 2.0 * PI * r * kernel(r);
    Ok(integrate_radial(f, 0.0, &[knee], quad)?.value)
}

/// `int_{|x| > r_c} h1(r_c, x) T l(r_c) / (l(|x|) + T l(r_c)) dx`.
pub fn comm_interference_area(
    p: &SystemParams,
    q_w: f64,
    strategy: &H1Strategy,
    r_c: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let t = p.t_linear();
    let kernel = interference_kernel(p.alpha, t, r_c);
    let knee = t.powf(1.0 / p.alpha) * r_c;
    match strategy {
        H1Strategy::Independent => {
            let f = |r: f64| 2.0 * PI * r * kernel(r);
            Ok(q_w * integrate_radial(f, r_c, &[knee], quad)?.value)
        }
        H1Strategy::Table(table) => {
            // Polar coordinates around the transmitter, so h1 depends only on
            // the outer radius d. Beyond the grid the table is flat, which
            // leaves the boundary value times the plain area plus a finite
            // correction over [0, extent].
            let boundary = table.boundary_value();
            let plain = |r: f64| 2.0 * PI * r * kernel(r);
            let far = boundary * integrate_radial(plain, r_c, &[knee], quad)?.value;
            let inner = quad.tighter(1e-1);
            let failure = RefCell::new(None);
            let ring = |d: f64| -> f64 {
                let excess = table.value_at(d).0 - boundary;
                if excess == 0.0 || d <= 0.0 {
                    return 0.0;
                }
                // |x| > r_c on the circle of radius d iff cos(psi) > -d / (2 r_c).
                let psi_max = if d >= 2.0 * r_c { PI } else { (-d / (2.0 * r_c)).acos() };
                let g = |psi: f64| kernel((r_c * r_c + d * d + 2.0 * r_c * d * psi.cos()).sqrt());
                match integrate(g, 0.0, psi_max, &inner) {
                    Ok(out) => 2.0 * d * excess * out.value,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            };
            let w = table.bin_width();
            let mut cuts: Vec<f64> = (0..table.values().len()).map(|i| (i as f64 + 0.5) * w).collect();
            cuts.push(2.0 * r_c);
            let near = integrate_pieces(ring, 0.0, table.extent(), &cuts, quad)?;
            match failure.into_inner() {
                Some(e) => Err(e),
                None => Ok(far + near.value),
            }
        }
    }
}

/// Success probability for a fixed link distance `r_c`.
pub fn success_given_link(
    p: &SystemParams,
    q_w: f64,
    strategy: &H1Strategy,
    r_c: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(r_c > 0.0) {
        return Err(Error::Domain(format!("link distance must be > 0, got {r_c}")));
    }
    let dens = p.intensities();
    let noise = noise_factor(p, r_c);
    let radar = if dens.lambda_r_active > 0.0 {
        dens.lambda_r_active * p.beam_fraction() * radar_interference_area(p, r_c, quad)?
    } else {
        0.0
    };
    let comm = if dens.lambda_c > 0.0 {
        dens.lambda_c * comm_interference_area(p, q_w, strategy, r_c, quad)?
    } else {
        0.0
    };
    Ok(noise * (-radar).exp() * (-comm).exp())
}

/// Success probability averaged over the link-distance density. With no
/// communication nodes the link distance diverges and the result is 0.
pub fn success_probability(
    p: &SystemParams,
    q_w: f64,
    strategy: &H1Strategy,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate()?;
    if !(0.0..=1.0).contains(&q_w) {
        return Err(Error::Domain(format!("q_w must lie in [0, 1], got {q_w}")));
    }
    let lambda_c = p.intensities().lambda_c;
    if lambda_c <= 0.0 {
        return Ok(0.0);
    }
    let inner = quad.tighter(1e-2);
    let failure = RefCell::new(None);
    let f = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let r_c = (u / (PI * lambda_c)).sqrt();
        match success_given_link(p, q_w, strategy, r_c, &inner) {
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

/// Success probability with interference switched off, averaged over the
/// link-distance density.
pub fn noise_limited_success(p: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    let lambda_c = p.intensities().lambda_c;
    if lambda_c <= 0.0 {
        return Ok(0.0);
    }
    let f = |u: f64| noise_factor(p, (u / (PI * lambda_c)).sqrt()) * (-u).exp();
    Ok(integrate(f, 0.0, LINK_TAIL_CUTOFF, quad)?.value)
}

#[cfg(test)]
mod tests {
    use super::super::h1::H1Table;
    use super::*;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    /// Full-plane radar integral in closed form:
    /// `pi (T^(1/alpha) r_c)^2 * (2 pi / alpha) / sin(2 pi / alpha)`.
    #[test]
    fn radar_area_closed_form() {
        let p = SystemParams::default();
        let t = p.t_linear();
        let delta = 2.0 / p.alpha;
        for r_c in [1.0, 20.0, 150.0] {
            let want = PI * (t.powf(delta) * r_c * r_c) * (PI * delta) / (PI * delta).sin();
            let got = radar_interference_area(&p, r_c, &quad()).unwrap();
            assert!(((got - want) / want).abs() < 1e-8, "r_c={r_c}: {got} vs {want}");
        }
    }

    #[test]
    fn constant_table_equals_independent() {
        let p = SystemParams::default();
        let table = H1Strategy::Table(H1Table::from_values(1.0, vec![0.3; 40]));
        for r_c in [5.0, 20.0] {
            let a = comm_interference_area(&p, 0.3, &H1Strategy::Independent, r_c, &quad()).unwrap();
            let b = comm_interference_area(&p, 0.7, &table, r_c, &quad()).unwrap();
            assert!(((a - b) / a).abs() < 1e-7, "{a} vs {b}");
        }
    }

    /// Same integral in polar coordinates around the receiver, with the
    /// angular average of h1 done on each ring.
    #[test]
    fn table_matches_receiver_polar_form() {
        let p = SystemParams::default();
        let values: Vec<f64> = (0..30).map(|i| if i < 12 { 0.0 } else { 0.5 + 0.01 * i as f64 }).collect();
        let table = H1Table::from_values(1.0, values);
        let strategy = H1Strategy::Table(table.clone());
        let spec = QuadratureSpec { abs_tol: 1e-11, rel_tol: 1e-9, ..quad() };
        for r_c in [4.0, 20.0] {
            let kernel = interference_kernel(p.alpha, p.t_linear(), r_c);
            let ring = |r: f64| {
                let h = |theta: f64| {
                    let d = (r * r + r_c * r_c - 2.0 * r * r_c * theta.cos()).max(0.0).sqrt();
                    table.value_at(d).0
                };
                2.0 * integrate(h, 0.0, PI, &spec).unwrap().value
            };
            let cuts: Vec<f64> = (0..60).map(|i| r_c + i as f64).collect();
            let want = integrate_radial(|r| r * kernel(r) * ring(r), r_c, &cuts, &spec).unwrap().value;
            let got = comm_interference_area(&p, 0.4, &strategy, r_c, &quad()).unwrap();
            assert!(((got - want) / want).abs() < 1e-5, "r_c={r_c}: {got} vs {want}");
        }
    }

    #[test]
    fn zero_threshold_always_succeeds() {
        let p = SystemParams { t_db: -300.0, ..Default::default() };
        let ps = success_probability(&p, 0.5, &H1Strategy::Independent, &quad()).unwrap();
        assert!(ps > 1.0 - 1e-9, "{ps}");
    }

    #[test]
    fn infinite_noise_never_succeeds() {
        let p = SystemParams { noise_dbm: 300.0, ..Default::default() };
        let ps = success_probability(&p, 0.5, &H1Strategy::Independent, &quad()).unwrap();
        assert!(ps < 1e-12, "{ps}");
        let ps = success_given_link(&p, 0.5, &H1Strategy::Independent, 20.0, &quad()).unwrap();
        assert!(ps < 1e-12);
    }

    #[test]
    fn bounded_by_noise_limit() {
        for lambda in [1e-6, 1e-3, 1e-1] {
            let p = SystemParams { lambda, ..Default::default() };
            let ps = success_probability(&p, 0.5, &H1Strategy::Independent, &quad()).unwrap();
            let nl = noise_limited_success(&p, &quad()).unwrap();
            assert!(ps <= nl + 1e-12 && ps > 0.0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = SystemParams::default();
        assert!(success_probability(&p, 1.5, &H1Strategy::Independent, &quad()).is_err());
        assert!(success_given_link(&p, 0.5, &H1Strategy::Independent, 0.0, &quad()).is_err());
    }
}
