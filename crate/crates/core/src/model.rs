//! Parameter records, unit conversions and the path-loss model shared by the
//! analytic evaluator and the simulator.
//!
//! Powers are carried in dBm at the edges (configuration, reports) and
//! converted to linear watts before they enter any expression. The
//! communication channel uses the power-law path loss `l(d) = L0 * d^alpha`
//! with the free-space reference `L0 = (4 pi f_c / c)^2` at 1 m; the radar
//! channel always decays as `d^-4`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{invalid, Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Path-loss exponent of the two-way radar channel.
pub const RADAR_PATH_LOSS_EXPONENT: f64 = 4.0;

/// Converts a power in dBm to watts.
pub fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts a power in watts to dBm. Non-positive powers map to `-inf`.
pub fn watt_to_dbm(watt: f64) -> f64 {
    10.0 * watt.log10() + 30.0
}

/// Converts a ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Rectangular deployment area, anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    /// Extent along x (m).
    pub width: f64,
    /// Extent along y (m).
    pub height: f64,
}

impl Window {
    pub const fn new(width: f64, height: f64) -> Self {
        Self { width, height }
    }

    pub const fn square(side: f64) -> Self {
        Self::new(side, side)
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Shrinks the window by `margin` on every side. Returns `None` when
    /// nothing is left.
    pub fn inset(&self, margin: f64) -> Option<Window> {
        let w = self.width - 2.0 * margin;
        let h = self.height - 2.0 * margin;
        (w > 0.0 && h > 0.0).then(|| Window::new(w, h))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl std::str::FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (w, h) = s
            .trim()
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected `<width>x<height>`, got `{s}`"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad window extent `{v}`: {e}"))
        };
        Ok(Window::new(parse(w)?, parse(h)?))
    }
}

/// Every scalar of the network model.
///
/// `Default` gives the reference deployment: 100 slots per cycle of which 25
/// are radar slots, 23 dBm transmit power, 10 m^2 RCS, 10% target false-alarm
/// rate, 5 dB SINR threshold, -62 dBm sensing threshold, path-loss exponent 3,
/// 6 GHz carrier, 20 m links and a 150 m x 150 m window. Radars are
/// omni-directional with a full duty cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Node intensity (nodes/m^2).
    pub lambda: f64,
    /// Fraction of nodes in radar mode.
    pub tau: f64,
    /// Slots per cycle.
    pub total_slots: u32,
    /// Radar slots per cycle (one pulse slot plus the echo-wait slots).
    pub radar_slots: u32,
    /// Radar duty cycle.
    pub eta: f64,
    /// Radar beam width (rad).
    pub phi: f64,
    /// Transmit power (dBm).
    pub p_tx_dbm: f64,
    /// Carrier frequency (Hz).
    pub f_c: f64,
    /// Radar cross-section of the target (m^2).
    pub sigma_rcs: f64,
    /// Target false-alarm probability.
    pub p_fa: f64,
    /// SINR decoding threshold (dB).
    pub t_db: f64,
    /// Carrier-sense and radar detection threshold (dBm).
    pub p_th_dbm: f64,
    /// Communication path-loss exponent.
    pub alpha: f64,
    /// Transmitter to receiver distance (m).
    pub r_c: f64,
    /// Noise power (dBm).
    pub noise_dbm: f64,
    /// Rayleigh fading rate; received power gains are Exp(mu).
    pub mu: f64,
    /// Simulation extent.
    pub window: Window,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            lambda: 1e-2,
            tau: 0.25,
            total_slots: 100,
            radar_slots: 25,
            eta: 1.0,
            phi: 2.0 * PI,
            p_tx_dbm: 23.0,
            f_c: 6e9,
            sigma_rcs: 10.0,
            p_fa: 0.1,
            t_db: 5.0,
            p_th_dbm: -62.0,
            alpha: 3.0,
            r_c: 20.0,
            noise_dbm: -94.0,
            mu: 1.0,
            window: Window::square(150.0),
        }
    }
}

impl SystemParams {
    /// The two deployment windows used for every reference experiment.
    pub const REFERENCE_WINDOWS: [Window; 2] = [Window::square(150.0), Window::square(200.0)];

    /// Fraction of slots dedicated to radar, `M_r / M`.
    pub fn epsilon(&self) -> f64 {
        self.radar_slots as f64 / self.total_slots as f64
    }

    /// Sets `radar_slots` to `round(epsilon * M)`.
    pub fn set_epsilon(&mut self, epsilon: f64) {
        self.radar_slots = (epsilon * self.total_slots as f64).round() as u32;
    }

    pub fn p_tx_w(&self) -> f64 {
        dbm_to_watt(self.p_tx_dbm)
    }

    pub fn p_th_w(&self) -> f64 {
        dbm_to_watt(self.p_th_dbm)
    }

    pub fn noise_w(&self) -> f64 {
        dbm_to_watt(self.noise_dbm)
    }

    /// SINR threshold in linear scale.
    pub fn t_linear(&self) -> f64 {
        db_to_linear(self.t_db)
    }

    /// Main-beam antenna gain `4 pi / phi^2`.
    pub fn antenna_gain(&self) -> f64 {
        4.0 * PI / (self.phi * self.phi)
    }

    /// Probability that a randomly oriented radar beam covers a given node.
    pub fn beam_fraction(&self) -> f64 {
        (self.phi / (2.0 * PI)).min(1.0)
    }

    /// Communication-channel path loss for these parameters.
    pub fn path_loss(&self) -> PathLossModel {
        PathLossModel::free_space(self.f_c, self.alpha)
    }

    pub fn intensities(&self) -> DerivedIntensities {
        derive_intensities(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(invalid("lambda", format!("must be >= 0, got {}", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(invalid("tau", format!("must lie in [0, 1], got {}", self.tau)));
        }
        if self.radar_slots == 0 || self.radar_slots >= self.total_slots {
            return Err(invalid(
                "M_r",
                format!(
                    "need 0 < M_r < M, got M_r = {} and M = {}",
                    self.radar_slots, self.total_slots
                ),
            ));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(invalid("eta", format!("must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.phi > 0.0 && self.phi <= 2.0 * PI + 1e-12) {
            return Err(invalid("phi", format!("must lie in (0, 2pi], got {}", self.phi)));
        }
        if !(self.p_fa > 0.0 && self.p_fa < 1.0) {
            return Err(invalid("P_fa", format!("must lie in (0, 1), got {}", self.p_fa)));
        }
        if !(self.alpha.is_finite() && self.alpha > 2.0) {
            return Err(invalid("alpha", format!("must be > 2, got {}", self.alpha)));
        }
        finite_pos("r_c", self.r_c)?;
        finite_pos("f_c", self.f_c)?;
        finite_pos("mu", self.mu)?;
        finite_pos("window", self.window.width)?;
        finite_pos("window", self.window.height)?;
        if !(self.sigma_rcs.is_finite() && self.sigma_rcs >= 0.0) {
            return Err(invalid("sigma_rcs", format!("must be >= 0, got {}", self.sigma_rcs)));
        }
        for (name, v) in [
            ("P_tx_dbm", self.p_tx_dbm),
            ("T_db", self.t_db),
            ("noise_dbm", self.noise_dbm),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        // +inf disables carrier sensing and is allowed.
        if self.p_th_dbm.is_nan() {
            return Err(invalid("P_th_dbm", "must not be NaN"));
        }
        Ok(())
    }
}

/// Intensities of the independently thinned sub-processes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedIntensities {
    /// Radar-mode nodes, `tau * lambda`.
    pub lambda_r: f64,
    /// Communication-mode nodes, `(1 - tau) * lambda`.
    pub lambda_c: f64,
    /// Radar nodes whose main beam covers a given point, `(phi / 2pi) * lambda_r`.
    pub lambda_r_prime: f64,
    /// Radar nodes emitting at a given instant, `eta * lambda_r`.
    pub lambda_r_active: f64,
}

pub fn derive_intensities(p: &SystemParams) -> DerivedIntensities {
    let lambda_r = p.tau * p.lambda;
    let lambda_c = p.lambda - lambda_r;
    DerivedIntensities {
        lambda_r,
        lambda_c,
        lambda_r_prime: p.beam_fraction() * lambda_r,
        lambda_r_active: p.eta * lambda_r,
    }
}

/// Linear-scale power-law path loss `l(d) = L0 * d^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    /// Attenuation at 1 m.
    pub l0: f64,
    pub alpha: f64,
}

impl PathLossModel {
    /// Free-space reference at 1 m, `L0 = (4 pi f_c / c)^2`.
    pub fn free_space(f_c: f64, alpha: f64) -> Self {
        let k = 4.0 * PI * f_c / SPEED_OF_LIGHT;
        Self { l0: k * k, alpha }
    }

    /// Unchecked evaluation for hot loops; `d` must be positive.
    #[inline]
    pub fn eval(&self, d: f64) -> f64 {
        self.l0 * d.powf(self.alpha)
    }

    /// Distance at which the attenuation equals `loss`.
    pub fn inverse(&self, loss: f64) -> f64 {
        (loss / self.l0).powf(1.0 / self.alpha)
    }
}

pub fn path_loss_linear(model: &PathLossModel, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("path loss needs d > 0, got {d}")));
    }
    Ok(model.eval(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn dbm_anchors() {
        assert_eq!(dbm_to_watt(0.0), 0.001);
        assert_eq!(dbm_to_watt(30.0), 1.0);
        // 10^(-0.7), evaluated independently to 16 digits.
        assert!(rel(dbm_to_watt(23.0), 0.199_526_231_496_887_9) < 1e-14);
    }

    #[test]
    fn free_space_reference() {
        let pl = PathLossModel::free_space(6e9, 3.0);
        // (4 pi 6e9 / 299792458)^2 = 63252.955526970...
        assert!(rel(pl.l0, 63_252.955_526_97) < 1e-10);
        assert_eq!(path_loss_linear(&pl, 1.0).unwrap(), pl.l0);
        assert!(rel(path_loss_linear(&pl, 20.0).unwrap(), 63_252.955_526_97 * 8000.0) < 1e-10);
        let ratio = pl.eval(2.0) / pl.eval(1.0);
        assert!((ratio - 8.0).abs() < 1e-12);
    }

    #[test]
    fn path_loss_rejects_non_positive_distance() {
        let pl = PathLossModel::free_space(6e9, 3.0);
        assert!(matches!(path_loss_linear(&pl, 0.0), Err(Error::Domain(_))));
        assert!(path_loss_linear(&pl, -1.0).is_err());
        assert!(path_loss_linear(&pl, f64::NAN).is_err());
    }

    #[test]
    fn thinning_examples() {
        let p = SystemParams {
            lambda: 0.4,
            tau: 0.25,
            ..Default::default()
        };
        let d = derive_intensities(&p);
        assert!((d.lambda_r - 0.1).abs() < 1e-15);
        assert!((d.lambda_c - 0.3).abs() < 1e-15);
        assert_eq!(d.lambda_r_prime, d.lambda_r);

        let narrow = SystemParams { phi: PI / 2.0, ..p.clone() };
        assert!((narrow.intensities().lambda_r_prime - 0.025).abs() < 1e-15);

        let quiet = SystemParams { eta: 1e-12, ..p };
        assert!(quiet.intensities().lambda_r_active < 1e-12);
    }

    #[test]
    fn defaults_are_valid() {
        let p = SystemParams::default();
        p.validate().unwrap();
        assert_eq!(p.epsilon(), 0.25);
        assert_eq!(p.total_slots, 100);
        assert_eq!(p.p_fa, 0.1);
        assert!((p.antenna_gain() - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn validation_names_the_field() {
        let cases: Vec<(SystemParams, &str)> = vec![
            (SystemParams { tau: 1.5, ..Default::default() }, "tau"),
            (SystemParams { radar_slots: 100, ..Default::default() }, "M_r"),
            (SystemParams { radar_slots: 0, ..Default::default() }, "M_r"),
            (SystemParams { eta: 0.0, ..Default::default() }, "eta"),
            (SystemParams { p_fa: 1.0, ..Default::default() }, "P_fa"),
            (SystemParams { alpha: 2.0, ..Default::default() }, "alpha"),
            (SystemParams { r_c: 0.0, ..Default::default() }, "r_c"),
            (SystemParams { phi: 7.0, ..Default::default() }, "phi"),
        ];
        for (p, field) in cases {
            match p.validate() {
                Err(Error::InvalidParam { name, .. }) => assert_eq!(name, field),
                other => panic!("expected invalid {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn window_parsing() {
        let w: Window = "150x200".parse().unwrap();
        assert_eq!(w, Window::new(150.0, 200.0));
        assert_eq!(w.to_string(), "150x200");
        assert_eq!(Window::square(150.0).inset(20.0), Some(Window::square(110.0)));
        assert_eq!(Window::square(30.0).inset(20.0), None);
        assert!("150".parse::<Window>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn intensities_partition_lambda(lambda in 0.0..2.0f64, tau in 0.0..=1.0f64, eta in 1e-3..=1.0f64) {
                let p = SystemParams { lambda, tau, eta, ..Default::default() };
                let d = derive_intensities(&p);
                prop_assert!((d.lambda_r + d.lambda_c - lambda).abs() <= 1e-15 * lambda.max(1.0));
                prop_assert!(d.lambda_r_prime <= d.lambda_r);
                prop_assert!(d.lambda_r_active <= d.lambda_r);
            }

            #[test]
            fn path_loss_homogeneous(d in 1e-3..1e4f64, k in 1e-2..1e2f64, alpha in 2.01..6.0f64) {
                let pl = PathLossModel::free_space(6e9, alpha);
                let lhs = pl.eval(k * d);
                let rhs = k.powf(alpha) * pl.eval(d);
                prop_assert!(((lhs - rhs) / rhs).abs() < 1e-12);
                prop_assert!(pl.eval(d * (1.0 + 1e-9)) > pl.eval(d));
            }

            #[test]
            fn dbm_roundtrip(w in 1e-18..1e6f64) {
                prop_assert!((dbm_to_watt(watt_to_dbm(w)) - w).abs() / w < 1e-12);
            }
        }
    }
}
