//! Sweep configuration and its flat `key = value` text form.
//!
//! ```text
//! # comments start with '#'
//! density_grid = 1e-4, 1e-3, 1e-2
//! tau_list = 0.25, 0.5
//! engines = both
//! base.p_th_dbm = -62
//! ```
//!
//! Lists are comma separated. Scalar network parameters live under
//! `base.<name>`; `lambda`, `tau`, `eta`, the radar slot count and the window
//! are swept and only accepted through their lists.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{SystemParams, Window};
use crate::simulator::{RadarInterference, SensingModel};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Engines {
    Analytic,
    Simulation,
    #[default]
    Both,
}

impl Engines {
    pub fn analytic(self) -> bool {
        matches!(self, Engines::Analytic | Engines::Both)
    }

    pub fn simulation(self) -> bool {
        matches!(self, Engines::Simulation | Engines::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            Engines::Analytic => "analytic",
            Engines::Simulation => "sim",
            Engines::Both => "both",
        }
    }
}

impl std::str::FromStr for Engines {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "analytic" => Ok(Engines::Analytic),
            "sim" | "simulation" => Ok(Engines::Simulation),
            "both" => Ok(Engines::Both),
            other => Err(format!("expected analytic, sim or both, got `{other}`")),
        }
    }
}

/// How the analytic engine evaluates `h1` in a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum H1Choice {
    #[default]
    Independent,
    /// Calibrate a table from the simulator at every point and window.
    Table,
}

impl H1Choice {
    pub fn name(self) -> &'static str {
        match self {
            H1Choice::Independent => "independent",
            H1Choice::Table => "table",
        }
    }
}

/// Log-spaced grid of `n` points over `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Values of every parameter that is not swept.
    pub base: SystemParams,
    pub density_grid: Vec<f64>,
    pub tau_list: Vec<f64>,
    pub epsilon_list: Vec<f64>,
    pub eta_list: Vec<f64>,
    /// Replications per point and window.
    pub n_reps: usize,
    pub seed: u64,
    pub engines: Engines,
    pub h1_strategy: H1Choice,
    pub guard_margin: f64,
    pub windows: Vec<Window>,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub sensing: SensingModel,
    pub radar_interference: RadarInterference,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let base = SystemParams::default();
        Self {
            density_grid: log_grid(1e-6, 1.0, 25),
            tau_list: vec![base.tau],
            epsilon_list: vec![base.epsilon()],
            eta_list: vec![base.eta],
            n_reps: 1000,
            seed: 1,
            engines: Engines::Both,
            h1_strategy: H1Choice::Independent,
            guard_margin: 20.0,
            windows: SystemParams::REFERENCE_WINDOWS.to_vec(),
            workers: 0,
            sensing: SensingModel::MeanPower,
            radar_interference: RadarInterference::FullSum,
            base,
        }
    }
}

const BASE_KEYS: [&str; 12] = [
    "total_slots",
    "phi",
    "p_tx_dbm",
    "f_c",
    "sigma_rcs",
    "p_fa",
    "t_db",
    "p_th_dbm",
    "alpha",
    "r_c",
    "noise_dbm",
    "mu",
];

fn parse_err(line: usize, key: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    v.parse::<f64>().map_err(|_| format!("expected a number, got `{v}`"))
}

fn parse_list<T>(v: &str, item: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    let items: Vec<&str> = v.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err("empty list entry".into());
    }
    items.into_iter().map(item).collect()
}

fn in_range(name: &str, v: &[f64], ok: impl Fn(f64) -> bool, range: &str) -> std::result::Result<(), String> {
    match v.iter().find(|&&x| !ok(x)) {
        Some(bad) => Err(format!("{name} value {bad} outside {range}")),
        None => Ok(()),
    }
}

impl SweepConfig {
    /// The parameter record of one sweep point in one window.
    pub fn point_params(&self, lambda: f64, tau: f64, epsilon: f64, eta: f64, window: Window) -> SystemParams {
        let mut p = SystemParams {
            lambda,
            tau,
            eta,
            window,
            ..self.base.clone()
        };
        p.set_epsilon(epsilon);
        p
    }

    /// Checks every list against the parameter invariants. Errors carry line
    /// 0; [`parse_config`] reports the offending line instead.
    pub fn validate(&self) -> Result<()> {
        for key in [
            "density_grid",
            "tau_list",
            "epsilon_list",
            "eta_list",
            "windows",
            "n_reps",
            "guard_margin",
        ] {
            self.check_key(key).map_err(|r| parse_err(0, key, r))?;
        }
        self.base.validate().map_err(|e| parse_err(0, "base", e.to_string()))
    }

    fn check_key(&self, key: &str) -> std::result::Result<(), String> {
        let nonempty = |n: usize| if n == 0 { Err("list must not be empty".to_string()) } else { Ok(()) };
        match key {
            "density_grid" => {
                nonempty(self.density_grid.len())?;
                in_range("lambda", &self.density_grid, |x| x.is_finite() && x >= 0.0, "[0, inf)")
            }
            "tau_list" => {
                nonempty(self.tau_list.len())?;
                in_range("tau", &self.tau_list, |x| (0.0..=1.0).contains(&x), "[0, 1]")
            }
            "eta_list" => {
                nonempty(self.eta_list.len())?;
                in_range("eta", &self.eta_list, |x| x > 0.0 && x <= 1.0, "(0, 1]")
            }
            "epsilon_list" => {
                nonempty(self.epsilon_list.len())?;
                let m = self.base.total_slots as f64;
                in_range("epsilon", &self.epsilon_list, |x| x > 0.0 && x < 1.0, "(0, 1)")?;
                in_range(
                    "epsilon",
                    &self.epsilon_list,
                    |x| {
                        let slots = (x * m).round();
                        (x * m - slots).abs() < 1e-9 && slots >= 1.0 && slots < m
                    },
                    &format!("multiples of 1/{m} strictly between 0 and 1"),
                )
            }
            "windows" => {
                nonempty(self.windows.len())?;
                match self.windows.iter().find(|w| w.inset(self.guard_margin).is_none()) {
                    Some(w) => Err(format!("window {w} has no interior with guard margin {}", self.guard_margin)),
                    None => Ok(()),
                }
            }
            "guard_margin" => {
                if self.guard_margin >= 0.0 && self.guard_margin.is_finite() {
                    self.check_key("windows")
                } else {
                    Err(format!("guard margin {} must be >= 0", self.guard_margin))
                }
            }
            "n_reps" => {
                if self.n_reps == 0 {
                    Err("n_reps must be >= 1".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        if let Some(field) = key.strip_prefix("base.") {
            if !BASE_KEYS.contains(&field) {
                return Err(match field {
                    "lambda" | "tau" | "eta" | "radar_slots" | "window" => {
                        format!("`{field}` is swept; use its list key instead")
                    }
                    _ => "unknown key".into(),
                });
            }
            if field == "total_slots" {
                self.base.total_slots = v.parse().map_err(|_| format!("expected a positive integer, got `{v}`"))?;
                return Ok(());
            }
            let x = parse_f64(v)?;
            let b = &mut self.base;
            match field {
                "phi" => b.phi = x,
                "p_tx_dbm" => b.p_tx_dbm = x,
                "f_c" => b.f_c = x,
                "sigma_rcs" => b.sigma_rcs = x,
                "p_fa" => b.p_fa = x,
                "t_db" => b.t_db = x,
                "p_th_dbm" => b.p_th_dbm = x,
                "alpha" => b.alpha = x,
                "r_c" => b.r_c = x,
                "noise_dbm" => b.noise_dbm = x,
                "mu" => b.mu = x,
                _ => unreachable!(),
            }
            // Only this key changed, so any violation is its fault.
            let mut probe = b.clone();
            probe.set_epsilon(0.5);
            if let Err(e) = probe.validate() {
                return Err(e.to_string());
            }
            return Ok(());
        }
        match key {
            "density_grid" => self.density_grid = parse_list(v, parse_f64)?,
            "tau_list" => self.tau_list = parse_list(v, parse_f64)?,
            "epsilon_list" => self.epsilon_list = parse_list(v, parse_f64)?,
            "eta_list" => self.eta_list = parse_list(v, parse_f64)?,
            "windows" => self.windows = parse_list(v, |w| w.parse::<Window>())?,
            "n_reps" => self.n_reps = v.parse().map_err(|_| format!("expected a positive integer, got `{v}`"))?,
            "seed" => self.seed = v.parse().map_err(|_| format!("expected an unsigned 64-bit integer, got `{v}`"))?,
            "workers" => self.workers = v.parse().map_err(|_| format!("expected a non-negative integer, got `{v}`"))?,
            "guard_margin" => self.guard_margin = parse_f64(v)?,
            "engines" => self.engines = v.parse()?,
            "h1_strategy" => {
                self.h1_strategy = match v {
                    "independent" => H1Choice::Independent,
                    "table" => H1Choice::Table,
                    _ => return Err(format!("expected independent or table, got `{v}`")),
                }
            }
            "sensing" => {
                self.sensing = match v {
                    "mean" => SensingModel::MeanPower,
                    "faded" => SensingModel::Faded,
                    _ => return Err(format!("expected mean or faded, got `{v}`")),
                }
            }
            "radar_interference" => {
                self.radar_interference = match v {
                    "full" => RadarInterference::FullSum,
                    "nearest" => RadarInterference::Nearest,
                    _ => return Err(format!("expected full or nearest, got `{v}`")),
                }
            }
            _ => return Err("unknown key".into()),
        }
        self.check_key(key)
    }

    /// Text form accepted by [`parse_config`]; parsing it yields `self`.
    pub fn to_config_string(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let b = &self.base;
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("density_grid", list(&self.density_grid));
        line("tau_list", list(&self.tau_list));
        line("epsilon_list", list(&self.epsilon_list));
        line("eta_list", list(&self.eta_list));
        line("n_reps", self.n_reps.to_string());
        line("seed", self.seed.to_string());
        line("engines", self.engines.name().into());
        line("h1_strategy", self.h1_strategy.name().into());
        line("guard_margin", format!("{:?}", self.guard_margin));
        line(
            "windows",
            self.windows.iter().map(|w| format!("{:?}x{:?}", w.width, w.height)).collect::<Vec<_>>().join(", "),
        );
        line("workers", self.workers.to_string());
        line(
            "sensing",
            match self.sensing {
                SensingModel::MeanPower => "mean",
                SensingModel::Faded => "faded",
            }
            .into(),
        );
        line(
            "radar_interference",
            match self.radar_interference {
                RadarInterference::FullSum => "full",
                RadarInterference::Nearest => "nearest",
            }
            .into(),
        );
        line("base.total_slots", b.total_slots.to_string());
        for (k, v) in [
            ("phi", b.phi),
            ("p_tx_dbm", b.p_tx_dbm),
            ("f_c", b.f_c),
            ("sigma_rcs", b.sigma_rcs),
            ("p_fa", b.p_fa),
            ("t_db", b.t_db),
            ("p_th_dbm", b.p_th_dbm),
            ("alpha", b.alpha),
            ("r_c", b.r_c),
            ("noise_dbm", b.noise_dbm),
            ("mu", b.mu),
        ] {
            line(&format!("base.{k}"), format!("{v:?}"));
        }
        out
    }
}

/// Parses a configuration document on top of the defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    parse_config_onto(text, SweepConfig::default())
}

/// Parses a configuration document on top of `base`, e.g. a figure preset.
pub fn parse_config_onto(text: &str, base: SweepConfig) -> Result<SweepConfig> {
    let mut cfg = base;
    let mut epsilon_line = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(parse_err(line_no, content, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(parse_err(line_no, key, "missing value"));
        }
        cfg.set(key, value).map_err(|r| parse_err(line_no, key, r))?;
        if key == "epsilon_list" || key == "base.total_slots" {
            epsilon_line = Some((line_no, key.to_string()));
        }
    }
    // The radar slot count depends on both M and the epsilon list.
    if let Err(r) = cfg.check_key("epsilon_list") {
        let (line, key) = epsilon_line.unwrap_or((0, "epsilon_list".into()));
        return Err(parse_err(line, &key, r));
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, SweepConfig::default());
        assert_eq!(cfg.base, SystemParams::default());
        assert_eq!(cfg.density_grid.len(), 25);
        assert_eq!(cfg.density_grid[0], 1e-6);
        assert_eq!(cfg.density_grid[24], 1.0);
        assert_eq!(cfg.n_reps, 1000);
        assert_eq!(cfg.windows, vec![Window::square(150.0), Window::square(200.0)]);
    }

    #[test]
    fn log_grid_spacing() {
        let g = log_grid(1e-6, 1.0, 25);
        for w in g.windows(2) {
            assert!((w[1] / w[0] - 10f64.powf(0.25)).abs() < 1e-12);
        }
        assert_eq!(log_grid(0.5, 2.0, 1), vec![0.5]);
    }

    #[test]
    fn range_error_names_key_and_line() {
        let err = parse_config("# header\n\ntau_list = 1.5\n").unwrap_err();
        match err {
            Error::Parse { line, key, reason } => {
                assert_eq!(line, 3);
                assert_eq!(key, "tau_list");
                assert!(reason.contains("tau"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports_bad_documents() {
        let cases = [
            ("bogus = 1", 1, "bogus"),
            ("n_reps = many", 1, "n_reps"),
            ("seed = 1\nn_reps = 0", 2, "n_reps"),
            ("density_grid = 1e-3,,1e-2", 1, "density_grid"),
            ("eta_list = 0", 1, "eta_list"),
            ("base.p_fa = 1.5", 1, "base.p_fa"),
            ("base.lambda = 0.1", 1, "base.lambda"),
            ("engines = gpu", 1, "engines"),
            ("epsilon_list = 0.333", 1, "epsilon_list"),
            ("no equals sign", 1, "no equals sign"),
            ("guard_margin = 100", 1, "guard_margin"),
        ];
        for (doc, want_line, want_key) in cases {
            match parse_config(doc) {
                Err(Error::Parse { line, key, .. }) => {
                    assert_eq!((line, key.as_str()), (want_line, want_key), "{doc}")
                }
                other => panic!("{doc}: {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_lists() {
        let cfg = parse_config(
            "density_grid = 1e-3, 1e-2 # two points\n\
             windows = 150x150\n\
             base.p_th_dbm = -70\n\
             engines = analytic\n\
             h1_strategy = table\n\
             base.total_slots = 200\n\
             epsilon_list = 0.125, 0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.density_grid, vec![1e-3, 1e-2]);
        assert_eq!(cfg.windows, vec![Window::square(150.0)]);
        assert_eq!(cfg.base.p_th_dbm, -70.0);
        assert_eq!(cfg.engines, Engines::Analytic);
        assert_eq!(cfg.h1_strategy, H1Choice::Table);
        let p = cfg.point_params(1e-3, 0.25, 0.125, 1.0, cfg.windows[0]);
        assert_eq!((p.total_slots, p.radar_slots), (200, 25));
    }

    #[test]
    fn roundtrip() {
        let mut cfg = SweepConfig::default();
        cfg.density_grid = vec![1.0 / 3.0, 0.1 + 0.2];
        cfg.base.p_th_dbm = f64::INFINITY;
        cfg.seed = u64::MAX;
        cfg.sensing = SensingModel::Faded;
        let text = cfg.to_config_string();
        let back = parse_config(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_config_string(), text);
    }
}
