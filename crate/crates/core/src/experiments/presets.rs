use super::config::{log_grid, SweepConfig};
use crate::error::{Error, Result};

pub const PRESET_NAMES: [&str; 4] = ["fig3", "fig4", "fig5", "fig6"];

/// Sweep reproducing one of the reference figures.
///
/// * `fig3`: radar range against density for `epsilon` in {0.25, 0.5, 0.75}
///   at `tau = 0.25`.
/// * `fig4`: throughput against density for `tau` in {0.25, 0.5, 0.75}.
/// * `fig5`: throughput against density for the `fig3` grid of `epsilon`.
/// * `fig6`: duty cycle `eta` from 0.1 to 1 at densities 1e-2, 1e-1 and 1.
///
/// Every preset runs both engines on both reference windows; the CSV carries
/// every metric, so the figures differ only in their grids.
pub fn figure_preset(name: &str) -> Result<SweepConfig> {
    let base = SweepConfig {
        density_grid: log_grid(1e-6, 1.0, 25),
        ..Default::default()
    };
    let cfg = match name {
        "fig3" | "fig5" => SweepConfig {
            tau_list: vec![0.25],
            epsilon_list: vec![0.25, 0.5, 0.75],
            ..base
        },
        "fig4" => SweepConfig {
            tau_list: vec![0.25, 0.5, 0.75],
            ..base
        },
        "fig6" => SweepConfig {
            density_grid: vec![1e-2, 1e-1, 1.0],
            tau_list: vec![0.25],
            eta_list: (1..=10).map(|i| i as f64 / 10.0).collect(),
            ..base
        },
        other => {
            return Err(Error::Domain(format!(
                "unknown preset `{other}`; expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESET_NAMES {
            figure_preset(name).unwrap().validate().unwrap();
        }
        assert!(figure_preset("fig7").is_err());
    }

    #[test]
    fn figure_parameters() {
        let f3 = figure_preset("fig3").unwrap();
        assert_eq!(f3.tau_list, vec![0.25]);
        assert_eq!(f3.epsilon_list, vec![0.25, 0.5, 0.75]);
        assert_eq!(f3.density_grid.len(), 25);
        let f4 = figure_preset("fig4").unwrap();
        assert_eq!(f4.tau_list, vec![0.25, 0.5, 0.75]);
        let f6 = figure_preset("fig6").unwrap();
        assert_eq!(f6.density_grid, vec![1e-2, 1e-1, 1.0]);
        assert_eq!(f6.eta_list.len(), 10);
        assert!(f6.eta_list.iter().all(|&e| e > 0.0 && e <= 1.0));
        assert_eq!(*f6.eta_list.last().unwrap(), 1.0);
    }
}
