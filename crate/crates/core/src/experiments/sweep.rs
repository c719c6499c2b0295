use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{H1Choice, SweepConfig};
use crate::analytic::{
    collision_factor, max_range_for_collision, medium_access_probability, success_probability, throughput_density,
    H1Strategy, QuadratureSpec,
};
use crate::error::{Error, Result};
use crate::model::{SystemParams, Window};
use crate::simulator::{
    derive_seed, empirical_radar_range, estimate_h1_table, estimate_metrics, replication_seed, resolve_medium_access,
    sample_snapshot, write_snapshot_csv, Estimate, SimConfig,
};

/// Replications used to calibrate an `h1` table at each point.
pub const H1_CALIBRATION_REPS: usize = 500;
/// Bin width (m) and extent (m) of calibrated `h1` tables.
pub const H1_BIN_WIDTH: f64 = 1.0;
pub const H1_EXTENT: f64 = 60.0;

/// One parameter point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub lambda: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub eta: f64,
}

/// Points in output order: `tau`, then `epsilon`, then `eta`, with `lambda`
/// varying fastest.
pub fn sweep_points(cfg: &SweepConfig) -> Vec<SweepPoint> {
    let mut out = Vec::new();
    for &tau in &cfg.tau_list {
        for &epsilon in &cfg.epsilon_list {
            for &eta in &cfg.eta_list {
                for &lambda in &cfg.density_grid {
                    out.push(SweepPoint {
                        index: out.len(),
                        lambda,
                        tau,
                        epsilon,
                        eta,
                    });
                }
            }
        }
    }
    out
}

/// Seed of one (point, window) cell: a 64-bit mix of the master seed, the
/// point index and the window index.
pub fn point_seed(master: u64, point: usize, window: usize) -> u64 {
    derive_seed(master, &[point as u64, window as u64])
}

/// One output record. `window == None` marks the average over all windows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: usize,
    pub lambda: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub window: Option<Window>,
    pub q_w_analytic: Option<f64>,
    pub p_s_analytic: Option<f64>,
    pub tput_analytic: Option<f64>,
    pub d_rm_analytic: Option<f64>,
    pub q_w_sim: Option<Estimate>,
    pub p_s_sim: Option<Estimate>,
    pub tput_sim: Option<Estimate>,
    pub d_rm_sim: Option<Estimate>,
    pub n_reps: usize,
    pub seed: u64,
    pub error: Option<String>,
    /// Not written to CSV, which must be reproducible byte for byte.
    pub wall_ms: f64,
}

impl SweepRow {
    fn empty(pt: &SweepPoint, window: Option<Window>, n_reps: usize, seed: u64) -> Self {
        Self {
            point: pt.index,
            lambda: pt.lambda,
            tau: pt.tau,
            epsilon: pt.epsilon,
            eta: pt.eta,
            window,
            q_w_analytic: None,
            p_s_analytic: None,
            tput_analytic: None,
            d_rm_analytic: None,
            q_w_sim: None,
            p_s_sim: None,
            tput_sim: None,
            d_rm_sim: None,
            n_reps,
            seed,
            error: None,
            wall_ms: 0.0,
        }
    }

    fn note(&mut self, what: &str, e: Error) {
        let msg = format!("{what}: {e}");
        log::warn!("point {} ({:?}): {msg}", self.point, self.window.map(|w| w.to_string()));
        self.error = Some(match self.error.take() {
            Some(prev) => format!("{prev}; {msg}"),
            None => msg,
        });
    }
}

pub(crate) fn sim_config(cfg: &SweepConfig) -> SimConfig {
    SimConfig {
        guard_margin: cfg.guard_margin,
        sensing: cfg.sensing,
        radar_interference: cfg.radar_interference,
        ..SimConfig::default()
    }
}

fn run_analytic(row: &mut SweepRow, p: &SystemParams, strategy: &H1Strategy) {
    let quad = QuadratureSpec::default();
    let q_w = match medium_access_probability(p, &quad) {
        Ok(q) => q,
        Err(e) => return row.note("analytic q_w", e),
    };
    row.q_w_analytic = Some(q_w);
    match collision_factor(p.total_slots, p.radar_slots, q_w).and_then(|c| max_range_for_collision(p, c)) {
        Ok(d) => row.d_rm_analytic = Some(d),
        Err(e) => row.note("analytic d_rm", e),
    }
    match success_probability(p, q_w, strategy, &quad) {
        Ok(ps) => {
            row.p_s_analytic = Some(ps);
            match throughput_density(p, q_w, ps) {
                Ok(t) => row.tput_analytic = Some(t),
                Err(e) => row.note("analytic throughput", e),
            }
        }
        Err(e) => row.note("analytic P_s", e),
    }
}

fn run_cell(cfg: &SweepConfig, pt: &SweepPoint, w_idx: usize) -> SweepRow {
    let start = Instant::now();
    let window = cfg.windows[w_idx];
    let seed = point_seed(cfg.seed, pt.index, w_idx);
    let mut row = SweepRow::empty(pt, Some(window), cfg.n_reps, seed);
    let p = cfg.point_params(pt.lambda, pt.tau, pt.epsilon, pt.eta, window);
    let sim = sim_config(cfg);
    if let Err(e) = p.validate().and_then(|_| sim.validate(&p)) {
        row.note("parameters", e);
        return row;
    }
    if cfg.engines.analytic() {
        let strategy = match cfg.h1_strategy {
            H1Choice::Independent => Ok(H1Strategy::Independent),
            H1Choice::Table => estimate_h1_table(
                &p,
                &sim,
                cfg.n_reps.min(H1_CALIBRATION_REPS),
                derive_seed(seed, &[1]),
                H1_BIN_WIDTH,
                H1_EXTENT,
            )
            .map(H1Strategy::Table),
        };
        match strategy {
            Ok(s) => run_analytic(&mut row, &p, &s),
            Err(e) => row.note("h1 calibration", e),
        }
    }
    if cfg.engines.simulation() {
        match estimate_metrics(&p, &sim, cfg.n_reps, seed) {
            Ok(m) => {
                row.q_w_sim = Some(m.q_w);
                row.p_s_sim = Some(m.p_s);
                row.tput_sim = Some(m.throughput);
            }
            Err(e) => row.note("simulated metrics", e),
        }
        match empirical_radar_range(&p, &sim, cfg.n_reps, seed) {
            Ok(r) => row.d_rm_sim = Some(r),
            Err(e) => row.note("simulated range", e),
        }
    }
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    log::info!(
        "point {} window {} (lambda={:e}, tau={}, epsilon={}, eta={}) done in {:.0} ms",
        pt.index,
        window,
        pt.lambda,
        pt.tau,
        pt.epsilon,
        pt.eta,
        row.wall_ms
    );
    row
}

fn mean_of(values: Vec<Option<f64>>) -> Option<f64> {
    let n = values.len() as f64;
    values.into_iter().sum::<Option<f64>>().map(|s| s / n)
}

fn estimate_mean(values: Vec<Option<Estimate>>) -> Option<Estimate> {
    let all: Option<Vec<Estimate>> = values.into_iter().collect();
    let all = all?;
    let k = all.len() as f64;
    let mean = all.iter().map(|e| e.mean).sum::<f64>() / k;
    let var = all.iter().map(|e| e.stderr * e.stderr).sum::<f64>() / (k * k);
    Some(Estimate::new(mean, var.sqrt(), all.iter().map(|e| e.n).sum()))
}

fn average_row(pt: &SweepPoint, cells: &[SweepRow], master: u64) -> SweepRow {
    let mut row = SweepRow::empty(pt, None, cells[0].n_reps, master);
    macro_rules! avg {
        ($f:ident, $how:ident) => {
            row.$f = $how(cells.iter().map(|c| c.$f).collect());
        };
    }
    avg!(q_w_analytic, mean_of);
    avg!(p_s_analytic, mean_of);
    avg!(tput_analytic, mean_of);
    avg!(d_rm_analytic, mean_of);
    avg!(q_w_sim, estimate_mean);
    avg!(p_s_sim, estimate_mean);
    avg!(tput_sim, estimate_mean);
    avg!(d_rm_sim, estimate_mean);
    let errors: Vec<String> = cells
        .iter()
        .filter_map(|c| c.error.as_ref().map(|e| format!("{}: {e}", c.window.expect("cell row"))))
        .collect();
    row.error = (!errors.is_empty()).then(|| errors.join("; "));
    row.wall_ms = cells.iter().map(|c| c.wall_ms).sum();
    row
}

/// Runs every point in every window. Rows come out grouped by point: one row
/// per window followed, when there is more than one window, by their average.
/// Engine failures are recorded in the row's `error` and the sweep goes on.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let points = sweep_points(cfg);
    let cells: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..cfg.windows.len()).map(move |w| (p, w)))
        .collect();
    let work = || -> Vec<SweepRow> {
        cells
            .par_iter()
            .map(|&(p, w)| run_cell(cfg, &points[p], w))
            .collect()
    };
    let computed = if cfg.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start {} workers: {e}", cfg.workers)))?
            .install(work)
    } else {
        work()
    };
    let per_point = cfg.windows.len();
    let mut rows = Vec::with_capacity(points.len() * (per_point + 1));
    for (pt, chunk) in points.iter().zip(computed.chunks(per_point)) {
        rows.extend_from_slice(chunk);
        if per_point > 1 {
            rows.push(average_row(pt, chunk, cfg.seed));
        }
    }
    Ok(rows)
}

/// Writes the first replication of every (point, window) cell as a snapshot
/// CSV named `point<index>_window<index>.csv` under `dir`. Returns the number
/// of files written.
pub fn dump_snapshots(cfg: &SweepConfig, dir: &Path) -> Result<usize> {
    cfg.validate()?;
    let io_err = |e: std::io::Error| Error::Domain(format!("cannot write snapshots to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let sim = sim_config(cfg);
    let mut written = 0;
    for pt in sweep_points(cfg) {
        for (w_idx, &window) in cfg.windows.iter().enumerate() {
            let p = cfg.point_params(pt.lambda, pt.tau, pt.epsilon, pt.eta, window);
            let s = sample_snapshot(&p, replication_seed(point_seed(cfg.seed, pt.index, w_idx), 0));
            let access = resolve_medium_access(&s, &p, sim.sensing);
            let path = dir.join(format!("point{:04}_window{w_idx}.csv", pt.index));
            let file = BufWriter::new(File::create(&path).map_err(io_err)?);
            write_snapshot_csv(file, &s, &access, &p, sim.fading).map_err(io_err)?;
            written += 1;
        }
    }
    Ok(written)
}
