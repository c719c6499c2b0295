use rayon::prelude::*;

use super::access::{resolve_medium_access, SensingModel};
use super::estimate::Estimate;
use super::grid::Grid;
use super::radar::{exceedance_threshold, pick_victims, RadarField, RadarInterference};
use super::rng::derive_seed;
use super::sinr::{FadingMode, SinrField};
use super::snapshot::{sample_snapshot, Mode, Snapshot};
use crate::analytic::{echo_power, echo_range, medium_access_probability, H1Table, QuadratureSpec};
use crate::error::{invalid, Error, Result};
use crate::model::SystemParams;

/// Source of the per-slot transmission probability of radar nodes during
/// their communication slots.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum SlotAccess {
    /// The analytic medium-access probability at the same parameters.
    #[default]
    Analytic,
    Fixed(f64),
}

/// Simulator settings that are not part of the network model.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Estimators only look at nodes at least this far from the window edge
    /// (m); every node still interferes.
    pub guard_margin: f64,
    pub sensing: SensingModel,
    pub fading: FadingMode,
    pub radar_interference: RadarInterference,
    pub slot_access: SlotAccess,
    /// Victim radars sampled per replication for false-alarm statistics.
    pub max_victims: usize,
    /// Largest range (m) reported by the empirical range; sets the smallest
    /// threshold ever probed.
    pub range_ceiling: f64,
    /// Batches for the standard error of the empirical range.
    pub range_batches: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            guard_margin: 20.0,
            sensing: SensingModel::MeanPower,
            fading: FadingMode::Rayleigh,
            radar_interference: RadarInterference::FullSum,
            slot_access: SlotAccess::Analytic,
            max_victims: 256,
            range_ceiling: 1000.0,
            range_batches: 20,
        }
    }
}

impl SimConfig {
    pub fn validate(&self, p: &SystemParams) -> Result<()> {
        if !(self.guard_margin >= 0.0) || p.window.inset(self.guard_margin).is_none() {
            return Err(invalid("guard_margin", format!("{} leaves no interior in {}", self.guard_margin, p.window)));
        }
        if let SlotAccess::Fixed(q) = self.slot_access {
            if !(0.0..=1.0).contains(&q) {
                return Err(invalid("slot_access", format!("probability {q} outside [0, 1]")));
            }
        }
        if self.max_victims == 0 {
            return Err(invalid("max_victims", "must be >= 1"));
        }
        if !(self.range_ceiling > 0.0 && self.range_ceiling.is_finite()) {
            return Err(invalid("range_ceiling", format!("{} is not a positive length", self.range_ceiling)));
        }
        if self.range_batches == 0 {
            return Err(invalid("range_batches", "must be >= 1"));
        }
        Ok(())
    }

    pub(crate) fn interior(&self, p: &SystemParams) -> impl Fn((f64, f64)) -> bool {
        let g = self.guard_margin;
        let (w, h) = (p.window.width, p.window.height);
        move |(x, y)| x >= g && x <= w - g && y >= g && y <= h - g
    }

    pub(crate) fn slot_probability(&self, p: &SystemParams) -> Result<f64> {
        match self.slot_access {
            SlotAccess::Fixed(q) => Ok(q),
            SlotAccess::Analytic => medium_access_probability(p, &QuadratureSpec::default()),
        }
    }
}

/// Seed of replication `rep` under master seed `seed`.
pub fn replication_seed(seed: u64, rep: usize) -> u64 {
    derive_seed(seed, &[rep as u64])
}

fn check(p: &SystemParams, cfg: &SimConfig, n_reps: usize) -> Result<()> {
    p.validate()?;
    cfg.validate(p)?;
    if n_reps == 0 {
        return Err(invalid("n_reps", "must be >= 1"));
    }
    Ok(())
}

/// Simulated `q_w`, `P_s` and throughput density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsEstimate {
    /// Fraction of interior communication nodes that transmit.
    pub q_w: Estimate,
    /// Fraction of interior transmitters whose receiver sees SINR >= T.
    pub p_s: Estimate,
    /// `(1 - epsilon)` times successful interior transmitters per m^2.
    pub throughput: Estimate,
}

#[derive(Debug, Clone, Copy, Default)]
struct CommCounts {
    nodes: u64,
    transmitting: u64,
    successes: u64,
}

fn comm_counts(s: &Snapshot, p: &SystemParams, cfg: &SimConfig) -> CommCounts {
    let access = resolve_medium_access(s, p, cfg.sensing);
    let field = SinrField::new(s, &access, p, cfg.fading);
    let inside = cfg.interior(p);
    let threshold = p.t_linear();
    let mut c = CommCounts::default();
    for o in &access {
        let node = &s.nodes[o.node_index];
        if !inside(node.position) {
            continue;
        }
        c.nodes += 1;
        if o.e {
            c.transmitting += 1;
            if field.sinr(node) >= threshold {
                c.successes += 1;
            }
        }
    }
    c
}

/// Estimates `q_w`, `P_s` and the throughput density from `n_reps`
/// independent snapshots. `q_w` and `P_s` pool counts over replications
/// (ratio estimators); the throughput averages per-replication densities.
pub fn estimate_metrics(p: &SystemParams, cfg: &SimConfig, n_reps: usize, seed: u64) -> Result<MetricsEstimate> {
    check(p, cfg, n_reps)?;
    let area = p.window.inset(cfg.guard_margin).expect("validated").area();
    let counts: Vec<CommCounts> = (0..n_reps)
        .into_par_iter()
        .map(|rep| comm_counts(&sample_snapshot(p, replication_seed(seed, rep)), p, cfg))
        .collect();
    let q_w: Vec<(f64, f64)> = counts.iter().map(|c| (c.transmitting as f64, c.nodes as f64)).collect();
    let p_s: Vec<(f64, f64)> = counts.iter().map(|c| (c.successes as f64, c.transmitting as f64)).collect();
    let comm_share = 1.0 - p.epsilon();
    let tput: Vec<f64> = counts.iter().map(|c| comm_share * c.successes as f64 / area).collect();
    Ok(MetricsEstimate {
        q_w: Estimate::ratio(&q_w),
        p_s: Estimate::ratio(&p_s),
        throughput: Estimate::from_samples(&tput),
    })
}

/// Per-replication maxima of echo-wait interference at the sampled victims.
fn victim_maxima(p: &SystemParams, cfg: &SimConfig, n_reps: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    check(p, cfg, n_reps)?;
    let q_slot = cfg.slot_probability(p)?;
    Ok((0..n_reps)
        .into_par_iter()
        .map(|rep| {
            let s = sample_snapshot(p, replication_seed(seed, rep));
            let field = RadarField::new(&s, p, q_slot);
            pick_victims(&field, cfg.interior(p), cfg.max_victims)
                .into_iter()
                .map(|v| field.window_max(v, cfg.radar_interference))
                .collect()
        })
        .collect())
}

/// Fraction of interior duty-active radars whose interference exceeds `theta`
/// in at least one echo-wait slot.
pub fn estimate_false_alarm(p: &SystemParams, cfg: &SimConfig, theta: f64, n_reps: usize, seed: u64) -> Result<Estimate> {
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("threshold must be > 0, got {theta}")));
    }
    let maxima = victim_maxima(p, cfg, n_reps, seed)?;
    let pairs: Vec<(f64, f64)> = maxima
        .iter()
        .map(|m| (m.iter().filter(|&&x| x > theta).count() as f64, m.len() as f64))
        .collect();
    Ok(Estimate::ratio(&pairs))
}

fn range_from_maxima(p: &SystemParams, cfg: &SimConfig, mut maxima: Vec<f64>) -> Result<f64> {
    let floor = echo_power(p, cfg.range_ceiling)?;
    let theta = exceedance_threshold(&mut maxima, p.p_fa).unwrap_or(0.0).max(floor);
    if !theta.is_finite() {
        return Err(Error::InfeasibleTarget(
            "interference is unbounded; no threshold meets the false-alarm target".into(),
        ));
    }
    echo_range(p, theta)
}

/// Largest range whose echo clears the threshold `theta*`, where `theta*` is
/// the smallest threshold with empirical false-alarm probability at most
/// `P_fa` (clamped to the echo power at `range_ceiling`). The standard error
/// comes from contiguous batches of replications.
pub fn empirical_radar_range(p: &SystemParams, cfg: &SimConfig, n_reps: usize, seed: u64) -> Result<Estimate> {
    let maxima = victim_maxima(p, cfg, n_reps, seed)?;
    let pooled = range_from_maxima(p, cfg, maxima.concat())?;
    let batches = cfg.range_batches.min(n_reps);
    if batches < 2 {
        return Ok(Estimate::new(pooled, 0.0, n_reps));
    }
    let per_batch = maxima
        .chunks(n_reps.div_ceil(batches))
        .map(|chunk| range_from_maxima(p, cfg, chunk.concat()))
        .collect::<Result<Vec<f64>>>()?;
    let spread = Estimate::from_samples(&per_batch);
    // Batches hold ~1/B of the data, so the pooled error is the batch-mean error.
    Ok(Estimate::new(pooled, spread.stderr, n_reps))
}

/// Fraction of (victim, echo-wait slot) pairs in which a target at range `d`
/// is detected, i.e. echo plus interference exceeds `theta`.
pub fn detection_probability(
    p: &SystemParams,
    cfg: &SimConfig,
    theta: f64,
    d: f64,
    n_reps: usize,
    seed: u64,
) -> Result<Estimate> {
    check(p, cfg, n_reps)?;
    let echo = echo_power(p, d)?;
    let q_slot = cfg.slot_probability(p)?;
    let pairs: Vec<(f64, f64)> = (0..n_reps)
        .into_par_iter()
        .map(|rep| {
            let s = sample_snapshot(p, replication_seed(seed, rep));
            let field = RadarField::new(&s, p, q_slot);
            let mut hits = 0usize;
            let mut total = 0usize;
            for v in pick_victims(&field, cfg.interior(p), cfg.max_victims) {
                for w in field.window(v, cfg.radar_interference) {
                    total += 1;
                    hits += usize::from(echo + w > theta);
                }
            }
            (hits as f64, total as f64)
        })
        .collect();
    Ok(Estimate::ratio(&pairs))
}

/// Calibrates `h1`: for every interior transmitting node `i` and every other
/// communication node `j` within `max_distance`, records whether `j`
/// transmits, binned by their distance.
pub fn estimate_h1_table(
    p: &SystemParams,
    cfg: &SimConfig,
    n_reps: usize,
    seed: u64,
    bin_width: f64,
    max_distance: f64,
) -> Result<H1Table> {
    check(p, cfg, n_reps)?;
    if !(bin_width > 0.0 && max_distance > bin_width) {
        return Err(Error::Domain(format!(
            "need 0 < bin_width < max_distance, got {bin_width} and {max_distance}"
        )));
    }
    let bins = (max_distance / bin_width).ceil() as usize;
    let per_rep: Vec<Vec<(u64, u64)>> = (0..n_reps)
        .into_par_iter()
        .map(|rep| {
            let s = sample_snapshot(p, replication_seed(seed, rep));
            let access = resolve_medium_access(&s, p, cfg.sensing);
            let mut e = vec![false; s.nodes.len()];
            for o in &access {
                e[o.node_index] = o.e;
            }
            let grid = Grid::new(
                s.window.width,
                s.window.height,
                max_distance,
                s.nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| n.mode() == Mode::Comm)
                    .map(|(i, n)| (i as u32, n.position)),
            );
            let inside = cfg.interior(p);
            let mut counts = vec![(0u64, 0u64); bins];
            for o in access.iter().filter(|o| o.e) {
                let a = s.nodes[o.node_index].position;
                if !inside(a) {
                    continue;
                }
                grid.visit_near(a, max_distance, |j| {
                    let j = j as usize;
                    if j != o.node_index {
                        let b = s.nodes[j].position;
                        let bin = ((a.0 - b.0).hypot(a.1 - b.1) / bin_width) as usize;
                        if bin < bins {
                            counts[bin].1 += 1;
                            counts[bin].0 += u64::from(e[j]);
                        }
                    }
                    true
                });
            }
            counts
        })
        .collect();
    let mut total = vec![(0u64, 0u64); bins];
    for counts in &per_rep {
        for (t, c) in total.iter_mut().zip(counts) {
            t.0 += c.0;
            t.1 += c.1;
        }
    }
    Ok(H1Table::from_counts(bin_width, &total))
}
