//! Radar-mode interference during the echo-wait window and the empirical
//! detection range.
//!
//! A radar's cycle has `M` slots: the pulse at its `cycle_offset`, then
//! `M_r - 1` echo-wait slots, then `M - M_r` communication slots. Another
//! radar disturbs echo-wait slot `m` when its own pulse or one of its
//! communication transmissions (each slot independently with probability
//! `q_slot`) falls there. Interfering power follows the radar channel,
//! `kappa P_tx G^2 d^-4`.

use rand::seq::index::sample;
use rand::Rng;

use super::rng::{pair_unit, stream, Purpose};
use super::snapshot::{Role, Snapshot};
use crate::analytic::radar_constant;
use crate::model::SystemParams;

/// How the interference at a victim is aggregated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RadarInterference {
    /// Sum over every aligned, active radar.
    #[default]
    FullSum,
    /// Only the nearest aligned, duty-active radar contributes.
    Nearest,
}

/// Slot activity of every duty-active radar in one snapshot.
pub struct RadarField<'a> {
    s: &'a Snapshot,
    total_slots: u32,
    radar_slots: u32,
    words: usize,
    /// Node indices of duty-active radars.
    active: Vec<usize>,
    /// Per active radar, a bitset over absolute slots `0..M`.
    masks: Vec<u64>,
    /// `kappa P_tx G^2`.
    unit_power: f64,
    beam: f64,
}

impl<'a> RadarField<'a> {
    /// `q_slot` is the probability that a radar transmits in each of its
    /// communication slots.
    pub fn new(s: &'a Snapshot, p: &SystemParams, q_slot: f64) -> Self {
        let m = p.total_slots as usize;
        let words = m.div_ceil(64);
        let mut rng = stream(s.seed, Purpose::SlotActivity);
        let mut active = Vec::new();
        let mut masks = Vec::new();
        for (i, n) in s.nodes.iter().enumerate() {
            let Role::Radar {
                duty_active: true,
                cycle_offset,
            } = n.role
            else {
                continue;
            };
            active.push(i);
            let base = masks.len();
            masks.resize(base + words, 0u64);
            let mut set = |slot: usize| masks[base + slot / 64] |= 1 << (slot % 64);
            set(cycle_offset as usize);
            if q_slot > 0.0 {
                for phase in p.radar_slots as usize..m {
                    if rng.random::<f64>() < q_slot {
                        set((cycle_offset as usize + phase) % m);
                    }
                }
            }
        }
        let g = p.antenna_gain();
        Self {
            s,
            total_slots: p.total_slots,
            radar_slots: p.radar_slots,
            words,
            active,
            masks,
            unit_power: radar_constant(p.f_c) * p.p_tx_w() * g * g,
            beam: p.beam_fraction(),
        }
    }

    /// Node indices of the duty-active radars.
    pub fn active_radars(&self) -> &[usize] {
        &self.active
    }

    fn offset(&self, node_index: usize) -> u32 {
        match self.s.nodes[node_index].role {
            Role::Radar { cycle_offset, .. } => cycle_offset,
            Role::Comm { .. } => panic!("node {node_index} is not a radar"),
        }
    }

    fn transmits(&self, k: usize, slot: usize) -> bool {
        self.masks[k * self.words + slot / 64] >> (slot % 64) & 1 == 1
    }

    /// Absolute slot of echo-wait slot `m` (1-based) of `victim`.
    fn absolute(&self, victim: usize, m: u32) -> usize {
        ((self.offset(victim) + m) % self.total_slots) as usize
    }

    /// `(k, power)` for each active radar other than `victim` whose beam
    /// points at it.
    fn aligned(&self, victim: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let v = &self.s.nodes[victim];
        self.active.iter().enumerate().filter_map(move |(k, &j)| {
            let n = &self.s.nodes[j];
            if j == victim
                || (self.beam < 1.0 && pair_unit(self.s.seed, Purpose::AlignRadar, n.id as u64, v.id as u64) >= self.beam)
            {
                return None;
            }
            let d2 = (n.position.0 - v.position.0).powi(2) + (n.position.1 - v.position.1).powi(2);
            Some((k, self.unit_power / (d2 * d2)))
        })
    }

    fn nearest(&self, victim: usize) -> Option<(usize, f64)> {
        self.aligned(victim).max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Interference (W) at `victim` in its echo-wait slot `m`, `1 <= m < M_r`.
    pub fn interference(&self, victim: usize, m: u32, mode: RadarInterference) -> f64 {
        assert!(m >= 1 && m < self.radar_slots, "echo-wait slot {m} outside 1..{}", self.radar_slots);
        let t = self.absolute(victim, m);
        match mode {
            RadarInterference::FullSum => self.aligned(victim).filter(|&(k, _)| self.transmits(k, t)).map(|(_, w)| w).sum(),
            RadarInterference::Nearest => match self.nearest(victim) {
                Some((k, w)) if self.transmits(k, t) => w,
                _ => 0.0,
            },
        }
    }

    /// Interference in each of the `M_r - 1` echo-wait slots of `victim`.
    pub fn window(&self, victim: usize, mode: RadarInterference) -> Vec<f64> {
        let len = self.radar_slots as usize - 1;
        let mut out = vec![0.0; len];
        let mut window_mask = vec![0u64; self.words];
        for m in 1..self.radar_slots {
            let t = self.absolute(victim, m);
            window_mask[t / 64] |= 1 << (t % 64);
        }
        let m_total = self.total_slots as usize;
        let offset = self.offset(victim) as usize;
        let mut add = |k: usize, w: f64| {
            for (i, &wm) in window_mask.iter().enumerate() {
                let mut hits = self.masks[k * self.words + i] & wm;
                while hits != 0 {
                    let t = i * 64 + hits.trailing_zeros() as usize;
                    hits &= hits - 1;
                    out[(t + m_total - offset) % m_total - 1] += w;
                }
            }
        };
        match mode {
            RadarInterference::FullSum => self.aligned(victim).for_each(|(k, w)| add(k, w)),
            RadarInterference::Nearest => {
                if let Some((k, w)) = self.nearest(victim) {
                    add(k, w)
                }
            }
        }
        out
    }

    /// Largest interference over the echo-wait window.
    pub fn window_max(&self, victim: usize, mode: RadarInterference) -> f64 {
        self.window(victim, mode).into_iter().fold(0.0, f64::max)
    }
}

/// Interference (W) at the radar `s.nodes[node_index]` in echo-wait slot
/// `slot` (`1 <= slot < M_r`), with communication slots used with probability
/// `q_slot`.
pub fn aggregate_radar_interference(
    s: &Snapshot,
    p: &SystemParams,
    node_index: usize,
    slot: u32,
    q_slot: f64,
    mode: RadarInterference,
) -> f64 {
    RadarField::new(s, p, q_slot).interference(node_index, slot, mode)
}

/// Up to `cap` duty-active radars inside `interior`, chosen uniformly.
pub(crate) fn pick_victims(field: &RadarField<'_>, interior: impl Fn((f64, f64)) -> bool, cap: usize) -> Vec<usize> {
    let mut eligible: Vec<usize> = field
        .active_radars()
        .iter()
        .copied()
        .filter(|&i| interior(field.s.nodes[i].position))
        .collect();
    if eligible.len() > cap {
        let mut rng = stream(field.s.seed, Purpose::VictimPick);
        let mut chosen: Vec<usize> = sample(&mut rng, eligible.len(), cap).into_iter().map(|i| eligible[i]).collect();
        chosen.sort_unstable();
        eligible = chosen;
    }
    eligible
}

/// Smallest threshold whose exceedance fraction over `maxima` is at most
/// `p_fa`, i.e. the empirical `1 - p_fa` quantile. `None` for no samples.
pub(crate) fn exceedance_threshold(maxima: &mut [f64], p_fa: f64) -> Option<f64> {
    if maxima.is_empty() {
        return None;
    }
    maxima.sort_by(f64::total_cmp);
    let n = maxima.len();
    let allowed = (p_fa * n as f64).floor() as usize;
    if allowed >= n {
        return Some(0.0);
    }
    Some(maxima[n - 1 - allowed])
}
