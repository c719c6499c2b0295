use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::rng::{stream, Purpose};
use crate::model::{SystemParams, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Radar,
    Comm,
}

/// Mode-specific state of a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Role {
    Radar {
        /// Whether the pulse is emitted in this snapshot (probability `eta`).
        duty_active: bool,
        /// Slot of the pulse within the `M`-slot cycle.
        cycle_offset: u32,
    },
    Comm {
        /// Back-off mark in `[0, 1]`; the locally smallest mark transmits.
        mark: f64,
        rx_position: (f64, f64),
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: u32,
    pub position: (f64, f64),
    pub role: Role,
}

impl Node {
    pub fn radar(id: u32, position: (f64, f64), duty_active: bool, cycle_offset: u32) -> Self {
        Self {
            id,
            position,
            role: Role::Radar {
                duty_active,
                cycle_offset,
            },
        }
    }

    /// Communication node with its receiver at `r_c` in direction `angle`.
    pub fn comm(id: u32, position: (f64, f64), mark: f64, r_c: f64, angle: f64) -> Self {
        let rx_position = (position.0 + r_c * angle.cos(), position.1 + r_c * angle.sin());
        Self {
            id,
            position,
            role: Role::Comm { mark, rx_position },
        }
    }

    pub fn mode(&self) -> Mode {
        match self.role {
            Role::Radar { .. } => Mode::Radar,
            Role::Comm { .. } => Mode::Comm,
        }
    }

    pub fn mark(&self) -> Option<f64> {
        match self.role {
            Role::Comm { mark, .. } => Some(mark),
            Role::Radar { .. } => None,
        }
    }

    pub fn rx_position(&self) -> Option<(f64, f64)> {
        match self.role {
            Role::Comm { rx_position, .. } => Some(rx_position),
            Role::Radar { .. } => None,
        }
    }

    /// Duty-active radar.
    pub fn is_emitting_radar(&self) -> bool {
        matches!(self.role, Role::Radar { duty_active: true, .. })
    }
}

/// One realisation of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub window: Window,
    pub nodes: Vec<Node>,
    pub seed: u64,
    /// `(n_radar, n_comm)`.
    pub realized_counts: (usize, usize),
}

impl Snapshot {
    /// Builds a snapshot from explicit nodes. Node ids must be unique; `seed`
    /// keys the per-pair draws (beam alignment, fading).
    pub fn from_nodes(window: Window, nodes: Vec<Node>, seed: u64) -> Self {
        let n_radar = nodes.iter().filter(|n| n.mode() == Mode::Radar).count();
        let realized_counts = (n_radar, nodes.len() - n_radar);
        Self {
            window,
            nodes,
            seed,
            realized_counts,
        }
    }

    /// Copy with only the nodes accepted by `keep`; ids and pair draws are
    /// preserved.
    pub fn filtered(&self, keep: impl Fn(&Node) -> bool) -> Self {
        Self::from_nodes(self.window, self.nodes.iter().copied().filter(|n| keep(n)).collect(), self.seed)
    }
}

/// Samples a snapshot in `p.window`. Every attribute family comes from its
/// own stream, so the geometry does not change when, say, `eta` does.
pub fn sample_snapshot(p: &SystemParams, seed: u64) -> Snapshot {
    let window = p.window;
    let mean = p.lambda * window.area();
    let count = if mean > 0.0 {
        let mut rng = stream(seed, Purpose::Count);
        Poisson::new(mean).map(|d| d.sample(&mut rng) as usize).unwrap_or(0)
    } else {
        0
    };
    let mut pos_rng = stream(seed, Purpose::Position);
    let mut mode_rng = stream(seed, Purpose::Mode);
    let mut mark_rng = stream(seed, Purpose::Mark);
    let mut duty_rng = stream(seed, Purpose::Duty);
    let mut offset_rng = stream(seed, Purpose::Offset);
    let mut angle_rng = stream(seed, Purpose::RxAngle);
    let nodes = (0..count)
        .map(|i| {
            let position = (
                pos_rng.random::<f64>() * window.width,
                pos_rng.random::<f64>() * window.height,
            );
            let id = i as u32;
            // Each node consumes one draw from every attribute stream whatever
            // its mode, keeping node i's attributes independent of the others.
            let is_radar = mode_rng.random::<f64>() < p.tau;
            let mark: f64 = mark_rng.random();
            let duty = duty_rng.random::<f64>() < p.eta;
            let offset = offset_rng.random_range(0..p.total_slots);
            let angle = angle_rng.random::<f64>() * 2.0 * PI;
            if is_radar {
                Node::radar(id, position, duty, offset)
            } else {
                Node::comm(id, position, mark, p.r_c, angle)
            }
        })
        .collect();
    Snapshot::from_nodes(window, nodes, seed)
}
