use super::grid::Grid;
use super::rng::{pair_exp, pair_unit, Purpose};
use super::snapshot::{Mode, Role, Snapshot};
use crate::model::{PathLossModel, SystemParams};

/// Received power compared against `P_th` during carrier sensing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SensingModel {
    /// Mean power `P_tx / l(d)`: a node is sensed iff it lies within the
    /// sensing radius.
    #[default]
    MeanPower,
    /// Power with an independent Rayleigh fade per (sensing node, source)
    /// pair, sensed with probability `exp(-mu P_th l(d) / P_tx)`.
    Faded,
}

/// Why a communication node stayed silent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockedBy {
    Radar,
    CommMark,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MediumAccessOutcome {
    /// Index into `Snapshot::nodes`.
    pub node_index: usize,
    pub e: bool,
    pub blocked_by: BlockedBy,
}

/// Distance beyond which a source is never sensed. For faded sensing the
/// cut-off drops sources with sensing probability below `e^-30`.
pub(crate) fn sensing_cutoff(p: &SystemParams, sensing: SensingModel) -> f64 {
    let ratio = p.p_tx_w() / p.p_th_w();
    if !(ratio > 0.0) {
        return 0.0;
    }
    let radius = p.path_loss().inverse(ratio);
    match sensing {
        SensingModel::MeanPower => radius,
        SensingModel::Faded => radius * (30.0 / p.mu).powf(1.0 / p.alpha),
    }
}

struct Sensor {
    model: SensingModel,
    seed: u64,
    cutoff: f64,
    path_loss: PathLossModel,
    p_tx: f64,
    p_th: f64,
    mu: f64,
}

impl Sensor {
    /// Whether node `listener` senses `source` at distance `d` above `P_th`.
    fn senses(&self, listener: u32, source: u32, d: f64) -> bool {
        if d > self.cutoff {
            return false;
        }
        let mean = self.p_tx / self.path_loss.eval(d);
        match self.model {
            SensingModel::MeanPower => mean > self.p_th,
            SensingModel::Faded => {
                let h = pair_exp(self.seed, Purpose::SenseFade, listener as u64, source as u64, self.mu);
                mean * h > self.p_th
            }
        }
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Resolves CSMA contention: a communication node transmits unless it senses a
/// duty-active radar whose beam points at it (probability `phi / 2 pi` per
/// pair) or a communication node with a smaller mark. Outcomes follow the
/// order of communication nodes in the snapshot.
pub fn resolve_medium_access(s: &Snapshot, p: &SystemParams, sensing: SensingModel) -> Vec<MediumAccessOutcome> {
    let sensor = Sensor {
        model: sensing,
        seed: s.seed,
        cutoff: sensing_cutoff(p, sensing),
        path_loss: p.path_loss(),
        p_tx: p.p_tx_w(),
        p_th: p.p_th_w(),
        mu: p.mu,
    };
    let w = s.window;
    let cell = sensor.cutoff.max(1.0);
    let indexed = |mode: Mode| {
        s.nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.mode() == mode)
            .map(|(i, n)| (i as u32, n.position))
    };
    let radars = Grid::new(w.width, w.height, cell, indexed(Mode::Radar).filter(|&(i, _)| s.nodes[i as usize].is_emitting_radar()));
    let comms = Grid::new(w.width, w.height, cell, indexed(Mode::Comm));
    let beam = p.beam_fraction();

    s.nodes
        .iter()
        .enumerate()
        .filter_map(|(i, node)| {
            let Role::Comm { mark, .. } = node.role else {
                return None;
            };
            let mut blocked_by = BlockedBy::None;
            radars.visit_near(node.position, sensor.cutoff, |j| {
                let r = &s.nodes[j as usize];
                let aligned = beam >= 1.0 || pair_unit(s.seed, Purpose::AlignSense, r.id as u64, node.id as u64) < beam;
                if aligned && sensor.senses(node.id, r.id, dist(node.position, r.position)) {
                    blocked_by = BlockedBy::Radar;
                    return false;
                }
                true
            });
            if blocked_by == BlockedBy::None {
                comms.visit_near(node.position, sensor.cutoff, |j| {
                    let c = &s.nodes[j as usize];
                    let smaller = c.mark().is_some_and(|m| m < mark);
                    if smaller && sensor.senses(node.id, c.id, dist(node.position, c.position)) {
                        blocked_by = BlockedBy::CommMark;
                        return false;
                    }
                    true
                });
            }
            Some(MediumAccessOutcome {
                node_index: i,
                e: blocked_by == BlockedBy::None,
                blocked_by,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::snapshot::{sample_snapshot, Node};
    use super::*;
    use crate::model::Window;

    fn window() -> Window {
        Window::square(100.0)
    }

    #[test]
    fn lone_node_transmits() {
        let s = Snapshot::from_nodes(window(), vec![Node::comm(0, (50.0, 50.0), 0.7, 20.0, 0.0)], 1);
        let out = resolve_medium_access(&s, &SystemParams::default(), SensingModel::MeanPower);
        assert_eq!(out.len(), 1);
        assert!(out[0].e);
        assert_eq!(out[0].blocked_by, BlockedBy::None);
    }

    #[test]
    fn smaller_mark_wins() {
        for model in [SensingModel::MeanPower, SensingModel::Faded] {
            let s = Snapshot::from_nodes(
                window(),
                vec![
                    Node::comm(0, (50.0, 50.0), 0.6, 20.0, 0.0),
                    Node::comm(1, (51.0, 50.0), 0.2, 20.0, 1.0),
                ],
                3,
            );
            let out = resolve_medium_access(&s, &SystemParams::default(), model);
            assert!(!out[0].e && out[1].e);
            assert_eq!(out[0].blocked_by, BlockedBy::CommMark);
        }
    }

    #[test]
    fn nearby_radar_blocks() {
        let p = SystemParams::default();
        let nodes = |duty| {
            vec![
                Node::radar(0, (50.0, 50.0), duty, 0),
                Node::comm(1, (51.0, 50.0), 0.1, 20.0, 0.0),
            ]
        };
        let s = Snapshot::from_nodes(window(), nodes(true), 1);
        let out = resolve_medium_access(&s, &p, SensingModel::MeanPower);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].node_index, 1);
        assert!(!out[0].e);
        assert_eq!(out[0].blocked_by, BlockedBy::Radar);
        // A radar outside its duty cycle is silent.
        let s = Snapshot::from_nodes(window(), nodes(false), 1);
        assert!(resolve_medium_access(&s, &p, SensingModel::MeanPower)[0].e);
    }

    #[test]
    fn mean_power_uses_sensing_radius() {
        let p = SystemParams::default();
        let r_s = sensing_cutoff(&p, SensingModel::MeanPower);
        assert!((r_s - 17.099).abs() < 1e-3, "{r_s}");
        for (gap, blocked) in [(r_s - 0.01, true), (r_s + 0.01, false)] {
            let s = Snapshot::from_nodes(
                window(),
                vec![
                    Node::comm(0, (10.0, 50.0), 0.1, 20.0, 0.0),
                    Node::comm(1, (10.0 + gap, 50.0), 0.9, 20.0, 0.0),
                ],
                1,
            );
            let out = resolve_medium_access(&s, &p, SensingModel::MeanPower);
            assert_eq!(!out[1].e, blocked, "gap {gap}");
        }
    }

    #[test]
    fn deaf_nodes_always_transmit() {
        let p = SystemParams { p_th_dbm: f64::INFINITY, lambda: 0.05, ..Default::default() };
        let s = sample_snapshot(&p, 4);
        assert!(resolve_medium_access(&s, &p, SensingModel::MeanPower).iter().all(|o| o.e));
    }

    /// The node holding the global minimum mark always transmits when radars
    /// are silent, and every silent node has a smaller-marked neighbour in
    /// range.
    #[test]
    fn minimum_mark_transmits() {
        let p = SystemParams { lambda: 0.05, eta: 0.0, ..Default::default() };
        let r_s = sensing_cutoff(&p, SensingModel::MeanPower);
        for seed in 0..20 {
            let s = sample_snapshot(&p, seed);
            let out = resolve_medium_access(&s, &p, SensingModel::MeanPower);
            let min = out
                .iter()
                .min_by(|a, b| s.nodes[a.node_index].mark().partial_cmp(&s.nodes[b.node_index].mark()).unwrap())
                .unwrap();
            assert!(min.e);
            for o in &out {
                let n = &s.nodes[o.node_index];
                let has_blocker = out.iter().any(|q| {
                    let m = &s.nodes[q.node_index];
                    m.mark() < n.mark() && dist(m.position, n.position) < r_s
                });
                assert_eq!(o.e, !has_blocker);
            }
        }
    }
}
