use super::access::MediumAccessOutcome;
use super::rng::{pair_exp, pair_unit, Purpose};
use super::snapshot::{Node, Snapshot};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Small-scale fading applied to the signal and interference links.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FadingMode {
    /// Independent exponential power gains with rate `mu`.
    #[default]
    Rayleigh,
    /// Every gain fixed to 1, for debugging against hand computations.
    Pinned,
}

/// Active transmitters of a snapshot, gathered once and reused for every
/// receiver.
pub(crate) struct SinrField<'a> {
    s: &'a Snapshot,
    p: &'a SystemParams,
    fading: FadingMode,
    comm_tx: Vec<&'a Node>,
    radars: Vec<&'a Node>,
}

impl<'a> SinrField<'a> {
    pub fn new(s: &'a Snapshot, access: &[MediumAccessOutcome], p: &'a SystemParams, fading: FadingMode) -> Self {
        let comm_tx = access.iter().filter(|o| o.e).map(|o| &s.nodes[o.node_index]).collect();
        let radars = s.nodes.iter().filter(|n| n.is_emitting_radar()).collect();
        Self {
            s,
            p,
            fading,
            comm_tx,
            radars,
        }
    }

    fn gain(&self, purpose: Purpose, from: u32, to: u32) -> f64 {
        match self.fading {
            FadingMode::Rayleigh => pair_exp(self.s.seed, purpose, from as u64, to as u64, self.p.mu),
            FadingMode::Pinned => 1.0,
        }
    }

    /// SINR at the receiver of `node`, which must be a transmitting comm node.
    pub fn sinr(&self, node: &Node) -> f64 {
        let rx = node.rx_position().expect("communication node");
        let pl = self.p.path_loss();
        let p_tx = self.p.p_tx_w();
        let power = |from: (f64, f64)| p_tx / pl.eval((from.0 - rx.0).hypot(from.1 - rx.1));
        let signal = power(node.position) * self.gain(Purpose::SignalFade, node.id, node.id);
        let beam = self.p.beam_fraction();
        let mut interference = 0.0;
        for r in &self.radars {
            if beam >= 1.0 || pair_unit(self.s.seed, Purpose::AlignRx, r.id as u64, node.id as u64) < beam {
                interference += power(r.position) * self.gain(Purpose::InterferenceFade, r.id, node.id);
            }
        }
        for c in &self.comm_tx {
            if c.id != node.id {
                interference += power(c.position) * self.gain(Purpose::InterferenceFade, c.id, node.id);
            }
        }
        let denom = interference + self.p.noise_w();
        if denom == 0.0 {
            return f64::INFINITY;
        }
        signal / denom
    }
}

/// Linear SINR at the receiver of `s.nodes[node_index]`. Pair draws are keyed
/// by the snapshot seed, so repeated calls agree.
pub fn compute_sinr(
    s: &Snapshot,
    access: &[MediumAccessOutcome],
    node_index: usize,
    p: &SystemParams,
    fading: FadingMode,
) -> Result<f64> {
    let transmitting = access.iter().any(|o| o.node_index == node_index && o.e);
    if !transmitting {
        return Err(Error::Domain(format!("node {node_index} is not a transmitting communication node")));
    }
    Ok(SinrField::new(s, access, p, fading).sinr(&s.nodes[node_index]))
}
