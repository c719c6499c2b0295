//! Monte-Carlo engine.
//!
//! A replication samples a [`Snapshot`] (Poisson node count, uniform
//! positions, independent mode thinning), resolves carrier-sense contention,
//! draws Rayleigh fades and evaluates SINR at every receiver. Radar metrics
//! come from the slot activity of duty-active radars during each victim's
//! echo-wait window.
//!
//! Replications run in parallel and are merged in replication order, so
//! results depend only on the parameters, the replication count and the
//! master seed.

mod access;
mod dump;
mod estimate;
mod grid;
mod metrics;
mod radar;
mod rng;
mod sinr;
mod snapshot;

pub use access::{resolve_medium_access, BlockedBy, MediumAccessOutcome, SensingModel};
pub use dump::{write_snapshot_csv, SNAPSHOT_CSV_HEADER};
pub use estimate::Estimate;
pub use metrics::{
    detection_probability, empirical_radar_range, estimate_false_alarm, estimate_h1_table, estimate_metrics,
    replication_seed, MetricsEstimate, SimConfig, SlotAccess,
};
pub use radar::{aggregate_radar_interference, RadarField, RadarInterference};
pub use rng::{derive_seed, mix64};
pub use sinr::{compute_sinr, FadingMode};
pub use snapshot::{sample_snapshot, Mode, Node, Role, Snapshot};
