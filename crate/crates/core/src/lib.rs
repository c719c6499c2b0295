//! Analytic and Monte-Carlo models of CSMA-based joint communication and
//! sensing (JCAS) networks.
//!
//! Nodes form a planar Poisson point process and each one is, at a random
//! snapshot, either a monostatic radar or a communication transmitter with a
//! dedicated receiver. Communication nodes contend for the channel with
//! carrier sensing and random back-off marks; radars transmit with a duty
//! cycle and never sense. Two engines evaluate the same metrics:
//!
//! * [`analytic`] evaluates the closed-form expressions for the medium-access
//!   probability `q_w`, the success probability `P_s`, the throughput density
//!   and the maximum unambiguous radar range.
//! * [`simulator`] samples network snapshots and estimates the same metrics
//!   with standard errors.
//!
//! [`experiments`] drives seeded parameter sweeps over both engines and
//! writes CSV.
//!
//! ```
//! use jcas_core::analytic::{analytic_report, H1Strategy, QuadratureSpec};
//! use jcas_core::model::SystemParams;
//!
//! let p = SystemParams { lambda: 1e-3, ..Default::default() };
//! let report = analytic_report(&p, &H1Strategy::Independent, &QuadratureSpec::default()).unwrap();
//! assert!(report.q_w > 0.0 && report.q_w < 1.0);
//! ```

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod model;
pub mod quadrature;
pub mod simulator;

pub use error::{Error, Result};
pub use model::SystemParams;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/analytic.md")]
    mod analytic {}
    #[doc = include_str!("../../../book/src/simulator.md")]
    mod simulator {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
