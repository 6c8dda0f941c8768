//! Evaluation toolkit: autocorrelation campaigns, BLER waterfalls,
//! Gaussianity statistics, constellation dumps, reference signals and the
//! CSV/JSON report writers.

mod acf;
mod bler;
mod dist;
pub mod report;
mod signals;

pub use acf::{acf, acf_campaign, AcfCampaign, AcfReport, AeSource, GaussianSource, SignalSource};
pub use bler::{bler_campaign, wilson_interval, BlerCurve, BlerCurves, BlerPoint, BLER_CHUNK};
pub use dist::{component_samples, distribution_stats, DistStats};
pub use signals::{constellation_dump, dsss_spread, msequence, msequence_31, qpsk_modulate, DsssSource, QpskSource};
