//! Dynamic decode-and-forward (DDF) relaying implemented with distributed
//! rotations.
//!
//! The crate is split along the simulation pipeline:
//!
//! * [`channel`]: slow-fading complex Gaussian link draws and SNR units.
//! * [`seeding`]: counter-addressable per-trial random streams.
//! * [`rotations`]: the rotation alphabet and the relay-by-slot schedule.
//! * [`protocol`]: the slot-by-slot DDF engine, its baselines and rate accounting.
//! * [`montecarlo`]: reproducible parallel outage estimation and sweeps.
//! * [`dmt`]: closed-form diversity-multiplexing tradeoff curves.

pub mod channel;
pub mod dmt;
pub mod error;
pub mod montecarlo;
pub mod protocol;
pub mod rotations;
pub mod seeding;

pub use channel::{draw_realization, snr_db_to_linear, ChannelRealization, ComplexGain};
pub use dmt::{
    d1_exponent, d_dest_bound, dmt_curve, dmt_ddf_optimal, dmt_lower_bound_single_relay,
    DmtBoundParams, DmtKind, DmtPoint,
};
pub use error::{Error, Result};
pub use montecarlo::{
    diversity_slope, estimate_outage, estimate_outage_crn, run_sweep, wilson_interval,
    OutageEstimate, SweepGrid, SweepRow,
};
pub use protocol::{
    baseline_miso_trial, equivalent_dest_channel, equivalent_relay_channel, run_trial,
    run_trial_traced, single_relay_listen_time, slot_mutual_info, useful_rate, ProtocolConfig,
    Scheme, SlotRecord, TrialOutcome,
};
pub use rotations::{angle_set, build_schedule, rotation, Ordering, RotationSchedule};
pub use seeding::{derive_seed, trial_rng, TrialRng};
