//! Slot-by-slot DDF engine.
//!
//! The source transmits in every slot. Each relay listens, accumulating
//! mutual information, until it holds `T * R` bits at a decoding boundary;
//! from the next slot on it retransmits the source symbol multiplied by its
//! scheduled rotation. Transmit power is shared equally among the source and
//! the active relays, and every receiver sees an equivalent single-antenna
//! channel that changes from slot to slot.

use rand::Rng;

use crate::channel::{draw_realization, ChannelRealization, ComplexGain};
use crate::rotations::{schedule_unchecked, Ordering, RotationSchedule};
use crate::{Error, Result};

/// How active relays combine at a receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheme {
    /// Distributed rotations drawn from the schedule.
    #[default]
    Rotations,
    /// Ideal `j x 1` MISO transmission once `j` relays are active; the
    /// receiver sees the sum of the link powers.
    IdealMiso,
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rotations" => Ok(Scheme::Rotations),
            "miso" | "ideal-miso" => Ok(Scheme::IdealMiso),
            other => Err(format!("unknown scheme `{other}` (expected rotations or miso)")),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Rotations => "rotations",
            Scheme::IdealMiso => "miso",
        })
    }
}

/// Scenario parameters for one outage experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub n_relays: usize,
    pub n_rotations: usize,
    /// Frame length `T` in slots.
    pub frame_len: usize,
    /// Relays may only decode at multiples of this many slots.
    pub block_len: usize,
    /// Target rate in bits per channel use.
    pub rate: f64,
    /// Linear SNR `rho`.
    pub snr_linear: f64,
    pub isolated: bool,
    pub ordering: Ordering,
    pub scheme: Scheme,
}

impl ProtocolConfig {
    /// Config with `B = 1`, connected relays, random ordering and rotations.
    pub fn new(n_relays: usize, n_rotations: usize, frame_len: usize, rate: f64, snr_linear: f64) -> Self {
        Self {
            n_relays,
            n_rotations,
            frame_len,
            block_len: 1,
            rate,
            snr_linear,
            isolated: false,
            ordering: Ordering::Random,
            scheme: Scheme::Rotations,
        }
    }

    pub fn with_block_len(mut self, block_len: usize) -> Self {
        self.block_len = block_len;
        self
    }

    pub fn with_isolated(mut self, isolated: bool) -> Self {
        self.isolated = isolated;
        self
    }

    pub fn with_ordering(mut self, ordering: Ordering) -> Self {
        self.ordering = ordering;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_snr_linear(mut self, snr_linear: f64) -> Self {
        self.snr_linear = snr_linear;
        self
    }

    /// Information the destination must collect over the frame, `T * R` bits.
    pub fn target_bits(&self) -> f64 {
        self.frame_len as f64 * self.rate
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.frame_len == 0 {
            return bad("frame length must be at least 1".into());
        }
        if self.block_len == 0 || self.block_len > self.frame_len {
            return bad(format!(
                "block length {} must lie in 1..={}",
                self.block_len, self.frame_len
            ));
        }
        if !self.frame_len.is_multiple_of(self.block_len) {
            return bad(format!(
                "block length {} does not divide frame length {}",
                self.block_len, self.frame_len
            ));
        }
        if self.n_rotations == 0 {
            return bad("rotation count must be at least 1".into());
        }
        if !(self.rate.is_finite() && self.rate >= 0.0) {
            return bad(format!("rate {} must be finite and non-negative", self.rate));
        }
        if !(self.snr_linear.is_finite() && self.snr_linear > 0.0) {
            return bad(format!("SNR {} must be finite and positive", self.snr_linear));
        }
        Ok(())
    }

    /// Draws the channel and, for the rotation scheme, the schedule of one
    /// trial from `rng`. The channel is always drawn first.
    pub fn draw_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> (ChannelRealization, RotationSchedule) {
        let real = draw_realization(self.n_relays, self.isolated, rng);
        let sched = match self.scheme {
            Scheme::Rotations => {
                schedule_unchecked(self.n_relays, self.n_rotations, self.frame_len, self.ordering, rng)
            }
            Scheme::IdealMiso => schedule_unchecked(0, self.n_rotations, self.frame_len, self.ordering, rng),
        };
        (real, sched)
    }
}

/// Result of one simulated frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// Per relay: slots listened before decoding, or `T` if it never decoded.
    /// A value `v < T` means the relay transmits from slot `v + 1`.
    pub decode_slot: Vec<usize>,
    /// Mutual information accumulated at the destination over the frame.
    pub dest_info_bits: f64,
    /// `dest_info_bits < T * R`.
    pub outage: bool,
}

/// What happened in one slot, for tracing and oracle checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    /// 1-based slot number.
    pub slot: usize,
    /// Source plus active relays.
    pub transmitters: usize,
    /// Power scale applied to each transmitter, `1 / transmitters`.
    pub power_scale: f64,
    /// Effective channel power seen by the destination.
    pub dest_gain_sq: f64,
    pub dest_bits: f64,
}

/// Destination equivalent channel `g0 + sum_k r_kt g_k` over active relays.
/// `slot` is 0-based.
pub fn equivalent_dest_channel(
    real: &ChannelRealization,
    sched: &RotationSchedule,
    active: &[usize],
    slot: usize,
) -> ComplexGain {
    active
        .iter()
        .fold(real.g0, |acc, &k| acc + sched.get(k, slot) * real.g[k])
}

/// Equivalent channel `h_i + sum_k r_kt f_ki` seen by listening relay `i`.
pub fn equivalent_relay_channel(
    real: &ChannelRealization,
    sched: &RotationSchedule,
    active: &[usize],
    relay: usize,
    slot: usize,
) -> Result<ComplexGain> {
    if active.contains(&relay) {
        return Err(Error::RelayTransmitting(relay));
    }
    Ok(relay_channel(real, sched, active, relay, slot))
}

#[inline]
fn relay_channel(
    real: &ChannelRealization,
    sched: &RotationSchedule,
    active: &[usize],
    relay: usize,
    slot: usize,
) -> ComplexGain {
    active
        .iter()
        .fold(real.h[relay], |acc, &k| acc + sched.get(k, slot) * real.f(k, relay))
}

#[inline]
fn info_bits(gain_sq: f64, rho: f64, active: usize) -> f64 {
    (1.0 + rho / (1 + active) as f64 * gain_sq).log2()
}

/// `log2(1 + rho / (1 + j) * |coeff|^2)`.
pub fn slot_mutual_info(coeff: ComplexGain, rho: f64, active: usize) -> f64 {
    info_bits(coeff.norm_sqr(), rho, active)
}

/// Listening time of a lone relay that decodes from the source only,
/// `min(T, ceil(T R / log2(1 + rho |h1|^2)))`.
pub fn single_relay_listen_time(frame_len: usize, rate: f64, rho: f64, h1: ComplexGain) -> usize {
    if rate == 0.0 {
        return 0;
    }
    let per_slot = slot_mutual_info(h1, rho, 0);
    if per_slot <= 0.0 {
        return frame_len;
    }
    let slots = (frame_len as f64 * rate / per_slot).ceil();
    if slots >= frame_len as f64 {
        frame_len
    } else {
        slots as usize
    }
}

fn check_dims(cfg: &ProtocolConfig, real: &ChannelRealization) -> Result<()> {
    cfg.validate()?;
    if real.n_relays() != cfg.n_relays {
        return Err(Error::DimensionMismatch(format!(
            "realization has {} relays, config has {}",
            real.n_relays(),
            cfg.n_relays
        )));
    }
    Ok(())
}

fn check_schedule(cfg: &ProtocolConfig, sched: &RotationSchedule) -> Result<()> {
    if sched.n_relays() != cfg.n_relays || sched.frame_len() != cfg.frame_len {
        return Err(Error::DimensionMismatch(format!(
            "schedule is {}x{}, config needs {}x{}",
            sched.n_relays(),
            sched.frame_len(),
            cfg.n_relays,
            cfg.frame_len
        )));
    }
    Ok(())
}

/// Core loop shared by the rotation scheme and the MISO baseline.
/// `dest_gain(slot, active)` and `relay_gain(relay, slot, active)` return
/// effective channel powers.
fn simulate<D, L>(
    cfg: &ProtocolConfig,
    dest_gain: D,
    relay_gain: L,
    mut trace: Option<&mut Vec<SlotRecord>>,
) -> TrialOutcome
where
    D: Fn(usize, &[usize]) -> f64,
    L: Fn(usize, usize, &[usize]) -> f64,
{
    let n = cfg.n_relays;
    let frame = cfg.frame_len;
    let rho = cfg.snr_linear;
    let target = cfg.target_bits();

    let mut active: Vec<usize> = Vec::with_capacity(n);
    let mut listening: Vec<usize> = (0..n).collect();
    let mut relay_bits = vec![0.0f64; n];
    let mut decode_slot = vec![frame; n];
    let mut dest_bits = 0.0f64;

    // Boundary 0 only matters for R = 0, where no information is needed.
    let mut decode_at = |boundary: usize,
                         listening: &mut Vec<usize>,
                         active: &mut Vec<usize>,
                         relay_bits: &[f64]| {
        listening.retain(|&i| {
            if relay_bits[i] >= target {
                decode_slot[i] = boundary;
                active.push(i);
                false
            } else {
                true
            }
        });
    };
    decode_at(0, &mut listening, &mut active, &relay_bits);

    for slot in 0..frame {
        let j = active.len();
        let g_sq = dest_gain(slot, &active);
        let bits = info_bits(g_sq, rho, j);
        dest_bits += bits;
        for &i in &listening {
            relay_bits[i] += info_bits(relay_gain(i, slot, &active), rho, j);
        }
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(SlotRecord {
                slot: slot + 1,
                transmitters: 1 + j,
                power_scale: 1.0 / (1 + j) as f64,
                dest_gain_sq: g_sq,
                dest_bits: bits,
            });
        }
        let elapsed = slot + 1;
        if elapsed < frame && elapsed % cfg.block_len == 0 && !listening.is_empty() {
            decode_at(elapsed, &mut listening, &mut active, &relay_bits);
        }
    }

    TrialOutcome {
        decode_slot,
        dest_info_bits: dest_bits,
        outage: dest_bits < target,
    }
}

fn rotations_trial(
    cfg: &ProtocolConfig,
    real: &ChannelRealization,
    sched: &RotationSchedule,
    trace: Option<&mut Vec<SlotRecord>>,
) -> TrialOutcome {
    simulate(
        cfg,
        |slot, active| equivalent_dest_channel(real, sched, active, slot).norm_sqr(),
        |i, slot, active| relay_channel(real, sched, active, i, slot).norm_sqr(),
        trace,
    )
}

fn miso_trial(cfg: &ProtocolConfig, real: &ChannelRealization, trace: Option<&mut Vec<SlotRecord>>) -> TrialOutcome {
    simulate(
        cfg,
        |_, active| real.g0.norm_sqr() + active.iter().map(|&k| real.g[k].norm_sqr()).sum::<f64>(),
        |i, _, active| real.h[i].norm_sqr() + active.iter().map(|&k| real.f(k, i).norm_sqr()).sum::<f64>(),
        trace,
    )
}

/// Simulates one frame with distributed rotations.
pub fn run_trial(
    cfg: &ProtocolConfig,
    real: &ChannelRealization,
    sched: &RotationSchedule,
) -> Result<TrialOutcome> {
    check_dims(cfg, real)?;
    check_schedule(cfg, sched)?;
    Ok(rotations_trial(cfg, real, sched, None))
}

/// [`run_trial`] plus a per-slot record of the destination side.
pub fn run_trial_traced(
    cfg: &ProtocolConfig,
    real: &ChannelRealization,
    sched: &RotationSchedule,
) -> Result<(TrialOutcome, Vec<SlotRecord>)> {
    check_dims(cfg, real)?;
    check_schedule(cfg, sched)?;
    let mut trace = Vec::with_capacity(cfg.frame_len);
    let out = rotations_trial(cfg, real, sched, Some(&mut trace));
    Ok((out, trace))
}

/// Same decode dynamics as [`run_trial`] with rotations replaced by ideal
/// MISO combining at every receiver.
pub fn baseline_miso_trial(cfg: &ProtocolConfig, real: &ChannelRealization) -> Result<TrialOutcome> {
    check_dims(cfg, real)?;
    Ok(miso_trial(cfg, real, None))
}

/// Runs the trial with the scheme selected in `cfg`. The schedule is ignored
/// by the MISO baseline.
pub fn simulate_trial(
    cfg: &ProtocolConfig,
    real: &ChannelRealization,
    sched: &RotationSchedule,
) -> Result<TrialOutcome> {
    match cfg.scheme {
        Scheme::Rotations => run_trial(cfg, real, sched),
        Scheme::IdealMiso => baseline_miso_trial(cfg, real),
    }
}

/// Unchecked variant for the Monte Carlo hot loop; inputs come from
/// [`ProtocolConfig::draw_trial`] on a validated config.
pub(crate) fn simulate_trial_unchecked(
    cfg: &ProtocolConfig,
    real: &ChannelRealization,
    sched: &RotationSchedule,
) -> TrialOutcome {
    match cfg.scheme {
        Scheme::Rotations => rotations_trial(cfg, real, sched, None),
        Scheme::IdealMiso => miso_trial(cfg, real, None),
    }
}

/// Fraction of channel uses carrying payload when relays signal their state.
///
/// Each block of `B` symbols of `bits_per_symbol` bits costs `ceil(log2 N)`
/// signalling bits, and at least one bit when `N = 1`.
pub fn useful_rate(bits_per_symbol: usize, block_len: usize, n_relays: usize) -> Result<f64> {
    if bits_per_symbol == 0 || block_len == 0 || n_relays == 0 {
        return Err(Error::InvalidConfig(
            "bits per symbol, block length and relay count must all be at least 1".into(),
        ));
    }
    let signalling = if n_relays == 1 {
        1
    } else {
        usize::BITS - (n_relays - 1).leading_zeros()
    } as f64;
    let payload = (bits_per_symbol * block_len) as f64;
    Ok(payload / (payload + signalling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotations::build_schedule;
    use crate::seeding::trial_rng;

    fn c(re: f64, im: f64) -> ComplexGain {
        ComplexGain::new(re, im)
    }

    fn lex_schedule(n: usize, l: usize, t: usize) -> RotationSchedule {
        build_schedule(n, l, t, Ordering::Lexicographic, &mut trial_rng(0, 0)).unwrap()
    }

    #[test]
    fn dest_channel_alignments() {
        let real = ChannelRealization::isolated(c(1.0, 0.0), vec![c(0.3, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let sched = lex_schedule(1, 2, 2);
        assert_eq!(equivalent_dest_channel(&real, &sched, &[], 0), c(1.0, 0.0));
        // slot 0 uses +1, slot 1 uses -1
        assert_eq!(equivalent_dest_channel(&real, &sched, &[0], 0), c(2.0, 0.0));
        assert_eq!(equivalent_dest_channel(&real, &sched, &[0], 1), c(0.0, 0.0));
    }

    #[test]
    fn relay_channel_cases() {
        let one = c(1.0, 0.0);
        let real = ChannelRealization::new(
            one,
            vec![c(0.5, 0.5), one],
            vec![one, one],
            vec![vec![c(0.0, 0.0), c(2.0, 0.0)], vec![c(7.0, 0.0), c(0.0, 0.0)]],
        )
        .unwrap();
        let sched = lex_schedule(2, 2, 4);
        assert_eq!(equivalent_relay_channel(&real, &sched, &[], 0, 0).unwrap(), c(0.5, 0.5));
        // column 2 is (-1, +1): relay 0 rotates by -1
        assert_eq!(equivalent_relay_channel(&real, &sched, &[0], 1, 2).unwrap(), c(-1.0, 0.0));
        assert_eq!(
            equivalent_relay_channel(&real, &sched, &[0], 0, 2),
            Err(Error::RelayTransmitting(0))
        );

        let iso = ChannelRealization::isolated(one, vec![c(0.2, 0.1), one], vec![one, one]).unwrap();
        for t in 0..4 {
            assert_eq!(equivalent_relay_channel(&iso, &sched, &[1], 0, t).unwrap(), c(0.2, 0.1));
        }
    }

    #[test]
    fn slot_info_values() {
        assert_eq!(slot_mutual_info(c(1.0, 0.0), 1.0, 0), 1.0);
        assert_eq!(slot_mutual_info(c(0.0, 0.0), 5.0, 2), 0.0);
        assert!((slot_mutual_info(c(3f64.sqrt(), 0.0), 2.0, 1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn listen_time_cases() {
        assert_eq!(single_relay_listen_time(64, 0.0, 10.0, c(0.0, 0.0)), 0);
        assert_eq!(single_relay_listen_time(64, 1.0, 10.0, c(0.0, 0.0)), 64);
        assert_eq!(single_relay_listen_time(64, 2.0, 3.0, c(1.0, 0.0)), 64);
        assert_eq!(single_relay_listen_time(64, 2.0, 15.0, c(1.0, 0.0)), 32);
        assert_eq!(single_relay_listen_time(64, 2.0, 1e30, c(1.0, 0.0)), 2);
    }

    #[test]
    fn no_relays_is_siso_outage() {
        let cfg = ProtocolConfig::new(0, 2, 16, 2.0, 10.0);
        let real = ChannelRealization::isolated(c(0.5, 0.2), vec![], vec![]).unwrap();
        let sched = schedule_unchecked(0, 2, 16, Ordering::Random, &mut trial_rng(0, 0));
        let out = run_trial(&cfg, &real, &sched).unwrap();
        let per_slot = (1.0 + 10.0 * 0.29f64).log2();
        assert!((out.dest_info_bits - 16.0 * per_slot).abs() < 1e-12);
        assert_eq!(out.outage, 16.0 * per_slot < 32.0);
        assert!(out.decode_slot.is_empty());
        assert_eq!(baseline_miso_trial(&cfg, &real).unwrap(), out);
    }

    #[test]
    fn block_gating_delays_decoding_to_boundary() {
        let cfg = ProtocolConfig::new(1, 2, 16, 1.0, 10.0).with_block_len(4);
        let real = ChannelRealization::isolated(c(1.0, 0.0), vec![c(1e3, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let sched = lex_schedule(1, 2, 16);
        let (out, trace) = run_trial_traced(&cfg, &real, &sched).unwrap();
        assert_eq!(out.decode_slot, vec![4]);
        assert!(trace[..4].iter().all(|r| r.transmitters == 1));
        assert!(trace[4..].iter().all(|r| r.transmitters == 2));
    }

    #[test]
    fn zero_rate_decodes_immediately() {
        let cfg = ProtocolConfig::new(2, 2, 8, 0.0, 1.0).with_block_len(4);
        let real = ChannelRealization::isolated(c(0.0, 0.0), vec![c(0.0, 0.0); 2], vec![c(1.0, 0.0); 2]).unwrap();
        let out = run_trial(&cfg, &real, &lex_schedule(2, 2, 8)).unwrap();
        assert_eq!(out.decode_slot, vec![0, 0]);
        assert!(!out.outage);
    }

    #[test]
    fn dead_source_relay_link_never_decodes() {
        let cfg = ProtocolConfig::new(1, 2, 8, 1.0, 100.0);
        let real = ChannelRealization::isolated(c(1.0, 0.0), vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let out = run_trial(&cfg, &real, &lex_schedule(1, 2, 8)).unwrap();
        assert_eq!(out.decode_slot, vec![8]);
    }

    #[test]
    fn simultaneous_decodes_activate_together() {
        let cfg = ProtocolConfig::new(2, 2, 8, 1.0, 10.0).with_isolated(true);
        let big = c(10.0, 0.0);
        let real = ChannelRealization::isolated(c(1.0, 0.0), vec![big, big], vec![c(1.0, 0.0); 2]).unwrap();
        let (out, trace) = run_trial_traced(&cfg, &real, &lex_schedule(2, 2, 8)).unwrap();
        assert_eq!(out.decode_slot, vec![1, 1]);
        assert_eq!(trace[0].transmitters, 1);
        assert!(trace[1..].iter().all(|r| r.transmitters == 3));
    }

    #[test]
    fn miso_single_active_slot_info() {
        // j = 1, g0 = g1 = 1, rho = 2: log2(1 + 2/2 * 2) = log2(3)
        let cfg = ProtocolConfig::new(1, 2, 2, 0.0, 2.0);
        let one = c(1.0, 0.0);
        let real = ChannelRealization::isolated(one, vec![one], vec![one]).unwrap();
        let out = baseline_miso_trial(&cfg, &real).unwrap();
        assert_eq!(out.decode_slot, vec![0]);
        assert!((out.dest_info_bits - 2.0 * 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let cfg = ProtocolConfig::new(2, 2, 8, 1.0, 1.0);
        let one = c(1.0, 0.0);
        let real = ChannelRealization::isolated(one, vec![one], vec![one]).unwrap();
        assert!(matches!(
            run_trial(&cfg, &real, &lex_schedule(1, 2, 8)),
            Err(Error::DimensionMismatch(_))
        ));
        let cfg = ProtocolConfig::new(1, 2, 8, 1.0, 1.0);
        assert!(run_trial(&cfg, &real, &lex_schedule(1, 2, 4)).is_err());
    }

    #[test]
    fn config_validation() {
        let ok = ProtocolConfig::new(1, 2, 64, 2.0, 10.0);
        assert!(ok.validate().is_ok());
        assert!(ok.clone().with_block_len(0).validate().is_err());
        assert!(ok.clone().with_block_len(5).validate().is_err());
        assert!(ok.clone().with_block_len(128).validate().is_err());
        assert!(ok.clone().with_snr_linear(0.0).validate().is_err());
        assert!(ProtocolConfig::new(1, 2, 64, -1.0, 10.0).validate().is_err());
        assert!(ProtocolConfig::new(1, 0, 64, 1.0, 10.0).validate().is_err());
        assert!(ProtocolConfig::new(1, 2, 0, 1.0, 10.0).validate().is_err());
    }

    #[test]
    fn useful_rates() {
        assert_eq!(useful_rate(2, 1, 3).unwrap(), 0.5);
        assert_eq!(useful_rate(2, 4, 3).unwrap(), 0.8);
        assert_eq!(useful_rate(2, 8, 3).unwrap(), 16.0 / 18.0);
        assert_eq!(useful_rate(2, 1, 1).unwrap(), 2.0 / 3.0);
        assert_eq!(useful_rate(2, 1, 2).unwrap(), 2.0 / 3.0);
        assert_eq!(useful_rate(2, 1, 4).unwrap(), 0.5);
        assert_eq!(useful_rate(2, 1, 5).unwrap(), 2.0 / 5.0);
        assert!(useful_rate(2, 0, 3).is_err());
        let mut prev = 0.0;
        for b in 1..200 {
            let r = useful_rate(2, b, 3).unwrap();
            assert!(r > prev && r < 1.0);
            prev = r;
        }
    }
}
