//! Diversity-multiplexing tradeoff curves.
//!
//! Two closed forms are provided: the optimal DDF tradeoff for `N` relays,
//! and a lower bound on the tradeoff achieved with one relay and two
//! rotations over a finite frame of `T` slots. The bound minimizes, over the
//! relay decode time `T1`, the sum of the decode-time exponent and the
//! destination exponent.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmtPoint {
    /// Multiplexing gain in `[0, 1]`.
    pub r: f64,
    /// Diversity gain, non-negative.
    pub d: f64,
}

/// Decode-time dependent parameters of the single-relay bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DmtBoundParams {
    pub frame_len: usize,
    /// Candidate relay decode time `T1` in `1..=T`.
    pub decode_time: usize,
    /// Slots per rotation in the relay phase, `floor((T - T1) / 2)`.
    pub half_relay_slots: usize,
}

impl DmtBoundParams {
    pub fn new(frame_len: usize, decode_time: usize) -> Result<Self> {
        if decode_time == 0 || decode_time > frame_len {
            return Err(Error::InvalidConfig(format!(
                "decode time {decode_time} outside 1..={frame_len}"
            )));
        }
        Ok(Self {
            frame_len,
            decode_time,
            half_relay_slots: (frame_len - decode_time) / 2,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmtKind {
    /// Optimal DDF tradeoff with the given number of relays.
    Optimal(usize),
    /// Single relay, two rotations, frame of the given length.
    LowerBound(usize),
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

fn check_gain(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::GainOutOfRange(r));
    }
    Ok(())
}

/// Optimal DDF tradeoff for `n_relays` relays.
pub fn dmt_ddf_optimal(n_relays: usize, r: f64) -> Result<f64> {
    check_gain(r)?;
    if n_relays == 0 {
        return Err(Error::InvalidConfig("optimal DDF tradeoff needs at least one relay".into()));
    }
    let n = n_relays as f64;
    Ok(if r <= 1.0 / (n + 1.0) {
        (n + 1.0) * (1.0 - r)
    } else if r <= 0.5 {
        1.0 + n * (1.0 - 2.0 * r) / (1.0 - r)
    } else {
        (1.0 - r) / r
    })
}

/// SNR exponent of the relay decoding after `decode_time` slots,
/// `(1 - T r / (T1 - 1))^+`. Decoding within one slot carries no exponent.
pub fn d1_exponent(frame_len: usize, decode_time: usize, r: f64) -> f64 {
    if decode_time <= 1 {
        return 0.0;
    }
    pos(1.0 - frame_len as f64 * r / (decode_time - 1) as f64)
}

/// Destination exponent given the relay decoded after `T1` slots.
///
/// At `r = 2A/T` the `r >= 2A/T` branch is used.
pub fn d_dest_bound(params: DmtBoundParams, r: f64) -> f64 {
    let t = params.frame_len as f64;
    let t1 = params.decode_time as f64;
    let two_a = 2.0 * params.half_relay_slots as f64;
    let shared = pos(1.0 - t * r / (t1 + two_a));
    if t1 <= two_a {
        2.0 * shared
    } else if r >= two_a / t {
        (t1 + two_a) / t1 * shared
    } else {
        pos(2.0 - t * r / two_a)
    }
}

/// Lower bound on the single-relay, two-rotation tradeoff over a frame of
/// `frame_len` slots: `min over T1 of d1(T1, r) + d_dest(T1, r)`.
pub fn dmt_lower_bound_single_relay(frame_len: usize, r: f64) -> Result<f64> {
    check_gain(r)?;
    if frame_len < 2 {
        return Err(Error::InvalidConfig("frame length must be at least 2".into()));
    }
    Ok((1..=frame_len)
        .map(|t1| {
            let params = DmtBoundParams {
                frame_len,
                decode_time: t1,
                half_relay_slots: (frame_len - t1) / 2,
            };
            d1_exponent(frame_len, t1, r) + d_dest_bound(params, r)
        })
        .fold(f64::INFINITY, f64::min))
}

pub fn dmt_curve(kind: DmtKind, grid: &[f64]) -> Result<Vec<DmtPoint>> {
    grid.iter()
        .map(|&r| {
            let d = match kind {
                DmtKind::Optimal(n) => dmt_ddf_optimal(n, r)?,
                DmtKind::LowerBound(t) => dmt_lower_bound_single_relay(t, r)?,
            };
            Ok(DmtPoint { r, d })
        })
        .collect()
}
