//! Rotation alphabet and the relay-by-slot rotation schedule.
//!
//! With `L` rotations the alphabet is the set of `L`-th roots of unity. A
//! schedule assigns one rotation to every (relay, slot) pair such that, once
//! the frame is long enough, every `N`-tuple of rotations shows up as a column.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::channel::ComplexGain;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Ordering {
    /// Columns cycle through the tuples in lexicographic order.
    Lexicographic,
    /// Each full period of tuples is visited in a fresh random order.
    #[default]
    Random,
}

impl std::str::FromStr for Ordering {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lexicographic" | "lex" => Ok(Ordering::Lexicographic),
            "random" => Ok(Ordering::Random),
            other => Err(format!("unknown ordering `{other}` (expected lexicographic or random)")),
        }
    }
}

impl std::fmt::Display for Ordering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Ordering::Lexicographic => "lexicographic",
            Ordering::Random => "random",
        })
    }
}

/// Angles `2*pi*l/L` for `l = 0..L`, increasing.
pub fn angle_set(n_rotations: usize) -> Result<Vec<f64>> {
    if n_rotations == 0 {
        return Err(Error::ZeroRotations);
    }
    Ok((0..n_rotations)
        .map(|l| 2.0 * PI * l as f64 / n_rotations as f64)
        .collect())
}

/// The rotation `exp(2*pi*i*l/L)`. Quarter turns are returned exactly.
pub fn rotation(index: usize, n_rotations: usize) -> ComplexGain {
    let l = index % n_rotations;
    if (4 * l).is_multiple_of(n_rotations) {
        return match 4 * l / n_rotations {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::cis(2.0 * PI * l as f64 / n_rotations as f64)
}

/// `N x T` matrix of unit-modulus rotations; row `k` belongs to relay `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationSchedule {
    n_relays: usize,
    n_rotations: usize,
    frame_len: usize,
    /// Row-major angle indices in `0..L`.
    indices: Vec<u32>,
    entries: Vec<ComplexGain>,
}

impl RotationSchedule {
    pub fn n_relays(&self) -> usize {
        self.n_relays
    }

    pub fn n_rotations(&self) -> usize {
        self.n_rotations
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    /// Rotation used by relay `relay` in slot `slot` (0-based).
    #[inline]
    pub fn get(&self, relay: usize, slot: usize) -> ComplexGain {
        self.entries[relay * self.frame_len + slot]
    }

    /// Angle index in `0..L` used by relay `relay` in slot `slot`.
    pub fn angle_index(&self, relay: usize, slot: usize) -> usize {
        self.indices[relay * self.frame_len + slot] as usize
    }

    /// Column `slot` as angle indices, one per relay.
    pub fn column(&self, slot: usize) -> Vec<usize> {
        (0..self.n_relays).map(|k| self.angle_index(k, slot)).collect()
    }

    pub fn row(&self, relay: usize) -> &[ComplexGain] {
        &self.entries[relay * self.frame_len..(relay + 1) * self.frame_len]
    }

    /// Number of distinct rotation tuples, `L^N`, or `None` when it overflows.
    pub fn period(&self) -> Option<u64> {
        tuple_count(self.n_rotations, self.n_relays)
    }

    /// `true` when the frame is long enough for every tuple to appear.
    pub fn covers_all_tuples(&self) -> bool {
        self.period().is_some_and(|p| self.frame_len as u64 >= p)
    }

    /// Non-fatal diagnostic when full coverage is impossible.
    pub fn coverage_warning(&self) -> Option<String> {
        if self.covers_all_tuples() {
            return None;
        }
        Some(match self.period() {
            Some(p) => format!(
                "frame of {} slots cannot hold all {} rotation tuples ({}^{})",
                self.frame_len, p, self.n_rotations, self.n_relays
            ),
            None => format!(
                "frame of {} slots cannot hold all {}^{} rotation tuples",
                self.frame_len, self.n_rotations, self.n_relays
            ),
        })
    }
}

fn tuple_count(n_rotations: usize, n_relays: usize) -> Option<u64> {
    (n_rotations as u64).checked_pow(u32::try_from(n_relays).ok()?)
}

fn push_tuple(digits: &mut [Vec<u32>], mut code: u64, base: u64) {
    for row in digits.iter_mut().rev() {
        row.push((code % base) as u32);
        code /= base;
    }
}

/// Builds the rotation schedule.
///
/// Lexicographic mode uses column `t` = tuple number `t mod L^N`, relay 0
/// being the most significant digit. Random mode shuffles each full period of
/// tuples independently, so coverage is kept whenever `T >= L^N`. Use
/// [`RotationSchedule::coverage_warning`] to detect frames that are too short.
pub fn build_schedule<R: Rng + ?Sized>(
    n_relays: usize,
    n_rotations: usize,
    frame_len: usize,
    ordering: Ordering,
    rng: &mut R,
) -> Result<RotationSchedule> {
    if n_relays == 0 {
        return Err(Error::InvalidConfig("schedule needs at least one relay".into()));
    }
    if n_rotations == 0 {
        return Err(Error::ZeroRotations);
    }
    if frame_len == 0 {
        return Err(Error::InvalidConfig("frame length must be at least 1".into()));
    }
    Ok(schedule_unchecked(n_relays, n_rotations, frame_len, ordering, rng))
}

/// Same as [`build_schedule`] but tolerates `n_relays == 0`, which yields an
/// empty schedule.
pub(crate) fn schedule_unchecked<R: Rng + ?Sized>(
    n_relays: usize,
    n_rotations: usize,
    frame_len: usize,
    ordering: Ordering,
    rng: &mut R,
) -> RotationSchedule {
    let base = n_rotations as u64;
    let mut digits: Vec<Vec<u32>> = vec![Vec::with_capacity(frame_len); n_relays];
    if n_relays > 0 {
        let period = tuple_count(n_rotations, n_relays);
        match ordering {
            Ordering::Lexicographic => {
                for t in 0..frame_len as u64 {
                    let code = period.map_or(t, |p| t % p);
                    push_tuple(&mut digits, code, base);
                }
            }
            Ordering::Random => {
                let mut remaining = frame_len;
                while remaining > 0 {
                    match period {
                        Some(p) if p as usize <= remaining => {
                            let mut codes: Vec<u64> = (0..p).collect();
                            codes.shuffle(rng);
                            for code in codes {
                                push_tuple(&mut digits, code, base);
                            }
                            remaining -= p as usize;
                        }
                        Some(p) if usize::try_from(p).is_ok() => {
                            for code in index::sample(rng, p as usize, remaining) {
                                push_tuple(&mut digits, code as u64, base);
                            }
                            remaining = 0;
                        }
                        _ => {
                            // L^N too large to index; draw distinct digit tuples directly.
                            let mut seen = HashSet::with_capacity(remaining);
                            while seen.len() < remaining {
                                let tuple: Vec<u32> =
                                    (0..n_relays).map(|_| rng.random_range(0..base) as u32).collect();
                                if seen.insert(tuple.clone()) {
                                    for (row, d) in digits.iter_mut().zip(tuple) {
                                        row.push(d);
                                    }
                                }
                            }
                            remaining = 0;
                        }
                    }
                }
            }
        }
    }
    let table: Vec<ComplexGain> = (0..n_rotations).map(|l| rotation(l, n_rotations)).collect();
    let indices: Vec<u32> = digits.into_iter().flatten().collect();
    let entries = indices.iter().map(|&d| table[d as usize]).collect();
    RotationSchedule {
        n_relays,
        n_rotations,
        frame_len,
        indices,
        entries,
    }
}
