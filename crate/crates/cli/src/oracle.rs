//! Built-in oracle suite. Each check compares the engine against a value
//! computed by independent means: a closed form, hand-expanded sums or
//! direct enumeration.

use std::collections::HashMap;

use ddfrot::{
    build_schedule, dmt_ddf_optimal, dmt_lower_bound_single_relay, estimate_outage, run_trial_traced,
    snr_db_to_linear, trial_rng, useful_rate, ChannelRealization, Ordering, ProtocolConfig,
};
use num_complex::Complex64;

pub const DEFAULT_SEED: u64 = 20_110_101;

/// Tolerance of the SISO Monte Carlo check (about three binomial standard
/// errors at 10^6 trials).
pub const SISO_TOLERANCE: f64 = 0.002;
pub const TRACE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: &'static str,
    pub passed: bool,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    fn within(name: &'static str, expected: f64, computed: f64, tolerance: f64) -> Self {
        Self {
            name,
            passed: (expected - computed).abs() <= tolerance,
            expected,
            computed,
            tolerance,
        }
    }
}

/// Rayleigh SISO outage `1 - exp(-(2^R - 1) / rho)`.
pub fn siso_outage_closed_form(rate: f64, rho: f64) -> f64 {
    1.0 - (-(2f64.powf(rate) - 1.0) / rho).exp()
}

/// N = 0, R = 2 bpcu, 10 dB against the closed form.
pub fn siso_check(trials: u64, seed: u64) -> ddfrot::Result<OracleCheck> {
    let rho = snr_db_to_linear(10.0);
    let cfg = ProtocolConfig::new(0, 1, 64, 2.0, rho);
    let est = estimate_outage(&cfg, trials, seed)?;
    Ok(OracleCheck::within(
        "siso_closed_form",
        siso_outage_closed_form(2.0, rho),
        est.p_hat,
        SISO_TOLERANCE,
    ))
}

/// The fixed four-slot trace: one relay, two rotations in lexicographic
/// order, `g0 = g1 = 1`, `h1 = 1.5`, `rho = 3`, `R = 1`.
pub struct TraceCase {
    pub cfg: ProtocolConfig,
    pub real: ChannelRealization,
}

pub fn trace_case() -> TraceCase {
    let one = Complex64::new(1.0, 0.0);
    let cfg = ProtocolConfig::new(1, 2, 4, 1.0, 3.0).with_ordering(Ordering::Lexicographic);
    let real = ChannelRealization::isolated(one, vec![Complex64::new(1.5, 0.0)], vec![one]).unwrap();
    TraceCase { cfg, real }
}

/// Hand expansion of the trace. The relay gathers `log2(1 + 3 * 2.25)` bits
/// per slot and needs 4, so it decodes after slot 2. Slots 1-2 carry
/// `log2(1 + 3)` each; slots 3-4 use rotations `+1, -1`, giving
/// `log2(1 + 3/2 * |1 + 1|^2)` and `log2(1 + 3/2 * |1 - 1|^2)`.
pub fn trace_expected() -> (usize, f64) {
    let rho = 3.0f64;
    let relay_per_slot = (1.0 + rho * 2.25f64).log2();
    let target = 4.0 * 1.0;
    let decode = (1..=4usize)
        .find(|&t| t as f64 * relay_per_slot >= target)
        .unwrap_or(4);
    let mut bits = 0.0;
    for t in 1..=4usize {
        if t <= decode {
            bits += (1.0 + rho * 1.0).log2();
        } else {
            let r = if (t - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let g = 1.0 + r * 1.0;
            bits += (1.0 + rho / 2.0 * g * g).log2();
        }
    }
    (decode, bits)
}

pub fn trace_check() -> Vec<OracleCheck> {
    let case = trace_case();
    let sched = build_schedule(1, 2, 4, Ordering::Lexicographic, &mut trial_rng(0, 0)).unwrap();
    let (out, _) = run_trial_traced(&case.cfg, &case.real, &sched).unwrap();
    let (decode, bits) = trace_expected();
    vec![
        OracleCheck::within("trace_decode_slot", decode as f64, out.decode_slot[0] as f64, 0.0),
        OracleCheck::within("trace_dest_info_bits", bits, out.dest_info_bits, TRACE_TOLERANCE),
    ]
}

/// With `T = L^N`, every rotation tuple appears exactly once, in both
/// orderings. Reports the number of (N, L, ordering) cases that failed.
pub fn coverage_check() -> OracleCheck {
    let mut failures = 0usize;
    let mut cases = 0usize;
    for (n, l) in [(1usize, 2usize), (1, 8), (2, 2), (2, 4), (3, 4), (2, 8), (4, 3)] {
        let period = l.pow(n as u32);
        for ordering in [Ordering::Lexicographic, Ordering::Random] {
            cases += 1;
            let sched = build_schedule(n, l, period, ordering, &mut trial_rng(7, cases as u64)).unwrap();
            let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
            for t in 0..period {
                *counts.entry(sched.column(t)).or_default() += 1;
            }
            let exact = counts.len() == period && counts.values().all(|&c| c == 1);
            let unit = (0..n).all(|k| sched.row(k).iter().all(|r| (r.norm() - 1.0).abs() <= 1e-12));
            if !(exact && unit) {
                failures += 1;
            }
        }
    }
    OracleCheck::within("schedule_coverage", 0.0, failures as f64, 0.0)
}

/// Worst absolute endpoint error over the optimal and lower-bound curves.
pub fn dmt_endpoint_check() -> OracleCheck {
    let mut worst = 0.0f64;
    for n in 1..=5usize {
        worst = worst.max((dmt_ddf_optimal(n, 0.0).unwrap() - (n as f64 + 1.0)).abs());
        worst = worst.max(dmt_ddf_optimal(n, 1.0).unwrap().abs());
    }
    for t in [16usize, 64, 256, 1024] {
        worst = worst.max((dmt_lower_bound_single_relay(t, 0.0).unwrap() - 2.0).abs());
        worst = worst.max(dmt_lower_bound_single_relay(t, 1.0).unwrap().abs());
    }
    OracleCheck::within("dmt_endpoints", 0.0, worst, 0.0)
}

pub fn useful_rate_check() -> OracleCheck {
    let mut worst = 0.0f64;
    for (b, expected) in [(1, 1.0 / 2.0), (4, 4.0 / 5.0), (8, 8.0 / 9.0)] {
        worst = worst.max((useful_rate(2, b, 3).unwrap() - expected).abs());
    }
    OracleCheck::within("useful_rate", 0.0, worst, 0.0)
}

pub fn run_all(trials: u64, seed: u64) -> ddfrot::Result<Vec<OracleCheck>> {
    let mut checks = vec![siso_check(trials, seed)?];
    checks.extend(trace_check());
    checks.push(coverage_check());
    checks.push(dmt_endpoint_check());
    checks.push(useful_rate_check());
    Ok(checks)
}

pub fn render(checks: &[OracleCheck]) -> String {
    use crate::output::fmt_g10;
    let mut s = String::from("check,status,expected,computed,abs_error,tolerance\n");
    for c in checks {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            fmt_g10(c.expected),
            fmt_g10(c.computed),
            fmt_g10((c.expected - c.computed).abs()),
            fmt_g10(c.tolerance)
        ));
    }
    s
}
