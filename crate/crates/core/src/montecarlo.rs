//! Reproducible parallel Monte Carlo estimation of outage probability.
//!
//! Trial `i` of a run with seed `s` always draws from stream `(s, i)`, so
//! estimates are bit-identical for any number of worker threads.

use rayon::prelude::*;

use crate::channel::snr_db_to_linear;
use crate::protocol::{simulate_trial_unchecked, ProtocolConfig, Scheme};
use crate::rotations::Ordering;
use crate::seeding::trial_rng;
use crate::{Error, Result};

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    /// Lower end of the 95% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
}

impl OutageEstimate {
    pub fn from_counts(trials: u64, failures: u64) -> Self {
        assert!(trials > 0 && failures <= trials);
        let p_hat = failures as f64 / trials as f64;
        let (ci_low, ci_high) = wilson_interval(failures, trials);
        Self {
            trials,
            failures,
            p_hat,
            ci_low,
            ci_high,
        }
    }

    /// Binomial standard error `sqrt(p (1 - p) / n)`.
    pub fn std_error(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.trials as f64).sqrt()
    }
}

/// 95% Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if failures == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let high = if failures == trials { 1.0 } else { (center + half).clamp(p, 1.0) };
    (low, high)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trial count must be at least 1".into()));
    }
    Ok(())
}

/// Estimates the outage probability of `cfg` over `trials` frames.
pub fn estimate_outage(cfg: &ProtocolConfig, trials: u64, seed: u64) -> Result<OutageEstimate> {
    cfg.validate()?;
    check_trials(trials)?;
    let failures: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let (real, sched) = cfg.draw_trial(&mut rng);
            simulate_trial_unchecked(cfg, &real, &sched).outage as u64
        })
        .sum();
    Ok(OutageEstimate::from_counts(trials, failures))
}

fn check_crn(reference: &ProtocolConfig, other: &ProtocolConfig) -> Result<()> {
    let field = if reference.n_relays != other.n_relays {
        "relay count"
    } else if reference.n_rotations != other.n_rotations {
        "rotation count"
    } else if reference.frame_len != other.frame_len {
        "frame length"
    } else if reference.block_len != other.block_len {
        "block length"
    } else if reference.rate != other.rate {
        "rate"
    } else if reference.isolated != other.isolated {
        "connectivity"
    } else if reference.ordering != other.ordering {
        "ordering"
    } else if reference.scheme != other.scheme {
        "scheme"
    } else {
        return Ok(());
    };
    Err(Error::CrnMismatch(field))
}

/// Estimates outage for configurations that differ only in SNR, reusing the
/// same channel and schedule draw for trial `i` at every SNR.
///
/// Each entry equals what [`estimate_outage`] returns for that configuration
/// on its own.
pub fn estimate_outage_crn(cfgs: &[ProtocolConfig], trials: u64, seed: u64) -> Result<Vec<OutageEstimate>> {
    let Some(first) = cfgs.first() else {
        return Ok(Vec::new());
    };
    for cfg in cfgs {
        cfg.validate()?;
        check_crn(first, cfg)?;
    }
    check_trials(trials)?;
    let k = cfgs.len();
    let failures = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; k],
            |mut acc, i| {
                let mut rng = trial_rng(seed, i);
                let (real, sched) = first.draw_trial(&mut rng);
                for (count, cfg) in acc.iter_mut().zip(cfgs) {
                    *count += simulate_trial_unchecked(cfg, &real, &sched).outage as u64;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; k],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(failures
        .into_iter()
        .map(|f| OutageEstimate::from_counts(trials, f))
        .collect())
}

/// Cartesian parameter grid. Scalars apply to every point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub snr_db: Vec<f64>,
    pub rate: Vec<f64>,
    pub n_relays: Vec<usize>,
    pub n_rotations: Vec<usize>,
    pub block_len: Vec<usize>,
    pub isolated: Vec<bool>,
    pub frame_len: usize,
    pub ordering: Ordering,
    pub scheme: Scheme,
}

impl SweepGrid {
    /// Configurations that share everything but the SNR, in output order
    /// (rate, relays, rotations, block length, connectivity; SNR innermost).
    pub fn groups(&self) -> Vec<Vec<ProtocolConfig>> {
        let mut groups = Vec::new();
        for &rate in &self.rate {
            for &n in &self.n_relays {
                for &l in &self.n_rotations {
                    for &b in &self.block_len {
                        for &iso in &self.isolated {
                            groups.push(
                                self.snr_db
                                    .iter()
                                    .map(|&db| ProtocolConfig {
                                        n_relays: n,
                                        n_rotations: l,
                                        frame_len: self.frame_len,
                                        block_len: b,
                                        rate,
                                        snr_linear: snr_db_to_linear(db),
                                        isolated: iso,
                                        ordering: self.ordering,
                                        scheme: self.scheme,
                                    })
                                    .collect(),
                            );
                        }
                    }
                }
            }
        }
        groups
    }

    pub fn len(&self) -> usize {
        self.snr_db.len()
            * self.rate.len()
            * self.n_relays.len()
            * self.n_rotations.len()
            * self.block_len.len()
            * self.isolated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        let empty = [
            ("snr_db", self.snr_db.is_empty()),
            ("rate", self.rate.is_empty()),
            ("n_relays", self.n_relays.is_empty()),
            ("n_rotations", self.n_rotations.is_empty()),
            ("block_len", self.block_len.is_empty()),
            ("isolated", self.isolated.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(Error::InvalidConfig(format!("sweep list `{name}` is empty")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub config: ProtocolConfig,
    pub estimate: Result<OutageEstimate>,
}

/// Runs every grid point. All points share `seed`, so each point's estimate
/// equals a standalone [`estimate_outage`] call and adding points never
/// changes existing results. Invalid points are reported in their row and
/// the remaining points still run.
pub fn run_sweep(grid: &SweepGrid, trials: u64, seed: u64) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    let mut rows = Vec::with_capacity(grid.len());
    for group in grid.groups() {
        match estimate_outage_crn(&group, trials, seed) {
            Ok(estimates) => {
                for ((cfg, est), &db) in group.into_iter().zip(estimates).zip(&grid.snr_db) {
                    rows.push(SweepRow {
                        snr_db: db,
                        config: cfg,
                        estimate: Ok(est),
                    });
                }
            }
            Err(_) => {
                // Split the group so that each point reports its own failure.
                for (cfg, &db) in group.into_iter().zip(&grid.snr_db) {
                    let estimate = estimate_outage(&cfg, trials, seed);
                    rows.push(SweepRow {
                        snr_db: db,
                        config: cfg,
                        estimate,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Finite-SNR diversity estimate from the two highest-SNR points,
/// `-(log10 p2 - log10 p1) / ((snr2 - snr1) / 10)`.
pub fn diversity_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidSlopePoints(format!("got {} point(s)", points.len())));
    }
    if let Some(&(db, p)) = points.iter().find(|(_, p)| !(*p > 0.0 && *p <= 1.0)) {
        return Err(Error::InvalidSlopePoints(format!(
            "outage {p} at {db} dB (need more trials)"
        )));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = (sorted[sorted.len() - 2], sorted[sorted.len() - 1]);
    if hi.0 == lo.0 {
        return Err(Error::InvalidSlopePoints(format!("duplicate SNR {} dB", hi.0)));
    }
    Ok(-(hi.1.log10() - lo.1.log10()) / ((hi.0 - lo.0) / 10.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn wilson_brackets_estimate() {
        for (f, n) in [(0, 10), (10, 10), (3, 10), (1, 1_000_000), (500, 1000)] {
            let e = OutageEstimate::from_counts(n, f);
            assert!(0.0 <= e.ci_low && e.ci_low <= e.p_hat && e.p_hat <= e.ci_high && e.ci_high <= 1.0);
        }
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036_993_498).abs() < 1e-8);
    }

    #[test]
    fn wilson_matches_hand_value() {
        // reference values from statsmodels proportion_confint(method="wilson")
        let (lo, hi) = wilson_interval(20, 100);
        assert!((lo - 0.133_366_933_3).abs() < 1e-9, "{lo}");
        assert!((hi - 0.288_829_165_6).abs() < 1e-9, "{hi}");
    }

    #[test]
    fn wilson_coverage_on_synthetic_bernoulli() {
        let p = 0.3;
        let n = 400;
        let mut rng = trial_rng(2024, 0);
        let covered = (0..1000)
            .filter(|_| {
                let f = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
                let (lo, hi) = wilson_interval(f, n);
                lo <= p && p <= hi
            })
            .count();
        assert!((930..=970).contains(&covered), "coverage {covered}/1000");
    }

    #[test]
    fn zero_rate_never_outage() {
        let cfg = ProtocolConfig::new(2, 2, 16, 0.0, 1.0);
        assert_eq!(estimate_outage(&cfg, 500, 1).unwrap().p_hat, 0.0);
    }

    #[test]
    fn vanishing_snr_always_outage() {
        let cfg = ProtocolConfig::new(1, 2, 16, 2.0, 1e-9);
        assert_eq!(estimate_outage(&cfg, 500, 1).unwrap().p_hat, 1.0);
    }

    #[test]
    fn rejects_zero_trials_and_bad_config() {
        let cfg = ProtocolConfig::new(1, 2, 16, 1.0, 1.0);
        assert!(estimate_outage(&cfg, 0, 1).is_err());
        assert!(estimate_outage(&cfg.clone().with_block_len(3), 10, 1).is_err());
    }

    #[test]
    fn crn_single_matches_plain_estimate() {
        let cfg = ProtocolConfig::new(1, 2, 32, 1.5, 10.0);
        let a = estimate_outage(&cfg, 3000, 11).unwrap();
        let b = estimate_outage_crn(std::slice::from_ref(&cfg), 3000, 11).unwrap();
        assert_eq!(vec![a], b);
    }

    #[test]
    fn crn_rejects_non_snr_differences() {
        let a = ProtocolConfig::new(1, 2, 32, 1.5, 10.0);
        let b = ProtocolConfig::new(1, 4, 32, 1.5, 100.0);
        assert_eq!(estimate_outage_crn(&[a, b], 10, 0), Err(Error::CrnMismatch("rotation count")));
    }

    #[test]
    fn crn_two_snrs_ordered() {
        let base = ProtocolConfig::new(1, 2, 32, 2.0, 1.0);
        let cfgs = [base.clone().with_snr_linear(10.0), base.with_snr_linear(100.0)];
        for seed in 0..5 {
            let est = estimate_outage_crn(&cfgs, 2000, seed).unwrap();
            assert!(est[0].p_hat >= est[1].p_hat);
        }
    }

    fn grid() -> SweepGrid {
        SweepGrid {
            snr_db: vec![5.0, 15.0],
            rate: vec![1.0],
            n_relays: vec![1],
            n_rotations: vec![2, 4],
            block_len: vec![1],
            isolated: vec![false],
            frame_len: 16,
            ordering: Ordering::Random,
            scheme: Scheme::Rotations,
        }
    }

    #[test]
    fn sweep_points_match_standalone_estimates() {
        let rows = run_sweep(&grid(), 2000, 5).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            let alone = estimate_outage(&row.config, 2000, 5).unwrap();
            assert_eq!(row.estimate.as_ref().unwrap(), &alone);
        }
        assert_eq!(rows[2].config.n_rotations, 4);
        assert_eq!(rows[1].snr_db, 15.0);
    }

    #[test]
    fn sweep_continues_past_invalid_points() {
        let mut g = grid();
        g.block_len = vec![3, 4];
        g.n_rotations = vec![2];
        let rows = run_sweep(&g, 500, 5).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].estimate.is_err() && rows[1].estimate.is_err());
        assert!(rows[2].estimate.is_ok() && rows[3].estimate.is_ok());
        g.rate.clear();
        assert!(run_sweep(&g, 10, 0).is_err());
    }

    #[test]
    fn slope_cases() {
        let halves = [(0.0, 0.1), (3.0, 0.05)];
        assert!((diversity_slope(&halves).unwrap() - 1.0).abs() < 0.01);
        let hundredfold = [(20.0, 1e-4), (0.0, 1.0), (10.0, 1e-2)];
        assert!((diversity_slope(&hundredfold).unwrap() - 2.0).abs() < 1e-12);
        assert!(diversity_slope(&[(0.0, 0.1)]).is_err());
        assert!(diversity_slope(&[(0.0, 0.1), (10.0, 0.0)]).is_err());
        assert!(diversity_slope(&[(10.0, 0.1), (10.0, 0.01)]).is_err());
    }
}
