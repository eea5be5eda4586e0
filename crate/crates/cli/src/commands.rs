use std::fs::File;
use std::io::{BufWriter, Write};

use ddfrot::{
    build_schedule, dmt_ddf_optimal, dmt_lower_bound_single_relay, run_sweep, trial_rng, useful_rate, Ordering,
    SweepGrid,
};

use crate::args::{parse_grid, DmtArgs, OracleArgs, OutageArgs, RateArgs};
use crate::error::CliError;
use crate::oracle;
use crate::output::{fmt_g10, join, manifest_path, now_rfc3339, RunManifest};

pub const OUTAGE_HEADER: &str =
    "snr_db,rate_bpcu,n_relays,n_rotations,block_len,isolated,trials,failures,outage_prob,ci_low,ci_high";

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(CliError::Config("--threads must be at least 1".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn finish_manifest(mut manifest: RunManifest, out: &std::path::Path) -> Result<(), CliError> {
    let path = manifest_path(out);
    manifest.push("finished", now_rfc3339());
    manifest.push("manifest", path.display());
    manifest.write(&path)?;
    Ok(())
}

pub fn outage(args: &OutageArgs) -> Result<(), CliError> {
    let started = now_rfc3339();
    let snr_db = parse_grid(&args.snr_db).map_err(|e| CliError::Config(format!("--snr-db: {e}")))?;
    let grid = SweepGrid {
        snr_db,
        rate: args.rate.clone(),
        n_relays: args.relays.clone(),
        n_rotations: args.rotations.clone(),
        block_len: args.block.clone(),
        isolated: args.connectivity.iter().map(|c| c.isolated()).collect(),
        frame_len: args.frame,
        ordering: args.ordering,
        scheme: args.scheme,
    };
    grid.validate()?;
    if args.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    for cfg in grid.groups().iter().flatten() {
        cfg.validate()?;
    }
    warn_short_frames(&grid);

    let rows = with_threads(args.threads, || run_sweep(&grid, args.trials, args.seed))??;

    let mut csv = BufWriter::new(File::create(&args.out)?);
    writeln!(csv, "{OUTAGE_HEADER}")?;
    for row in &rows {
        let est = row.estimate.as_ref().map_err(|e| CliError::Core(e.clone()))?;
        let cfg = &row.config;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt_g10(row.snr_db),
            fmt_g10(cfg.rate),
            cfg.n_relays,
            cfg.n_rotations,
            cfg.block_len,
            cfg.isolated,
            est.trials,
            est.failures,
            fmt_g10(est.p_hat),
            fmt_g10(est.ci_low),
            fmt_g10(est.ci_high)
        )?;
    }
    csv.flush()?;

    let mut m = RunManifest::new("outage", &started);
    m.push("relays", join(&args.relays));
    m.push("rotations", join(&args.rotations));
    m.push("frame", args.frame);
    m.push("block", join(&args.block));
    m.push("rate", join(&args.rate));
    m.push("snr-db", &args.snr_db);
    m.push(
        "connectivity",
        args.connectivity.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(","),
    );
    m.push("ordering", args.ordering);
    m.push("scheme", args.scheme);
    m.push("trials", args.trials);
    m.push("seed", args.seed);
    if let Some(k) = args.threads {
        m.push("threads", k);
    }
    m.push("out", args.out.display());
    finish_manifest(m, &args.out)
}

fn warn_short_frames(grid: &SweepGrid) {
    for &n in grid.n_relays.iter().filter(|&&n| n > 0) {
        for &l in &grid.n_rotations {
            let probe = build_schedule(n, l, grid.frame_len, Ordering::Lexicographic, &mut trial_rng(0, 0));
            if let Some(w) = probe.ok().and_then(|s| s.coverage_warning()) {
                eprintln!("warning: {w}");
            }
        }
    }
}

pub fn dmt(args: &DmtArgs) -> Result<(), CliError> {
    let started = now_rfc3339();
    let invalid = |msg: String| CliError::Config(format!("--grid: {msg}"));
    let grid: Vec<f64> = parse_grid(&args.grid)
        .map_err(invalid)?
        .into_iter()
        .map(|r| if r > 1.0 && r - 1.0 < 1e-9 { 1.0 } else if r < 0.0 && r > -1e-9 { 0.0 } else { r })
        .collect();
    if let Some(r) = grid.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(invalid(format!("multiplexing gain {r} outside [0, 1]")));
    }
    if args.relays == 0 {
        return Err(CliError::Config("--relays must be at least 1".into()));
    }
    if let Some(t) = args.frames.iter().find(|&&t| t < 2) {
        return Err(CliError::Config(format!("--frames: frame length {t} must be at least 2")));
    }

    let mut csv = BufWriter::new(File::create(&args.out)?);
    let mut header = String::from("r,d_optimal");
    for t in &args.frames {
        header.push_str(&format!(",d_lower_bound_T{t}"));
    }
    writeln!(csv, "{header}")?;
    for &r in &grid {
        let mut line = format!("{},{}", fmt_g10(r), fmt_g10(dmt_ddf_optimal(args.relays, r)?));
        for &t in &args.frames {
            line.push(',');
            line.push_str(&fmt_g10(dmt_lower_bound_single_relay(t, r)?));
        }
        writeln!(csv, "{line}")?;
    }
    csv.flush()?;

    let mut m = RunManifest::new("dmt", &started);
    m.push("relays", args.relays);
    m.push("frames", join(&args.frames));
    m.push("grid", &args.grid);
    m.push("out", args.out.display());
    finish_manifest(m, &args.out)
}

pub fn oracle(args: &OracleArgs) -> Result<(), CliError> {
    let checks = with_threads(args.threads, || oracle::run_all(args.trials, args.seed))??;
    print!("{}", oracle::render(&checks));
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::OracleFailed(failed));
    }
    Ok(())
}

pub fn rate(args: &RateArgs) -> Result<(), CliError> {
    let started = now_rfc3339();
    let mut table = String::from("block_len,useful_rate_bpcu\n");
    for &b in &args.block {
        table.push_str(&format!("{},{}\n", b, fmt_g10(useful_rate(args.bits, b, args.relays)?)));
    }
    print!("{table}");
    if let Some(out) = &args.out {
        std::fs::write(out, &table)?;
        let mut m = RunManifest::new("rate", &started);
        m.push("bits", args.bits);
        m.push("relays", args.relays);
        m.push("block", join(&args.block));
        m.push("out", out.display());
        finish_manifest(m, out)?;
    }
    Ok(())
}
