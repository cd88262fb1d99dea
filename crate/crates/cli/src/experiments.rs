use std::f64::consts::PI;

use clap::Args;
use fecam_core::spectral::{
    boundary_overshoot_compare, energy_compaction_report, fourier_partial_sum, gibbs_sweep,
    low_frequency_fixture, ramp_fixture, reconstruct_truncated, write_compaction_csv,
    write_gibbs_csv, CompactionRow, TransformKind, WaveKind,
};
use serde::Serialize;

use crate::outcome::{Failure, OrUsage};
use crate::output::OutputDir;
use crate::CmdResult;

#[derive(Debug, Clone, Args, Serialize)]
pub struct GibbsArgs {
    /// Harmonic counts N (comma separated).
    #[arg(long = "n", value_delimiter = ',', default_value = "10,100,1000,10000")]
    pub orders: Vec<usize>,
    /// square, sawtooth, or sine (sine has no jump and is refused).
    #[arg(long, default_value = "square")]
    pub wave: String,
    /// Size of the discontinuity `a`; the limiting overshoot is `a * 0.0894898...`.
    #[arg(long, default_value_t = 2.0)]
    pub jump: f64,
    #[arg(long, default_value_t = 2.0 * PI)]
    pub period: f64,
    /// Points per period in partial_sums.csv.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

pub fn run_gibbs(args: &GibbsArgs, out: &OutputDir) -> CmdResult {
    let wave: WaveKind = args.wave.parse().map_err(Failure::usage)?;
    if wave == WaveKind::Sine {
        return Err(Failure::usage(
            "a sine wave is continuous, so there is no jump for the Gibbs overshoot; use square or sawtooth",
        ));
    }
    if args.orders.is_empty() || args.orders.contains(&0) {
        return Err(Failure::usage("--n values must be >= 1"));
    }
    if !(args.jump.is_finite() && args.jump > 0.0) || !(args.period.is_finite() && args.period > 0.0) {
        return Err(Failure::usage("--jump and --period must be positive"));
    }
    // both waves jump by twice their amplitude
    let amplitude = args.jump / 2.0;
    let rows = gibbs_sweep(wave, args.period, amplitude, &args.orders).or_usage("Gibbs sweep")?;
    out.create(args)?;
    write_gibbs_csv(&out.path("gibbs.csv"), &rows).or_usage("writing gibbs.csv")?;

    let max = args.orders.iter().copied().max().unwrap_or(1);
    let model = wave.model(args.period, amplitude, max).or_usage("building series")?;
    let mut w = csv::Writer::from_path(out.path("partial_sums.csv")).or_usage("writing partial_sums.csv")?;
    let mut header = vec!["x".to_string(), "exact".to_string()];
    header.extend(args.orders.iter().map(|n| format!("S_{n}")));
    w.write_record(&header).or_usage("writing partial_sums.csv")?;
    let samples = args.samples.max(2);
    for k in 0..samples {
        let x = -args.period / 2.0 + args.period * k as f64 / samples as f64;
        let mut rec = vec![format!("{x:.9e}"), format!("{:.9e}", wave.value(args.period, amplitude, x))];
        for &n in &args.orders {
            let s = fourier_partial_sum(&model, n, x).or_usage("partial sum")?;
            rec.push(format!("{s:.9e}"));
        }
        w.write_record(&rec).or_usage("writing partial_sums.csv")?;
    }
    w.flush().or_usage("writing partial_sums.csv")?;

    println!("{:>8} {:>16} {:>16} {:>12}", "N", "overshoot", "target", "rel_error");
    for r in &rows {
        println!("{:>8} {:>16.10} {:>16.10} {:>12.3e}", r.order, r.overshoot, r.target, r.relative_error());
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompactionArgs {
    #[arg(long, default_value_t = 16)]
    pub length: usize,
    /// Numbers of retained components (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "5,10,15")]
    pub ns: Vec<usize>,
    /// lowfreq (three lowest DCT basis vectors) or ramp.
    #[arg(long, default_value = "lowfreq")]
    pub signal: String,
}

pub fn run_compaction(args: &CompactionArgs, out: &OutputDir) -> CmdResult {
    let x = match args.signal.as_str() {
        "lowfreq" => low_frequency_fixture(args.length),
        "ramp" => ramp_fixture(args.length),
        other => return Err(Failure::usage(format!("unknown --signal `{other}` (lowfreq|ramp)"))),
    }
    .or_usage("--length")?;
    let rows = energy_compaction_report(&x, &args.ns).or_usage("--ns")?;
    let boundary = rows
        .iter()
        .map(|r| boundary_overshoot_compare(&x, r.n))
        .collect::<Result<Vec<CompactionRow>, _>>()
        .or_usage("boundary report")?;
    out.create(args)?;
    write_compaction_csv(&out.path("compaction.csv"), &rows).or_usage("writing compaction.csv")?;
    write_compaction_csv(&out.path("boundary.csv"), &boundary).or_usage("writing boundary.csv")?;

    let mut columns = Vec::new();
    let mut header = vec!["i".to_string(), "original".to_string()];
    for r in &rows {
        for (kind, tag) in [(TransformKind::Dct, "dct"), (TransformKind::Dft, "dft")] {
            columns.push(reconstruct_truncated(&x, r.n, kind).or_usage("reconstruction")?.0);
            header.push(format!("{tag}_n{}", r.n));
        }
    }
    let mut w = csv::Writer::from_path(out.path("reconstructions.csv")).or_usage("writing reconstructions.csv")?;
    w.write_record(&header).or_usage("writing reconstructions.csv")?;
    for i in 0..x.len() {
        let mut rec = vec![i.to_string(), format!("{:.12e}", x.values()[i])];
        rec.extend(columns.iter().map(|c| format!("{:.12e}", c.values()[i])));
        w.write_record(&rec).or_usage("writing reconstructions.csv")?;
    }
    w.flush().or_usage("writing reconstructions.csv")?;

    println!("{:>4} {:>14} {:>14} {:>14} {:>14}", "n", "dct_err", "dft_err", "dct_edge", "dft_edge");
    for (r, b) in rows.iter().zip(&boundary) {
        println!("{:>4} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}", r.n, r.dct_err, r.dft_err, b.dct_err, b.dft_err);
    }
    Ok(())
}
