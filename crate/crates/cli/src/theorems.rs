use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use fecam_core::spectral::{
    dct_forward, dct_inverse, dct_matrix, dct_via_even_dft, Normalization, Signal, Spectrum,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::outcome::Failure;
use crate::output::OutputDir;
use crate::CmdResult;

#[derive(Debug, Clone, Args, Serialize)]
pub struct TheoremArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 512)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Deliberately break the inverse transform to confirm the suite notices.
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Use the `l > 0` weight for the DC term of the inverse.
    SkipDcScale,
}

const MIN_LEN: usize = 4;

#[derive(Debug, Serialize)]
struct CheckResult {
    property: &'static str,
    cases: usize,
    worst_error: f64,
    /// Length of the signal or matrix that produced `worst_error`.
    worst_len: usize,
    tolerance: f64,
    passed: bool,
}

impl CheckResult {
    fn new(property: &'static str, tolerance: f64, errors: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut cases = 0;
        let (mut worst_len, mut worst_error) = (0, 0.0f64);
        for (len, e) in errors {
            cases += 1;
            // NaN counts as worst
            if !(e <= worst_error) {
                worst_error = e;
                worst_len = len;
            }
        }
        Self {
            property,
            cases,
            worst_error,
            worst_len,
            tolerance,
            passed: cases > 0 && worst_error < tolerance,
        }
    }
}

fn random_signal(rng: &mut ChaCha8Rng, max_len: usize) -> Signal {
    let len = rng.gen_range(MIN_LEN..=max_len);
    let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
    let offset = rng.gen_range(-1.0..1.0) * scale;
    Signal::new((0..len).map(|_| offset + scale * rng.gen_range(-1.0..1.0)).collect())
        .expect("finite random signal")
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn inverse(spec: &Spectrum, fault: Option<Fault>) -> Signal {
    let Some(Fault::SkipDcScale) = fault else {
        return dct_inverse(spec).expect("valid spectrum");
    };
    let len = spec.len();
    let n = len as f64;
    // every coefficient gets the l > 0 weight, including l = 0
    let scale = match spec.normalization {
        Normalization::Unnormalized => 2.0 / n,
        Normalization::Orthonormal => (2.0 / n).sqrt(),
    };
    let values = (0..len)
        .map(|i| {
            (0..len)
                .map(|l| scale * spec.coefficients[l] * (PI * l as f64 * (i as f64 + 0.5) / n).cos())
                .sum()
        })
        .collect();
    Signal::new(values).expect("finite reconstruction")
}

pub fn run(args: &TheoremArgs, out: &OutputDir) -> CmdResult {
    if args.trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    if args.max_len < MIN_LEN {
        return Err(Failure::usage(format!("--max-len must be at least {MIN_LEN}")));
    }
    out.create(args)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut results = Vec::new();

    // f_0 of the unnormalized DCT is L times the mean; scaled by sum |x|
    // so near-zero means do not inflate the relative error.
    let signals: Vec<Signal> = (0..args.trials).map(|_| random_signal(&mut rng, args.max_len)).collect();
    results.push(CheckResult::new(
        "dc_equals_len_times_mean",
        1e-12,
        signals.iter().map(|x| {
            let f0 = dct_forward(x, Normalization::Unnormalized).expect("dct").coefficients[0];
            let len = x.len() as f64;
            let target = len * (x.values().iter().sum::<f64>() / len);
            let scale: f64 = x.values().iter().map(|v| v.abs()).sum();
            (x.len(), (f0 - target).abs() / scale.max(f64::MIN_POSITIVE))
        }),
    ));

    let even_cases = args.trials.min(100);
    results.push(CheckResult::new(
        "dct_equals_even_extension_dft",
        1e-9,
        signals.iter().take(even_cases).map(|x| {
            let direct = dct_forward(x, Normalization::Unnormalized).expect("dct");
            let via = dct_via_even_dft(x).expect("dft");
            let err = direct
                .coefficients
                .iter()
                .zip(&via)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            (x.len(), err / max_abs(&direct.coefficients).max(1.0))
        }),
    ));

    for (property, norm) in [
        ("round_trip_unnormalized", Normalization::Unnormalized),
        ("round_trip_orthonormal", Normalization::Orthonormal),
    ] {
        results.push(CheckResult::new(
            property,
            1e-9,
            signals.iter().map(|x| {
                let back = inverse(&dct_forward(x, norm).expect("dct"), args.inject_fault);
                (x.len(), x.l2_distance(&back) / (max_abs(x.values()).max(1.0) * (x.len() as f64).sqrt()))
            }),
        ));
    }

    let mut lengths: Vec<usize> = std::iter::successors(Some(MIN_LEN), |l| Some(l * 2))
        .take_while(|&l| l <= args.max_len)
        .collect();
    lengths.push(args.max_len);
    lengths.extend((0..8).map(|_| rng.gen_range(MIN_LEN..=args.max_len)));
    lengths.sort_unstable();
    lengths.dedup();
    results.push(CheckResult::new(
        "orthonormal_rows",
        1e-10,
        lengths.iter().map(|&len| {
            let m = dct_matrix(len, Normalization::Orthonormal).expect("matrix");
            let mut worst = 0.0f64;
            for a in 0..len {
                for b in a..len {
                    let dot: f64 = m.forward_row(a).iter().zip(m.forward_row(b)).map(|(x, y)| x * y).sum();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((dot - expected).abs());
                }
            }
            (len, worst)
        }),
    ));

    println!(
        "trials={} max_len={} seed={}{}",
        args.trials,
        args.max_len,
        args.seed,
        if args.inject_fault.is_some() { " (fault injected)" } else { "" }
    );
    println!("{:<32} {:>6} {:>12} {:>8} {:>10}  status", "property", "cases", "worst_error", "at_len", "tolerance");
    for r in &results {
        println!(
            "{:<32} {:>6} {:>12.3e} {:>8} {:>10.0e}  {}",
            r.property,
            r.cases,
            r.worst_error,
            r.worst_len,
            r.tolerance,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    #[derive(Serialize)]
    struct Report<'a> {
        trials: usize,
        max_len: usize,
        seed: u64,
        checks: &'a [CheckResult],
    }
    out.write_json(
        "theorems.json",
        &Report { trials: args.trials, max_len: args.max_len, seed: args.seed, checks: &results },
    )?;

    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} (worst error {:.3e} at length {})", r.property, r.worst_error, r.worst_len))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::property(format!("failing properties: {}", failed.join("; "))))
    }
}
