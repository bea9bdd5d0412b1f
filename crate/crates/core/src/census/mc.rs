use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::counting::{from_f64, round_sig, Rational, Rounding, DECIMAL_DIGITS};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matspace::{Mode, StabMat};

use super::{build_report, classify, validate, with_workers, Class, DensityReport, Estimate, Method};

#[derive(Clone, Debug)]
pub struct McOptions {
    pub trials: u64,
    pub seed: u64,
    /// Two-sided confidence level of the Wilson intervals, in `(0, 1)`.
    pub ci_level: f64,
    /// `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { trials: 100_000, seed: 0, ci_level: 0.99, workers: None }
    }
}

/// Trial `i` draws from its own ChaCha stream, so results do not depend on
/// how trials are split between workers.
fn trial_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Samples `trials` uniform elements of `M(V)_U` or `GL(V)_U` and reports
/// the case frequencies with Wilson score intervals.
pub fn monte_carlo(n: usize, r: usize, field: &FieldSpec, mode: Mode, opts: &McOptions) -> Result<DensityReport> {
    validate(n, r, field)?;
    if opts.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if !(opts.ci_level > 0.0 && opts.ci_level < 1.0) {
        return Err(Error::Precondition(format!("ci_level must lie in (0, 1), got {}", opts.ci_level)));
    }
    let counts = with_workers(opts.workers, || {
        (0..opts.trials)
            .into_par_iter()
            .fold(
                || [0u64; 3],
                |mut acc, i| {
                    let s = StabMat::sample(n, r, field, &mut trial_rng(opts.seed, i), mode).expect("validated");
                    match classify(&s) {
                        Class::Cyclic => {}
                        Class::CaseI => acc[0] += 1,
                        Class::CaseII => acc[1] += 1,
                        Class::CaseIii => acc[2] += 1,
                    }
                    acc
                },
            )
            .reduce(|| [0u64; 3], |x, y| [x[0] + y[0], x[1] + y[1], x[2] + y[2]])
    })?;
    let trials = opts.trials;
    let est = |k: u64| {
        let (lo, hi) = wilson_interval(k, trials, opts.ci_level);
        let value = Rational::new(BigInt::from(k), BigInt::from(trials));
        let lo = round_sig(&from_f64(lo), DECIMAL_DIGITS, Rounding::Down).min(value.clone());
        let hi = round_sig(&from_f64(hi), DECIMAL_DIGITS, Rounding::Up).max(value.clone());
        Estimate { value, ci: Some((lo, hi)) }
    };
    let total = counts.iter().sum();
    let estimates = [est(total), est(counts[0]), est(counts[1]), est(counts[2])];
    let mut report = build_report(
        n,
        r,
        field,
        mode,
        Method::MonteCarlo,
        BigInt::from(trials),
        counts.map(BigInt::from),
        Some(estimates),
    )?;
    report.seed = Some(opts.seed);
    report.trials = Some(trials);
    report.ci_level = Some(opts.ci_level);
    Ok(report)
}

/// Wilson score interval for `k` successes in `n` trials, clamped to `[0, 1]`.
pub fn wilson_interval(k: u64, n: u64, level: f64) -> (f64, f64) {
    let z = Normal::new(0.0, 1.0).unwrap().inverse_cdf(1.0 - (1.0 - level) / 2.0);
    let (kf, nf) = (k as f64, n as f64);
    let p = kf / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}
