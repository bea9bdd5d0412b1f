//! Densities of non-cyclic elements in `M(V)_U` and `GL(V)_U`, by exact
//! enumeration or Monte Carlo sampling, checked against [`crate::counting`].

mod exact;
mod mc;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::{
    bigint_serde, check_instance, int, np_bounds, parse_decimal, parse_fraction, rational_serde, to_decimal_string,
    to_fraction_string, BoundsReport, Rational, DECIMAL_DIGITS,
};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matspace::{Mode, StabMat};

pub use exact::{enumerate_exact, enumerate_exact_with, reduced_work, EnumStrategy, ExactOptions, DEFAULT_BUDGET};
pub use mc::{monte_carlo, wilson_interval, McOptions};

/// Which of the mutually exclusive cases an element of `M(V)_U` falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Cyclic,
    /// `A` non-cyclic.
    CaseI,
    /// `A` cyclic, `B` non-cyclic.
    CaseII,
    /// `A`, `B` cyclic, `X` non-cyclic.
    CaseIii,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Cyclic => "cyclic",
            Class::CaseI => "case_i",
            Class::CaseII => "case_ii",
            Class::CaseIii => "case_iii",
        })
    }
}

pub fn classify(s: &StabMat) -> Class {
    // X cyclic forces A and B cyclic, so test the whole matrix first.
    if s.embed().is_cyclic().expect("square") {
        Class::Cyclic
    } else if !s.a().is_cyclic().expect("square") {
        Class::CaseI
    } else if !s.b().is_cyclic().expect("square") {
        Class::CaseII
    } else {
        Class::CaseIii
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte_carlo",
        })
    }
}

/// A proportion: exact, or a sample frequency with a confidence interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "EstimateText", try_from = "EstimateText")]
pub struct Estimate {
    pub value: Rational,
    /// `(low, high)`, already rounded outwards to [`DECIMAL_DIGITS`] digits.
    pub ci: Option<(Rational, Rational)>,
}

impl Estimate {
    pub fn exact(value: Rational) -> Self {
        Estimate { value, ci: None }
    }

    /// Smallest and largest values consistent with the estimate.
    pub fn range(&self) -> (&Rational, &Rational) {
        match &self.ci {
            Some((lo, hi)) => (lo, hi),
            None => (&self.value, &self.value),
        }
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct EstimateText {
    value: String,
    decimal: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ci_low: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ci_high: Option<String>,
}

impl From<Estimate> for EstimateText {
    fn from(e: Estimate) -> Self {
        let dec = |x: &Rational| to_decimal_string(x, DECIMAL_DIGITS);
        EstimateText {
            value: to_fraction_string(&e.value),
            decimal: dec(&e.value),
            ci_low: e.ci.as_ref().map(|c| dec(&c.0)),
            ci_high: e.ci.as_ref().map(|c| dec(&c.1)),
        }
    }
}

impl TryFrom<EstimateText> for Estimate {
    type Error = Error;

    fn try_from(t: EstimateText) -> Result<Self> {
        let ci = match (t.ci_low, t.ci_high) {
            (Some(lo), Some(hi)) => Some((parse_decimal(&lo)?, parse_decimal(&hi)?)),
            (None, None) => None,
            _ => return Err(Error::Parse("confidence interval needs both ends".into())),
        };
        Ok(Estimate { value: parse_fraction(&t.value)?, ci })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The bound carries no information (an upper bound >= 1 or a lower bound <= 0).
    Vacuous,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
            Verdict::NotApplicable => "not_applicable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// e.g. `theorem_lower`, `pi3_upper`.
    pub name: String,
    /// The proportion being bounded: `pi`, `pi1`, `pi2` or `pi3`.
    pub target: String,
    pub side: Side,
    #[serde(with = "rational_serde")]
    pub bound: Rational,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    pub r: usize,
    pub q: u64,
    /// Field and modulus, e.g. `F_4 = F_2[z]/(1+z+z^2)`.
    pub field: String,
    pub mode: Mode,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<EnumStrategy>,
    /// Size of the sample space (exact) or number of trials.
    #[serde(with = "bigint_serde")]
    pub total: BigInt,
    #[serde(with = "bigint_serde")]
    pub noncyclic: BigInt,
    #[serde(with = "bigint_serde")]
    pub n1: BigInt,
    #[serde(with = "bigint_serde")]
    pub n2: BigInt,
    #[serde(with = "bigint_serde")]
    pub n3: BigInt,
    pub pi: Estimate,
    pub pi1: Estimate,
    pub pi2: Estimate,
    pub pi3: Estimate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_level: Option<f64>,
    pub bounds: BoundsReport,
    pub verdict: Vec<BoundCheck>,
}

impl DensityReport {
    /// True if some applicable, non-vacuous bound is violated.
    pub fn any_failure(&self) -> bool {
        self.verdict.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.verdict.iter().find(|c| c.name == name)
    }

    fn estimate(&self, target: &str) -> &Estimate {
        match target {
            "pi" => &self.pi,
            "pi1" => &self.pi1,
            "pi2" => &self.pi2,
            "pi3" => &self.pi3,
            _ => unreachable!("unknown target {target}"),
        }
    }
}

/// Assembles a report from case counts out of `total`, then fills in bounds and verdicts.
#[allow(clippy::too_many_arguments)]
fn build_report(
    n: usize,
    r: usize,
    field: &FieldSpec,
    mode: Mode,
    method: Method,
    total: BigInt,
    counts: [BigInt; 3],
    estimates: Option<[Estimate; 4]>,
) -> Result<DensityReport> {
    let q = field.q() as u64;
    let [n1, n2, n3] = counts;
    let noncyclic = &n1 + &n2 + &n3;
    let [pi, pi1, pi2, pi3] = estimates.unwrap_or_else(|| {
        let p = |k: &BigInt| Estimate::exact(Rational::new(k.clone(), total.clone()));
        [p(&noncyclic), p(&n1), p(&n2), p(&n3)]
    });
    let mut report = DensityReport {
        n,
        r,
        q,
        field: field.describe(),
        mode,
        method,
        strategy: None,
        total,
        noncyclic,
        n1,
        n2,
        n3,
        pi,
        pi1,
        pi2,
        pi3,
        seed: None,
        trials: None,
        ci_level: None,
        bounds: BoundsReport::new(n, r, q)?,
        verdict: Vec::new(),
    };
    report.verdict = check_bounds(&report);
    Ok(report)
}

/// Compares the report's proportions with every applicable bound. Exact
/// reports compare exactly; Monte Carlo reports fail a bound only when the
/// whole confidence interval lies on the wrong side of it. Bounds are stated
/// for the algebra, so group-mode reports get `not_applicable` throughout.
pub fn check_bounds(report: &DensityReport) -> Vec<BoundCheck> {
    let (n, r, q) = (report.n, report.r, report.q);
    let b = &report.bounds;
    let (np1_lo, np1_hi) = np_bounds(r, q).expect("validated instance");
    let (np2_lo, np2_hi) = np_bounds(n - r, q).expect("validated instance");
    let pi2_lo = (int(1) - &np1_hi) * &np2_lo;
    // A 1x1 block is always cyclic, so pi1 (r = 1) or pi2 (n - r = 1) is
    // identically zero and its (0, 0) bounds are an equality check.
    let (z1, z2) = (r == 1, n - r == 1);
    let specs: [(&str, &str, Side, Rational, bool); 8] = [
        ("theorem_lower", "pi", Side::Lower, b.theorem_lower.clone(), false),
        ("theorem_upper", "pi", Side::Upper, b.theorem_upper.clone(), false),
        ("pi1_lower", "pi1", Side::Lower, np1_lo, z1),
        ("pi1_upper", "pi1", Side::Upper, np1_hi, z1),
        ("pi2_lower", "pi2", Side::Lower, pi2_lo, z2),
        ("pi2_upper", "pi2", Side::Upper, np2_hi, z2),
        ("pi3_lower", "pi3", Side::Lower, b.pi3_lower.clone(), false),
        ("pi3_upper", "pi3", Side::Upper, b.pi3_upper.clone(), false),
    ];
    specs
        .into_iter()
        .map(|(name, target, side, bound, zero)| {
            let verdict = if report.mode == Mode::Group {
                Verdict::NotApplicable
            } else {
                judge(report.estimate(target), side, &bound, zero)
            };
            BoundCheck { name: name.into(), target: target.into(), side, bound, verdict }
        })
        .collect()
}

fn judge(est: &Estimate, side: Side, bound: &Rational, identically_zero: bool) -> Verdict {
    let (lo, hi) = est.range();
    match side {
        Side::Lower if *bound <= int(0) && !identically_zero => Verdict::Vacuous,
        Side::Upper if *bound >= int(1) => Verdict::Vacuous,
        Side::Lower if hi < bound => Verdict::Fail,
        Side::Upper if lo > bound => Verdict::Fail,
        _ => Verdict::Pass,
    }
}

/// Grid of instances `(n, r, q)`; `rs = None` means every `0 < r < n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grid {
    pub ns: Vec<usize>,
    pub rs: Option<Vec<usize>>,
    pub qs: Vec<u64>,
}

impl Grid {
    /// Grid points in `n`, then `r`, then `q` order; `r >= n` is skipped.
    pub fn points(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for &n in &self.ns {
            let rs: Vec<usize> = match &self.rs {
                Some(rs) => rs.iter().copied().filter(|&r| r > 0 && r < n).collect(),
                None => (1..n).collect(),
            };
            for r in rs {
                for &q in &self.qs {
                    out.push((n, r, q));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum SweepMethod {
    Exact(ExactOptions),
    MonteCarlo(McOptions),
}

#[derive(Clone, Debug)]
pub struct SweepItem {
    pub n: usize,
    pub r: usize,
    pub q: u64,
    pub result: Result<DensityReport>,
}

/// Runs every grid point, handing each result to `emit` as soon as it is
/// ready. A failing point does not stop the sweep.
pub fn sweep_with<F: FnMut(&SweepItem)>(points: &[(usize, usize, u64)], mode: Mode, method: &SweepMethod, mut emit: F) -> Vec<SweepItem> {
    let mut items = Vec::with_capacity(points.len());
    for &(n, r, q) in points {
        let result = FieldSpec::of_order(q).and_then(|field| match method {
            SweepMethod::Exact(opts) => enumerate_exact_with(n, r, &field, mode, opts),
            SweepMethod::MonteCarlo(opts) => monte_carlo(n, r, &field, mode, opts),
        });
        let item = SweepItem { n, r, q, result };
        emit(&item);
        items.push(item);
    }
    items
}

pub fn sweep(grid: &Grid, mode: Mode, method: &SweepMethod) -> Vec<SweepItem> {
    sweep_with(&grid.points(), mode, method, |_| {})
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Precondition("workers must be at least 1".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub(crate) fn validate(n: usize, r: usize, field: &FieldSpec) -> Result<()> {
    check_instance(n, r, field.q() as u64)
}

/// Fixed CSV header; one row per report.
pub const CSV_COLUMNS: [&str; 14] =
    ["n", "r", "q", "mode", "method", "pi", "pi1", "pi2", "pi3", "lower", "upper", "verdicts", "seed", "trials"];

impl DensityReport {
    /// Row matching [`CSV_COLUMNS`]; proportions as decimals, verdicts as
    /// `name=verdict` pairs joined by `;`.
    pub fn csv_row(&self) -> Vec<String> {
        let dec = |x: &Rational| to_decimal_string(x, DECIMAL_DIGITS);
        let verdicts: Vec<String> = self.verdict.iter().map(|c| format!("{}={}", c.name, c.verdict)).collect();
        vec![
            self.n.to_string(),
            self.r.to_string(),
            self.q.to_string(),
            self.mode.to_string(),
            self.method.to_string(),
            dec(&self.pi.value),
            dec(&self.pi1.value),
            dec(&self.pi2.value),
            dec(&self.pi3.value),
            dec(&self.bounds.theorem_lower),
            dec(&self.bounds.theorem_upper),
            verdicts.join(";"),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.trials.map(|t| t.to_string()).unwrap_or_default(),
        ]
    }
}
