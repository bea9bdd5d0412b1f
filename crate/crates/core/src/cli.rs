//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a bound or identity
//! failed, 3 an exact enumeration exceeded its budget.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::census::{
    enumerate_exact_with, monte_carlo, sweep_with, DensityReport, EnumStrategy, ExactOptions, Grid, McOptions, Method,
    SweepItem, SweepMethod, CSV_COLUMNS, DEFAULT_BUDGET,
};
use crate::counting::{
    coprime_avoiding_lower, coprime_avoiding_lower_exact, coprime_count, coprime_count_recurrence, coprime_pairs_brute,
    int, table_series, BoundsReport, Rational, RationalText,
};
use crate::cyclictest::{parse_order, probe, GeneratedAlgebra, ProbeOptions};
use crate::error::Error;
use crate::gf::{prime_power, FieldSpec};
use crate::matspace::Mode;
use crate::poly::irr_enumerate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BOUND_FAILURE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable holding the default `--workers` value.
pub const WORKERS_ENV: &str = "CYCLIC_DENSITY_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "cyclic-density", version, about = "Density of cyclic matrices in maximal reducible matrix algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for enumeration and sampling.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate every closed-form bound at (n, r, q).
    Bounds(Instance),
    /// Count non-cyclic elements exactly.
    Enumerate {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        exact: ExactArgs,
        #[arg(long, value_enum, default_value_t = Mode::Algebra)]
        mode: Mode,
    },
    /// Estimate the non-cyclic proportion by sampling.
    Estimate {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Mode::Algebra)]
        mode: Mode,
    },
    /// Run enumerate or estimate over a grid; one JSON record per line.
    Sweep {
        /// Dimensions, e.g. `2..5` or `2,4,6`.
        #[arg(long)]
        n: String,
        /// Subspace dimensions; default every 0 < r < n.
        #[arg(long)]
        r: Option<String>,
        /// Field orders, e.g. `2,3,2^2`; ranges keep only prime powers.
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Mode::Algebra)]
        mode: Mode,
        #[command(flatten)]
        exact: ExactArgs,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Compare coprime-pair counts: closed form, recurrence, brute force.
    Lemma {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_parser = parse_order)]
        q: u64,
        /// Also check the lower bound for pairs avoiding each irreducible of degree d.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Search an algebra given by generators for a cyclic pair or an invariant subspace.
    Probe {
        /// Generator file: `n q` on the first line, then one matrix per line.
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        max_tries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random-walk length; default 2n.
        #[arg(long)]
        walk_length: Option<usize>,
    },
    /// Print the limiting cyclic proportions as series in 1/q.
    Series {
        /// Subspace dimension 1..7; default all rows.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Algebra)]
        mode: Mode,
        /// Evaluate at this q.
        #[arg(long, value_parser = parse_order)]
        q: Option<u64>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    /// Field order as an integer or `p^k`.
    #[arg(long, value_parser = parse_order)]
    pub q: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ExactArgs {
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = EnumStrategy::Reduced)]
    pub strategy: EnumStrategy,
}

#[derive(Args, Debug, Clone)]
pub struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.99)]
    pub ci_level: f64,
}

/// Parses the arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Precondition(format!("cannot write output: {e}"))
}

struct Out {
    w: Box<dyn Write>,
}

impl Out {
    fn open(path: &Option<PathBuf>) -> Result<Self, Error> {
        let w: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err)?)),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Out { w })
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Error> {
        serde_json::to_writer_pretty(&mut self.w, value).map_err(io_err)?;
        writeln!(self.w).map_err(io_err)
    }

    fn json_line<T: Serialize>(&mut self, value: &T) -> Result<(), Error> {
        serde_json::to_writer(&mut self.w, value).map_err(io_err)?;
        writeln!(self.w).map_err(io_err)?;
        self.w.flush().map_err(io_err)
    }

    fn csv(&mut self, rows: &[Vec<String>]) -> Result<(), Error> {
        let mut wtr = csv::Writer::from_writer(&mut self.w);
        for row in rows {
            wtr.write_record(row).map_err(io_err)?;
        }
        wtr.flush().map_err(io_err)
    }
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    let mut out = Out::open(&cli.output)?;
    let code = match &cli.command {
        Command::Bounds(inst) => cmd_bounds(inst, cli.format, &mut out)?,
        Command::Enumerate { inst, exact, mode } => {
            let field = FieldSpec::of_order(inst.q)?;
            let rep = enumerate_exact_with(inst.n, inst.r, &field, *mode, &exact_options(exact, cli.workers))?;
            emit_report(&rep, cli.format, &mut out)?
        }
        Command::Estimate { inst, mc, mode } => {
            let field = FieldSpec::of_order(inst.q)?;
            let rep = monte_carlo(inst.n, inst.r, &field, *mode, &mc_options(mc, cli.workers))?;
            emit_report(&rep, cli.format, &mut out)?
        }
        Command::Sweep { n, r, q, method, mode, exact, mc } => {
            let grid = Grid { ns: parse_usize_list(n)?, rs: r.as_deref().map(parse_usize_list).transpose()?, qs: parse_q_list(q)? };
            let method = match method {
                Method::Exact => SweepMethod::Exact(exact_options(exact, cli.workers)),
                Method::MonteCarlo => SweepMethod::MonteCarlo(mc_options(mc, cli.workers)),
            };
            cmd_sweep(&grid, *mode, &method, cli.format, &mut out)?
        }
        Command::Lemma { r, s, q, d } => cmd_lemma(*r, *s, *q, *d, cli.format, &mut out)?,
        Command::Probe { file, max_tries, seed, walk_length } => {
            let alg = GeneratedAlgebra::from_file(file)?;
            let rep = probe(&alg, &ProbeOptions { max_tries: *max_tries, seed: *seed, walk_length: *walk_length })?;
            let text = rep.to_text(alg.field());
            match cli.format {
                Format::Json => out.json(&text)?,
                Format::Csv => out.csv(&[
                    vec!["verdict".into(), "witness_dim".into(), "witness".into(), "vector".into(), "matrix".into(), "tries_used".into(), "seed".into()],
                    vec![
                        serde_json::to_value(text.verdict).unwrap().as_str().unwrap().to_string(),
                        text.witness_dim.map(|d| d.to_string()).unwrap_or_default(),
                        text.witness.clone().unwrap_or_default(),
                        text.vector.clone().unwrap_or_default(),
                        text.matrix.clone().unwrap_or_default(),
                        text.tries_used.to_string(),
                        text.seed.to_string(),
                    ],
                ])?,
            }
            EXIT_OK
        }
        Command::Series { r, mode, q } => cmd_series(*r, *mode, *q, cli.format, &mut out)?,
    };
    Ok(code)
}

fn exact_options(a: &ExactArgs, workers: Option<usize>) -> ExactOptions {
    ExactOptions { budget: a.budget, strategy: a.strategy, workers }
}

fn mc_options(a: &McArgs, workers: Option<usize>) -> McOptions {
    McOptions { trials: a.trials, seed: a.seed, ci_level: a.ci_level, workers }
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    field: String,
    #[serde(flatten)]
    report: &'a BoundsReport,
}

fn cmd_bounds(inst: &Instance, format: Format, out: &mut Out) -> Result<i32, Error> {
    let field = FieldSpec::of_order(inst.q)?;
    let rep = BoundsReport::new(inst.n, inst.r, inst.q)?;
    match format {
        Format::Json => out.json(&BoundsOutput { field: field.describe(), report: &rep })?,
        Format::Csv => {
            let row = |name: &str, x: &Rational, vacuous: bool| {
                let t = RationalText::from(x);
                vec![name.to_string(), t.value, t.decimal, vacuous.to_string()]
            };
            out.csv(&[
                vec!["name".into(), "value".into(), "decimal".into(), "vacuous".into()],
                row("theorem_lower", &rep.theorem_lower, false),
                row("theorem_upper", &rep.theorem_upper, rep.theorem_upper_vacuous),
                row("pi3_lower", &rep.pi3_lower, rep.pi3_lower <= int(0)),
                row("pi3_lower_uniform", &rep.pi3_lower_uniform, rep.pi3_lower_uniform <= int(0)),
                row("pi3_upper", &rep.pi3_upper, rep.pi3_upper >= int(1)),
                row("pi3_upper_closed", &rep.pi3_upper_closed, rep.pi3_upper_closed >= int(1)),
                row("np_lower", &rep.np_lower, false),
                row("np_upper", &rep.np_upper, false),
            ])?
        }
    }
    Ok(EXIT_OK)
}

fn emit_report(rep: &DensityReport, format: Format, out: &mut Out) -> Result<i32, Error> {
    match format {
        Format::Json => out.json(rep)?,
        Format::Csv => out.csv(&[CSV_COLUMNS.iter().map(|s| s.to_string()).collect(), rep.csv_row()])?,
    }
    Ok(if rep.any_failure() { EXIT_BOUND_FAILURE } else { EXIT_OK })
}

#[derive(Serialize)]
struct SweepError {
    n: usize,
    r: usize,
    q: u64,
    error: String,
    budget_exceeded: bool,
}

fn cmd_sweep(grid: &Grid, mode: Mode, method: &SweepMethod, format: Format, out: &mut Out) -> Result<i32, Error> {
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::Precondition("the grid has no points with 0 < r < n".into()));
    }
    if format == Format::Csv {
        out.csv(&[CSV_COLUMNS.iter().map(|s| s.to_string()).collect()])?;
    }
    let mut write_err = None;
    let items = sweep_with(&points, mode, method, |item: &SweepItem| {
        let res = match (&item.result, format) {
            (Ok(rep), Format::Json) => out.json_line(rep),
            (Ok(rep), Format::Csv) => out.csv(&[rep.csv_row()]),
            (Err(e), Format::Json) => out.json_line(&SweepError {
                n: item.n,
                r: item.r,
                q: item.q,
                error: e.to_string(),
                budget_exceeded: matches!(e, Error::BudgetExceeded { .. }),
            }),
            (Err(e), Format::Csv) => {
                let mut row = vec![String::new(); CSV_COLUMNS.len()];
                row[0] = item.n.to_string();
                row[1] = item.r.to_string();
                row[2] = item.q.to_string();
                row[11] = format!("error={e}");
                out.csv(&[row])
            }
        };
        if let Err(e) = res {
            write_err.get_or_insert(e);
        }
    });
    if let Some(e) = write_err {
        return Err(e);
    }
    let failed = items.iter().any(|i| i.result.as_ref().is_ok_and(DensityReport::any_failure));
    let budget = items.iter().any(|i| matches!(i.result, Err(Error::BudgetExceeded { .. })));
    let other = items.iter().any(|i| i.result.as_ref().is_err_and(|e| !matches!(e, Error::BudgetExceeded { .. })));
    Ok(if failed {
        EXIT_BOUND_FAILURE
    } else if budget {
        EXIT_BUDGET
    } else if other {
        EXIT_USAGE
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct LemmaReport {
    r: usize,
    s: usize,
    q: u64,
    field: String,
    closed_form: String,
    recurrence: String,
    brute_force: String,
    agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    avoiding: Option<AvoidingReport>,
}

#[derive(Serialize)]
struct AvoidingReport {
    d: usize,
    /// Floored and clamped at zero.
    lower_bound: String,
    lower_bound_exact: RationalText,
    per_f: Vec<PerF>,
    holds: bool,
}

#[derive(Serialize)]
struct PerF {
    f: String,
    count: String,
}

fn cmd_lemma(r: usize, s: usize, q: u64, d: Option<usize>, format: Format, out: &mut Out) -> Result<i32, Error> {
    let field = FieldSpec::of_order(q)?;
    let closed = coprime_count(r, s, q);
    let rec = coprime_count_recurrence(r, s, q);
    let brute = coprime_pairs_brute(r, s, &field, None)?;
    let agree = closed == rec && rec == brute;
    let avoiding = match d {
        None => None,
        Some(d) => {
            let bound = coprime_avoiding_lower(r, s, d, q)?;
            let exact = coprime_avoiding_lower_exact(r, s, d, q)?;
            let mut per_f = Vec::new();
            let mut holds = true;
            for f in irr_enumerate(d, &field)? {
                let count = coprime_pairs_brute(r, s, &field, Some(&f))?;
                holds &= count >= bound;
                per_f.push(PerF { f: f.to_string(), count: count.to_string() });
            }
            Some(AvoidingReport { d, lower_bound: bound.to_string(), lower_bound_exact: RationalText::from(&exact), per_f, holds })
        }
    };
    let ok = agree && avoiding.as_ref().is_none_or(|a| a.holds);
    let rep = LemmaReport {
        r,
        s,
        q,
        field: field.describe(),
        closed_form: closed.to_string(),
        recurrence: rec.to_string(),
        brute_force: brute.to_string(),
        agree,
        avoiding,
    };
    match format {
        Format::Json => out.json(&rep)?,
        Format::Csv => {
            let mut rows = vec![
                vec!["quantity".into(), "f".into(), "value".into()],
                vec!["closed_form".into(), String::new(), rep.closed_form.clone()],
                vec!["recurrence".into(), String::new(), rep.recurrence.clone()],
                vec!["brute_force".into(), String::new(), rep.brute_force.clone()],
            ];
            if let Some(a) = &rep.avoiding {
                rows.push(vec!["lower_bound".into(), String::new(), a.lower_bound.clone()]);
                for p in &a.per_f {
                    rows.push(vec!["avoiding_count".into(), p.f.clone(), p.count.clone()]);
                }
            }
            out.csv(&rows)?
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_BOUND_FAILURE })
}

#[derive(Serialize)]
struct SeriesOutput {
    r: usize,
    mode: Mode,
    coeffs: Vec<i64>,
    truncation: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    /// Cyclic proportion at `q`.
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<RationalText>,
    /// `1 - value`, the non-cyclic proportion.
    #[serde(skip_serializing_if = "Option::is_none")]
    noncyclic: Option<RationalText>,
}

fn cmd_series(r: Option<usize>, mode: Mode, q: Option<u64>, format: Format, out: &mut Out) -> Result<i32, Error> {
    let rows: Vec<usize> = match r {
        Some(r) => vec![r],
        None => (1..=7).collect(),
    };
    let mut items = Vec::new();
    for r in rows {
        let s = table_series(r, mode)?;
        let value = q.map(|q| s.eval(q));
        items.push(SeriesOutput {
            r,
            mode,
            coeffs: s.coeffs.clone(),
            truncation: s.truncation,
            q,
            noncyclic: value.as_ref().map(|v| RationalText::from(&(int(1) - v))),
            value: value.as_ref().map(RationalText::from),
        });
    }
    match format {
        Format::Json => out.json(&items)?,
        Format::Csv => {
            let mut rows = vec![["r", "mode", "coeffs", "truncation", "q", "value", "noncyclic"].map(String::from).to_vec()];
            for it in &items {
                rows.push(vec![
                    it.r.to_string(),
                    it.mode.to_string(),
                    it.coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
                    it.truncation.to_string(),
                    it.q.map(|q| q.to_string()).unwrap_or_default(),
                    it.value.as_ref().map(|v| v.decimal.clone()).unwrap_or_default(),
                    it.noncyclic.as_ref().map(|v| v.decimal.clone()).unwrap_or_default(),
                ]);
            }
            out.csv(&rows)?
        }
    }
    Ok(EXIT_OK)
}

/// `2..5`, `2,4,6` or a mix such as `2..4,7`; ranges are inclusive.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::Parse(format!("invalid list '{s}'"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

/// Like [`parse_usize_list`], but items may be written `p^k`; explicit items
/// must be prime powers, ranges keep only the prime powers they contain.
pub fn parse_q_list(s: &str) -> Result<Vec<u64>, Error> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        match part.split_once("..") {
            Some(_) => out.extend(
                parse_usize_list(part)?.into_iter().map(|q| q as u64).filter(|&q| prime_power(q).is_some()),
            ),
            None => out.push(parse_order(part)?),
        }
    }
    Ok(out)
}
