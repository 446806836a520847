//! Command-line front end: argument parsing, dispatch and output
//! rendering for the `adl` binary.
//!
//! Exit codes: 0 success, 1 failed check or computation error, 2 usage
//! error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{self, OutputFormat, RunConfig, Status};
use crate::asym::{compare, phi_table, Window};
use crate::combinatorics::{fubini, stirling1_unsigned, stirling2, t_coeff};
use crate::constants::{gamma_mn_closed, gamma_mn_contour, gamma_mn_oracle, CONTOUR_CUTOFF};
use crate::exact_sums::{duality_sweep, residue_series_limit, PrimeFn, ResidueFilter, SiftedSums};
use crate::hankel::truncation_decay_scan;
use crate::orders::{self, GrowthClass};
use crate::primesums::{
    asymptotic_fit, default_tail_cut, log_grid, mertens_series, FitBasis, MertensKind, PrimeSumProfile,
};
use crate::sieve::{SieveCache, SIEVE_HARD_MAX};

#[derive(Debug, Parser)]
#[command(name = "adl", version, about = "Sifted Möbius sums, their constants and asymptotics")]
pub struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Directory for cached sieve segments.
    #[arg(long, global = true, env = "ADL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Seed echoed in reports; no check is randomized.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact sifted sums, duality checks and residue-class series.
    #[command(subcommand)]
    Sums(SumsCmd),
    /// Mertens-type sums, G derivatives and asymptotic fits.
    #[command(subcommand)]
    Primesums(PrimesumsCmd),
    /// Derivatives of 1/Γ(−z) at positive integers.
    #[command(subcommand)]
    Constants(ConstantsCmd),
    /// Truncated Hankel contour integrals.
    #[command(subcommand)]
    Hankel(HankelCmd),
    /// Expansion coefficients and the asymptotic main term.
    #[command(subcommand)]
    Asym(AsymCmd),
    /// Growth-order comparisons.
    #[command(subcommand)]
    Orders(OrdersCmd),
    /// Stirling, T and Fubini tables.
    #[command(subcommand)]
    Comb(CombCmd),
    /// Run the acceptance suite.
    Acceptance(AcceptanceArgs),
}

#[derive(Debug, Subcommand)]
pub enum SumsCmd {
    /// M_{k,ω}(x, y).
    Mkw {
        #[arg(long, value_parser = parse_u64)]
        x: u64,
        #[arg(long, value_parser = parse_f64)]
        y: f64,
        #[arg(long)]
        k: u32,
        /// Restrict the least prime factor to l mod m (needs --l).
        #[arg(long, requires = "l")]
        m: Option<u64>,
        #[arg(long, requires = "m")]
        l: Option<u64>,
    },
    /// Both duality relations for every n <= max-n.
    Duality {
        #[arg(long, value_parser = parse_u64)]
        max_n: u64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<u32>,
        #[arg(long, value_enum, value_delimiter = ',')]
        f: Vec<PrimeFnArg>,
    },
    /// Partial sums of μ(n) binom(ω(n)−1,k−1)/n over p_1(n) ≡ l mod m.
    Residue {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', value_parser = parse_u64, required = true)]
        x_grid: Vec<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PrimeFnArg {
    Identity,
    FloorLog,
    OneModFour,
}

impl From<PrimeFnArg> for PrimeFn {
    fn from(a: PrimeFnArg) -> Self {
        match a {
            PrimeFnArg::Identity => PrimeFn::Identity,
            PrimeFnArg::FloorLog => PrimeFn::FloorLog,
            PrimeFnArg::OneModFour => PrimeFn::OneModFour,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum PrimesumsCmd {
    /// Mertens sums, continuation values and D_s^n G_i at one y.
    Profile {
        #[arg(long, value_parser = parse_f64)]
        y: f64,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_i: usize,
        /// Prime cut for tails; defaults to max(1e6, 100 y).
        #[arg(long, value_parser = parse_f64)]
        tail_cut: Option<f64>,
    },
    /// Least-squares fit of a Mertens sum in powers of log y.
    Fit {
        #[arg(long, default_value = "M")]
        kind: MertensKind,
        #[arg(long)]
        power: usize,
        #[arg(long, value_parser = parse_f64, default_value = "1e3")]
        y_min: f64,
        #[arg(long, value_parser = parse_f64, default_value = "1e7")]
        y_max: f64,
        #[arg(long, default_value_t = 17)]
        count: usize,
        /// Add (log log y)^j columns up to this degree.
        #[arg(long)]
        loglog_degree: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstantsCmd {
    /// Γ_{m,N} by closed form, finite difference and contour quadrature.
    Dump {
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HankelCmd {
    /// Truncation error of the Hankel integral against the closed form.
    Scan {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_f64, default_value = "10,20,30,40")]
        cutoffs: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct WindowArgs {
    #[arg(long, value_parser = parse_f64, default_value = "1")]
    pub y0: f64,
    #[arg(long, value_parser = parse_f64, default_value = "1")]
    pub power: f64,
    #[arg(long, value_parser = parse_f64, default_value = "0.1")]
    pub epsilon: f64,
}

impl From<WindowArgs> for Window {
    fn from(w: WindowArgs) -> Self {
        Window {
            y0: w.y0,
            power: w.power,
            epsilon: w.epsilon,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum AsymCmd {
    /// φ[i][j](y) with certified radii.
    Phi {
        #[arg(long, value_parser = parse_f64)]
        y: f64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Exact sums against the main term with N terms.
    Compare {
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_f64)]
        y: f64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_u64, required = true)]
        x_grid: Vec<u64>,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrdersCmd {
    /// Decide <_forall, <_exists and lower-set equality for f and g.
    Cmp {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CombCmd {
    /// Stirling numbers and T_{j,k}, or Fubini numbers.
    Dump {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "stirling")]
        table: CombTable,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CombTable {
    Stirling,
    Fubini,
}

#[derive(Debug, Clone, Args)]
pub struct AcceptanceArgs {
    /// Largest integer any criterion may sieve.
    #[arg(long, value_parser = parse_u64, default_value = "1e9")]
    pub sieve_ceiling: u64,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Run only these criteria (1 to 9), once, without the determinism rerun.
    #[arg(long, value_delimiter = ',')]
    pub criterion: Vec<u32>,
}

/// Parse an unsigned integer written plainly or as `1e6`.
pub fn parse_u64(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if f < 0.0 || f.fract() != 0.0 || f > 9.0e15 {
        return Err(format!("{s:?} is not a non-negative integer below 9e15"));
    }
    Ok(f as u64)
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Rendered output plus whether the check it reports passed.
struct Outcome {
    body: String,
    ok: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, ok: true }
    }
}

fn json_text<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// A table rendered as aligned text, CSV or a JSON array of objects.
/// Cells arrive as strings so integers never become doubles.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

enum Cell {
    /// serialized as a JSON string
    Int(String),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn int(v: impl ToString) -> Self {
        Self::Int(v.to_string())
    }

    fn plain(&self) -> String {
        match self {
            Self::Int(s) | Self::Text(s) => s.clone(),
            Self::Num(v) => format!("{v:.15e}"),
            Self::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Int(s) | Self::Text(s) => Value::String(s.clone()),
            Self::Num(v) => json!(v),
            Self::Bool(b) => Value::Bool(*b),
        }
    }
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, f: Format) -> anyhow::Result<String> {
        match f {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(self.header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect())
                    })
                    .collect();
                json_text(&rows)
            }
            Format::Csv | Format::Text => {
                let sep = if f == Format::Csv { "," } else { "  " };
                let mut out = self.header.join(sep) + "\n";
                for r in &self.rows {
                    out += &r.iter().map(Cell::plain).collect::<Vec<_>>().join(sep);
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] anyhow::Error),
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parse `args` (program name first), run, write the output and return
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.body.as_bytes());
            i32::from(!o.ok)
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(CliError::Run(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let fmt = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let cache = cli.cache_dir.as_ref().map(SieveCache::new);
    match &cli.command {
        Command::Sums(c) => sums(c, fmt, cache),
        Command::Primesums(c) => primesums(c, fmt),
        Command::Constants(c) => constants(c, fmt),
        Command::Hankel(c) => hankel(c, fmt),
        Command::Asym(c) => asym(c, fmt, cache),
        Command::Orders(c) => orders_cmd(c, fmt),
        Command::Comb(c) => comb(c, fmt),
        Command::Acceptance(a) => acceptance_cmd(a, cli, fmt),
    }
}

fn sums(c: &SumsCmd, fmt: Format, cache: Option<SieveCache>) -> Result<Outcome, CliError> {
    match c {
        SumsCmd::Mkw { x, y, k, m, l } => {
            if *x > SIEVE_HARD_MAX {
                return Err(usage(format!("x = {x} exceeds the sieve maximum {SIEVE_HARD_MAX}")));
            }
            let filter = match (m, l) {
                (Some(m), Some(l)) => Some(ResidueFilter::new(*m, *l).map_err(usage)?),
                _ => None,
            };
            let v = SiftedSums::with_cache(*x, cache)
                .mkw_grid(&[*x], *y, *k, filter)
                .map_err(anyhow::Error::from)?[0];
            let body = match fmt {
                Format::Text => format!("{v}\n"),
                Format::Json => json_text(&json!({
                    "x": x.to_string(), "y": y, "k": k.to_string(),
                    "m": m.map(|m| m.to_string()), "l": l.map(|l| l.to_string()),
                    "value": v.to_string(),
                    "note": (*k >= 2).then_some(acceptance::N1_WEIGHT_NOTE),
                }))?,
                Format::Csv => format!("x,y,k,value\n{x},{y},{k},{v}\n"),
            };
            Ok(Outcome::ok(body))
        }
        SumsCmd::Duality { max_n, k, f } => {
            let fs: Vec<PrimeFn> = if f.is_empty() {
                PrimeFn::ALL.to_vec()
            } else {
                f.iter().map(|&a| a.into()).collect()
            };
            let mut t = Table::new(vec![
                "k",
                "f",
                "checked",
                "smallest_failures",
                "largest_failures",
                "route_mismatches",
                "passed",
            ]);
            let mut ok = true;
            for &k in k {
                for &f in &fs {
                    let r = duality_sweep(*max_n, k, f).map_err(usage)?;
                    ok &= r.passed();
                    t.push(vec![
                        Cell::int(k),
                        Cell::Text(format!("{f:?}")),
                        Cell::int(r.checked),
                        Cell::int(r.smallest_failures.len()),
                        Cell::int(r.largest_failures.len()),
                        Cell::int(r.route_mismatches.len()),
                        Cell::Bool(r.passed()),
                    ]);
                }
            }
            Ok(Outcome { body: t.render(fmt)?, ok })
        }
        SumsCmd::Residue { m, l, k, x_grid } => {
            let filter = ResidueFilter::new(*m, *l).map_err(usage)?;
            let mut xs = x_grid.clone();
            xs.sort_unstable();
            xs.dedup();
            let top = *xs.last().expect("required");
            let parts = SiftedSums::with_cache(top, cache)
                .residue_grid(filter, *k, &xs)
                .map_err(anyhow::Error::from)?;
            let limit = residue_series_limit(*m, *k);
            let mut t = Table::new(vec!["x", "partial_sum", "limit", "distance"]);
            for (x, p) in xs.iter().zip(parts) {
                t.push(vec![Cell::int(x), Cell::Num(p), Cell::Num(limit), Cell::Num((p - limit).abs())]);
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
    }
}

fn primesums(c: &PrimesumsCmd, fmt: Format) -> Result<Outcome, CliError> {
    match c {
        PrimesumsCmd::Profile { y, max_n, max_i, tail_cut } => {
            let cut = tail_cut.unwrap_or_else(|| default_tail_cut(*y));
            let p = PrimeSumProfile::compute(*y, *max_n, *max_i, cut).map_err(usage)?;
            if fmt == Format::Json {
                return Ok(Outcome::ok(json_text(&p)?));
            }
            let mut t = Table::new(vec!["n", "i", "g_deriv", "radius"]);
            for (n, (row, rad)) in p.g_derivs.iter().zip(&p.g_radii).enumerate() {
                for (i, (v, r)) in row.iter().zip(rad).enumerate() {
                    t.push(vec![Cell::int(n), Cell::int(i), Cell::Num(*v), Cell::Num(*r)]);
                }
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
        PrimesumsCmd::Fit { kind, power, y_min, y_max, count, loglog_degree } => {
            if !(*y_min > 0.0 && y_max > y_min && *count >= 2) {
                return Err(usage("need 0 < y-min < y-max and count >= 2"));
            }
            let ys = log_grid(*y_min, *y_max, *count);
            let vals = mertens_series(*kind, *power, &ys).map_err(usage)?;
            let samples: Vec<(f64, f64)> = ys.iter().copied().zip(vals).collect();
            let basis = match loglog_degree {
                Some(e) => FitBasis::PolyLogYLogLog { degree: *power, loglog_degree: *e },
                None => FitBasis::PolyLogY { degree: *power },
            };
            let fit = asymptotic_fit(&samples, basis).map_err(usage)?;
            if fmt == Format::Json {
                return Ok(Outcome::ok(json_text(&fit)?));
            }
            let mut coeffs = Table::new(vec!["log_power", "loglog_power", "coefficient"]);
            for (&(n, j), c) in fit.terms.iter().zip(&fit.coeffs) {
                coeffs.push(vec![Cell::int(n), Cell::int(j), Cell::Num(*c)]);
            }
            let mut res = Table::new(vec!["y", "value", "residual"]);
            for ((y, v), r) in samples.iter().zip(&fit.residuals) {
                res.push(vec![Cell::Num(*y), Cell::Num(*v), Cell::Num(*r)]);
            }
            Ok(Outcome::ok(coeffs.render(fmt)? + "\n" + &res.render(fmt)?))
        }
    }
}

fn constants(c: &ConstantsCmd, fmt: Format) -> Result<Outcome, CliError> {
    let ConstantsCmd::Dump { max_m, max_n } = c;
    let mut t = Table::new(vec![
        "m",
        "n",
        "closed_form",
        "finite_diff",
        "contour",
        "abs_diff_finite_diff",
        "abs_diff_contour",
    ]);
    for m in 0..=*max_m {
        for n in 0..=*max_n {
            let closed = gamma_mn_closed(m, n).map_err(usage)?;
            let fd = gamma_mn_oracle(m, n).map_err(usage)?;
            let ct = gamma_mn_contour(m, n, CONTOUR_CUTOFF).map_err(usage)?;
            t.push(vec![
                Cell::int(m),
                Cell::int(n),
                Cell::Num(closed),
                Cell::Num(fd),
                Cell::Num(ct),
                Cell::Num((closed - fd).abs()),
                Cell::Num((closed - ct).abs()),
            ]);
        }
    }
    Ok(Outcome::ok(t.render(fmt)?))
}

fn hankel(c: &HankelCmd, fmt: Format) -> Result<Outcome, CliError> {
    let HankelCmd::Scan { m, n, cutoffs } = c;
    let rows = truncation_decay_scan(*m, *n, cutoffs).map_err(usage)?;
    let mut t = Table::new(vec!["cutoff", "value", "abs_error"]);
    for r in rows {
        t.push(vec![Cell::Num(r.cutoff), Cell::Num(r.value), Cell::Num(r.abs_error)]);
    }
    Ok(Outcome::ok(t.render(fmt)?))
}

fn asym(c: &AsymCmd, fmt: Format, cache: Option<SieveCache>) -> Result<Outcome, CliError> {
    match c {
        AsymCmd::Phi { y, k, n } => {
            let p = phi_table(*y, *k, *n).map_err(usage)?;
            if fmt == Format::Json {
                return Ok(Outcome::ok(json_text(&p)?));
            }
            let mut t = Table::new(vec!["i", "j", "phi", "radius"]);
            for i in 0..p.values.len() {
                for j in 0..p.values[i].len() {
                    t.push(vec![Cell::int(i), Cell::int(j), Cell::Num(p.get(i, j)), Cell::Num(p.radius(i, j))]);
                }
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
        AsymCmd::Compare { k, y, n, x_grid, window } => {
            let mut xs = x_grid.clone();
            xs.sort_unstable();
            xs.dedup();
            let top = *xs.last().expect("required");
            if top > SIEVE_HARD_MAX {
                return Err(usage(format!("x = {top} exceeds the sieve maximum {SIEVE_HARD_MAX}")));
            }
            let sums = SiftedSums::with_cache(top, cache);
            let rows = compare(&sums, &xs, *y, *k, *n, &(*window).into()).map_err(|e| match e {
                crate::asym::AsymError::Exact(e) => CliError::Run(e.into()),
                other => usage(other),
            })?;
            let mut t = Table::new(vec!["x", "exact", "main_term", "normalized_residual"]);
            for r in rows {
                t.push(vec![
                    Cell::int(r.x),
                    Cell::int(r.exact),
                    Cell::Num(r.main_term),
                    Cell::Num(r.normalized_residual),
                ]);
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
    }
}

fn orders_cmd(c: &OrdersCmd, fmt: Format) -> Result<Outcome, CliError> {
    let OrdersCmd::Cmp { f, g } = c;
    let fc: GrowthClass = f.parse().map_err(|e| usage(format!("--f: {e}")))?;
    let gc: GrowthClass = g.parse().map_err(|e| usage(format!("--g: {e}")))?;
    let r = orders::compare(&fc, &gc).map_err(usage)?;
    let body = match fmt {
        Format::Json => json_text(&r)?,
        Format::Csv => {
            let mut t = Table::new(vec!["relation", "verdict"]);
            for (name, v) in verdict_lines(&r) {
                t.push(vec![Cell::Text(name.into()), Cell::Text(v)]);
            }
            t.render(fmt)?
        }
        Format::Text => verdict_lines(&r).into_iter().map(|(n, v)| format!("{n}: {v}\n")).collect(),
    };
    Ok(Outcome::ok(body))
}

fn verdict_lines(r: &orders::Comparison) -> Vec<(&'static str, String)> {
    vec![
        ("f <_forall g", r.lt_forall.to_string()),
        ("f <_exists g", r.lt_exists.to_string()),
        ("g <_forall f", r.gt_forall.to_string()),
        ("g <_exists f", r.gt_exists.to_string()),
        ("lower sets equal", r.lower_set_equal.to_string()),
        ("f subradical", r.f_subradical.to_string()),
        ("g subradical", r.g_subradical.to_string()),
    ]
}

fn comb(c: &CombCmd, fmt: Format) -> Result<Outcome, CliError> {
    let CombCmd::Dump { max_n, table } = c;
    let t = match table {
        CombTable::Stirling => {
            let mut t = Table::new(vec!["n", "k", "stirling2", "stirling1_unsigned", "t_coeff"]);
            for n in 0..=*max_n {
                for k in 0..=n {
                    // T_{j,k} with j = n − 1, defined for 1 <= k <= n
                    let tc = if n >= 1 && k >= 1 {
                        Cell::int(t_coeff(n - 1, k).map_err(usage)?)
                    } else {
                        Cell::Text(String::new())
                    };
                    t.push(vec![
                        Cell::int(n),
                        Cell::int(k),
                        Cell::int(stirling2(n, k).map_err(usage)?),
                        Cell::int(stirling1_unsigned(n, k).map_err(usage)?),
                        tc,
                    ]);
                }
            }
            t
        }
        CombTable::Fubini => {
            let mut t = Table::new(vec!["n", "fubini"]);
            for n in 0..=*max_n {
                t.push(vec![Cell::int(n), Cell::int(fubini(n).map_err(usage)?)]);
            }
            t
        }
    };
    Ok(Outcome::ok(t.render(fmt)?))
}

fn acceptance_cmd(a: &AcceptanceArgs, cli: &Cli, fmt: Format) -> Result<Outcome, CliError> {
    let cfg = RunConfig {
        cache_dir: cli.cache_dir.clone(),
        sieve_ceiling: a.sieve_ceiling,
        format: match fmt {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
        window: a.window.into(),
        seed: cli.seed,
        ..RunConfig::default()
    };
    cfg.validate().map_err(usage)?;
    let report = if a.criterion.is_empty() {
        acceptance::run_acceptance(&cfg)
    } else {
        acceptance::run_criteria(&cfg, &a.criterion)
    }
    .map_err(|e| match e {
        acceptance::AcceptanceError::UnknownCriterion(_) | acceptance::AcceptanceError::Config(_) => usage(e),
        other => CliError::Run(other.into()),
    })?;
    let ok = report.criteria.iter().all(|c| c.status != Status::Fail);
    Ok(Outcome {
        body: report.render(cfg.format).map_err(anyhow::Error::from)?,
        ok,
    })
}
