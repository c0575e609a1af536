// SPDX-License-Identifier: Apache-2.0

//! Command-line surface. Every subcommand renders to a string so runs are
//! reproducible byte for byte; `main` only decides where the bytes go.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::format::{csv_row, fmt_f64};
use crate::heatkernel::HeatKernel;
use crate::lattice::LatticeSpec;
use crate::permalg::{self, Permutation};
use crate::polymer::{self, DEFAULT_ENUMERATION_BUDGET};
use crate::saddle;
use crate::spinsector::{self, CorrelationMap, SectorSpectra, SectorTraceTable};

pub const SCHEMA_VERSION: u32 = 1;

/// Overrides the default walk-enumeration budget.
pub const BUDGET_ENV: &str = "CYCLEGAS_ENUM_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_EMPTY: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_)
        | Error::SiteOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::Divergent(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Empty(_) => EXIT_EMPTY,
        Error::NoRoot(_) | Error::Io(_) => EXIT_FAILURE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cyclegas",
    version,
    about = "Cycle-gas laboratory for the quantum Heisenberg ferromagnet"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Periodic lattice heat kernel g_β(i, j).
    HeatKernel(HeatKernelArgs),
    /// Group-algebra coefficients of e^{-βH}.
    Expand(ExpandArgs),
    /// Compare coefficients with the heat-kernel product Π_i g_β(i, G i).
    Conjecture(ConjectureArgs),
    /// Saddle-point cycle gas: phase table or sector occupations.
    Saddle(SaddleArgs),
    /// Exact spin-sector traces and derived quantities.
    Sectors(SectorsArgs),
    /// Closed-walk sums through a site versus the return estimate.
    Walks(WalksArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format (defaults depend on the subcommand).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long = "d")]
    pub d: usize,
    #[arg(long = "L")]
    pub l: usize,
}

impl LatticeArgs {
    fn spec(&self) -> Result<LatticeSpec> {
        LatticeSpec::new(self.d, self.l)
    }
}

#[derive(Debug, Args)]
pub struct HeatKernelArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long)]
    pub beta: f64,
    /// Site pair `i,j` to evaluate; may be repeated.
    #[arg(long = "at", value_parser = parse_pair)]
    pub at: Vec<(usize, usize)>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = permalg::DEFAULT_TOL)]
    pub tol: f64,
    /// Coefficients at or above floor × max count toward the support.
    #[arg(long, default_value_t = permalg::DEFAULT_FLOOR)]
    pub floor: f64,
    /// Binary coefficient file to write.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BetaChoice {
    #[arg(
        long,
        conflicts_with = "beta_grid",
        required_unless_present = "beta_grid"
    )]
    pub beta: Option<f64>,
    /// Grid `start:stop:count`.
    #[arg(long = "beta-grid")]
    pub beta_grid: Option<String>,
    /// Space the grid logarithmically.
    #[arg(long)]
    pub log: bool,
}

impl BetaChoice {
    fn values(&self) -> Result<Vec<f64>> {
        match (&self.beta, &self.beta_grid) {
            (Some(b), None) => Ok(vec![*b]),
            (None, Some(g)) => parse_grid(g, self.log),
            _ => Err(Error::InvalidArgument(
                "give exactly one of --beta, --beta-grid".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub beta: BetaChoice,
    #[arg(long, default_value_t = permalg::DEFAULT_FLOOR)]
    pub floor: f64,
    /// Print both sides for one permutation, given as its image list.
    #[arg(long, value_delimiter = ',')]
    pub perm: Option<Vec<usize>>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SaddleArgs {
    #[arg(long = "d")]
    pub d: usize,
    #[arg(long = "L", default_value_t = 10)]
    pub l: usize,
    #[command(flatten)]
    pub beta: BetaChoice,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Up-spin fraction k/N for the sector-restricted occupations.
    #[arg(long = "sector-k")]
    pub sector_k: Option<f64>,
    /// Number of tabulated cycle lengths (JSON tables and sector output).
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SectorsArgs {
    #[arg(long = "d")]
    pub d: usize,
    /// Edge length; several values (comma separated) are accepted with --ratio.
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub l: Vec<usize>,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, group = "quantity")]
    pub table: bool,
    #[arg(long, group = "quantity")]
    pub ratio: Option<f64>,
    #[arg(long, group = "quantity")]
    pub cumulative: Option<usize>,
    #[arg(long, group = "quantity")]
    pub correlation: bool,
    #[arg(long, group = "quantity", allow_hyphen_values = true)]
    pub field: Option<f64>,
    /// Largest dense sector dimension.
    #[arg(long, default_value_t = spinsector::DEFAULT_SECTOR_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WalksArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long)]
    pub beta: f64,
    /// Largest cycle length.
    #[arg(long = "k-max")]
    pub k_max: usize,
    #[arg(long, default_value_t = 0)]
    pub site: usize,
    /// Enumeration budget in vertex tuples (also read from CYCLEGAS_ENUM_BUDGET).
    #[arg(long)]
    pub budget: Option<u64>,
    /// Skip the distinct-vertex enumeration.
    #[arg(long)]
    pub unrestricted_only: bool,
    #[command(flatten)]
    pub common: Common,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `i,j`, got `{s}`"))?;
    let i = a.trim().parse().map_err(|e| format!("{e}"))?;
    let j = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((i, j))
}

/// `start:stop:count`, inclusive of both ends.
pub fn parse_grid(s: &str, log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidArgument(format!("grid must be start:stop:count, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if log && (start <= 0.0 || stop <= 0.0) {
        return Err(Error::InvalidArgument(
            "a log grid needs positive endpoints".into(),
        ));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let m = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / m;
            if i == 0 {
                start
            } else if i == count - 1 {
                stop
            } else if log {
                (start.ln() + t * (stop.ln() - start.ln())).exp()
            } else {
                start + t * (stop - start)
            }
        })
        .collect())
}

fn json_string(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn heat_kernel(args: &HeatKernelArgs) -> Result<String> {
    let spec = args.lattice.spec()?;
    let kernel = HeatKernel::new(spec, args.beta)?;
    let at: Vec<(usize, usize, f64)> = args
        .at
        .iter()
        .map(|&(i, j)| Ok((i, j, kernel.evaluate(i, j)?)))
        .collect::<Result<_>>()?;
    match args.common.format.unwrap_or(Format::Csv) {
        Format::Csv if at.is_empty() => {
            let mut out = csv_row((0..spec.edge_length()).map(|r| format!("r{r}")));
            out += &csv_row(kernel.factor().iter().map(|&x| fmt_f64(x)));
            Ok(out)
        }
        Format::Csv => {
            let mut out = csv_row(["i", "j", "g"]);
            for (i, j, g) in at {
                out += &csv_row([i.to_string(), j.to_string(), fmt_f64(g)]);
            }
            Ok(out)
        }
        Format::Json => Ok(json_string(json!({
            "schema_version": SCHEMA_VERSION,
            "d": spec.dim(),
            "L": spec.edge_length(),
            "beta": args.beta,
            "factor": kernel.factor(),
            "at": at.iter().map(|(i, j, g)| json!({"i": i, "j": j, "g": g})).collect::<Vec<_>>(),
        }))),
    }
}

pub fn expand(args: &ExpandArgs) -> Result<String> {
    let spec = args.lattice.spec()?;
    if !(args.floor > 0.0) {
        return Err(Error::InvalidArgument("--floor must be positive".into()));
    }
    let ex = permalg::expand(&spec, args.beta, args.tol)?;
    if let Some(path) = &args.coeffs {
        let file = BufWriter::new(File::create(path)?);
        permalg::write_coefficients(file, &ex.element, args.beta, args.tol)?;
    }
    let el = &ex.element;
    let sum = el.coefficient_sum();
    let max = el.max_coefficient().unwrap_or(0.0);
    let min = el.min_coefficient().unwrap_or(0.0);
    let support = el.support(args.floor * max - f64::MIN_POSITIVE);
    let trace = permalg::trace_from_coeffs(el);
    match args.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = csv_row([
                "d",
                "L",
                "N",
                "beta",
                "tol",
                "terms",
                "truncation_bound",
                "sum",
                "support",
                "min_coefficient",
                "max_coefficient",
                "trace",
            ]);
            out += &csv_row([
                spec.dim().to_string(),
                spec.edge_length().to_string(),
                spec.num_sites().to_string(),
                fmt_f64(args.beta),
                fmt_f64(args.tol),
                ex.terms.to_string(),
                fmt_f64(ex.truncation_bound),
                fmt_f64(sum),
                support.to_string(),
                fmt_f64(min),
                fmt_f64(max),
                fmt_f64(trace),
            ]);
            Ok(out)
        }
        Format::Json => Ok(json_string(json!({
            "schema_version": SCHEMA_VERSION,
            "d": spec.dim(),
            "L": spec.edge_length(),
            "N": spec.num_sites(),
            "beta": args.beta,
            "tol": args.tol,
            "terms": ex.terms,
            "truncation_bound": ex.truncation_bound,
            "sum": sum,
            "support": support,
            "floor": args.floor,
            "min_coefficient": min,
            "max_coefficient": max,
            "trace": trace,
        }))),
    }
}

pub fn conjecture(args: &ConjectureArgs) -> Result<String> {
    let spec = args.lattice.spec()?;
    let betas = args.beta.values()?;
    let perm = args.perm.clone().map(Permutation::new).transpose()?;
    if let Some(p) = &perm {
        if p.len() != spec.num_sites() {
            return Err(Error::InvalidArgument(format!(
                "--perm lists {} images, lattice has {} sites",
                p.len(),
                spec.num_sites()
            )));
        }
    }
    let mut fits = Vec::new();
    let mut points = Vec::new();
    for &beta in &betas {
        if !(beta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "the heat-kernel product is compared only for beta > 0, got {beta}"
            )));
        }
        let coeffs = permalg::expand(&spec, beta, permalg::DEFAULT_TOL)?.into_element();
        let kernel = HeatKernel::new(spec, beta)?;
        let fit = permalg::conjecture_fit_with(&coeffs, &kernel, args.floor)?;
        if let Some(p) = &perm {
            let c = coeffs.coefficient(p);
            let rhs = permalg::conjecture_rhs(&kernel, p)?;
            points.push(json!({
                "beta": beta,
                "permutation": p.images(),
                "cycles": p.to_string(),
                "coefficient": c,
                "kernel_product": rhs,
                "anchored_prediction": fit.anchored_constant * rhs,
                "lsq_prediction": fit.lsq_constant * rhs,
            }));
        }
        fits.push(fit);
    }
    match args.common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = json!({
                "schema_version": SCHEMA_VERSION,
                "d": spec.dim(),
                "L": spec.edge_length(),
                "fits": fits,
            });
            if perm.is_some() {
                v["points"] = json!(points);
            }
            Ok(json_string(v))
        }
        Format::Csv => {
            let mut out = csv_row([
                "beta",
                "count",
                "anchored_constant",
                "lsq_constant",
                "anchored_median",
                "anchored_max",
                "lsq_median",
                "lsq_max",
            ]);
            for f in &fits {
                out += &csv_row([
                    fmt_f64(f.beta),
                    f.count.to_string(),
                    fmt_f64(f.anchored_constant),
                    fmt_f64(f.lsq_constant),
                    fmt_f64(f.anchored.median),
                    fmt_f64(f.anchored.max),
                    fmt_f64(f.lsq.median),
                    fmt_f64(f.lsq.max),
                ]);
            }
            Ok(out)
        }
    }
}

pub fn saddle(args: &SaddleArgs) -> Result<String> {
    let betas = args.beta.values()?;
    LatticeSpec::new(args.d, args.l)?;
    let format = args.common.format.unwrap_or(Format::Csv);
    let mut sols = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let mut sol = saddle::solve_gas(args.d, beta, args.l, args.tol)?;
        if let Some(n) = args.n_max {
            sol = sol.with_n_max(n)?;
        }
        sols.push(sol);
    }
    let critical = saddle::critical_beta(args.d)?;

    if let Some(frac) = args.sector_k {
        if !(frac > 0.0 && frac < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "--sector-k must lie in (0, 1), got {frac}"
            )));
        }
        let mut out = String::new();
        let mut blocks = Vec::new();
        if format == Format::Csv {
            out += &csv_row([
                "beta",
                "tau",
                "k_target",
                "condensate_up",
                "residual",
                "n",
                "s",
                "r",
            ]);
        }
        for sol in &sols {
            let k = frac * sol.num_sites();
            let occ = saddle::solve_tau(sol, k, args.tol)?;
            let up = occ.finite_up_length()?;
            let reached = up
                + if occ.condensate_up {
                    sol.condensate_fraction * sol.num_sites()
                } else {
                    0.0
                };
            let residual = (reached - k).abs() / k;
            let s = sol.densities();
            let r = occ.occupations();
            match format {
                Format::Csv => {
                    for n in 0..s.len() {
                        out += &csv_row([
                            fmt_f64(sol.beta),
                            fmt_f64(occ.tau),
                            fmt_f64(k),
                            occ.condensate_up.to_string(),
                            fmt_f64(residual),
                            (n + 1).to_string(),
                            fmt_f64(s[n]),
                            fmt_f64(r[n]),
                        ]);
                    }
                }
                Format::Json => blocks.push(json!({
                    "beta": sol.beta,
                    "alpha": sol.alpha,
                    "tau": occ.tau,
                    "k_target": k,
                    "condensate_up": occ.condensate_up,
                    "residual": residual,
                    "s": s,
                    "r": r,
                })),
            }
        }
        if format == Format::Json {
            out = json_string(json!({
                "schema_version": SCHEMA_VERSION,
                "d": args.d,
                "L": args.l,
                "sector_fraction": frac,
                "sectors": blocks,
            }));
        }
        return Ok(out);
    }

    match format {
        Format::Csv => {
            let mut out = csv_row(["beta", "alpha", "condensate_fraction", "s1", "mu"]);
            for sol in &sols {
                out += &csv_row([
                    fmt_f64(sol.beta),
                    fmt_f64(sol.alpha),
                    fmt_f64(sol.condensate_fraction),
                    fmt_f64(sol.density(1)?),
                    fmt_f64(sol.mu),
                ]);
            }
            Ok(out)
        }
        Format::Json => {
            let rows = sols
                .iter()
                .map(|sol| {
                    Ok(json!({
                        "beta": sol.beta,
                        "alpha": sol.alpha,
                        "phase": sol.phase,
                        "condensate_fraction": sol.condensate_fraction,
                        "s1": sol.density(1)?,
                        "mu": sol.mu,
                        "constraint_residual": sol.constraint_residual()?,
                        "n_max": sol.n_max,
                        "densities": sol.densities(),
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(json_string(json!({
                "schema_version": SCHEMA_VERSION,
                "d": args.d,
                "L": args.l,
                "critical_beta": critical,
                "rows": rows,
            })))
        }
    }
}

pub fn sectors(args: &SectorsArgs) -> Result<String> {
    let quantities = [
        args.table,
        args.ratio.is_some(),
        args.cumulative.is_some(),
        args.correlation,
        args.field.is_some(),
    ];
    if quantities.iter().filter(|&&q| q).count() != 1 {
        return Err(Error::InvalidArgument(
            "choose one of --table, --ratio, --cumulative, --correlation, --field".into(),
        ));
    }
    if args.l.len() != 1 && args.ratio.is_none() {
        return Err(Error::InvalidArgument(
            "several --L values are only accepted with --ratio".into(),
        ));
    }
    let format = args.common.format.unwrap_or(Format::Csv);

    if let Some(r) = args.ratio {
        let mut rows = Vec::new();
        for &l in &args.l {
            let spec = LatticeSpec::new(args.d, l)?;
            let table = SectorSpectra::compute(&spec, args.budget)?.traces(args.beta)?;
            let ratio = table.magnetization_ratio(r)?;
            let cut = (r * spec.num_sites() as f64).floor() as usize;
            rows.push((spec, cut, ratio));
        }
        return Ok(match format {
            Format::Csv => {
                let mut out = csv_row(["d", "L", "N", "beta", "r", "cut", "ratio"]);
                for (spec, cut, ratio) in rows {
                    out += &csv_row([
                        spec.dim().to_string(),
                        spec.edge_length().to_string(),
                        spec.num_sites().to_string(),
                        fmt_f64(args.beta),
                        fmt_f64(r),
                        cut.to_string(),
                        format!("{ratio:.12e}"),
                    ]);
                }
                out
            }
            Format::Json => json_string(json!({
                "schema_version": SCHEMA_VERSION,
                "beta": args.beta,
                "r": r,
                "rows": rows.iter().map(|(s, cut, ratio)| json!({
                    "d": s.dim(), "L": s.edge_length(), "N": s.num_sites(), "cut": cut, "ratio": ratio,
                })).collect::<Vec<_>>(),
            })),
        });
    }

    let spec = LatticeSpec::new(args.d, args.l[0])?;
    if args.correlation {
        let map = CorrelationMap::compute(&spec, args.beta)?;
        let n = spec.num_sites();
        return Ok(match format {
            Format::Csv => {
                let mut out = csv_row(["i", "j", "rho"]);
                for i in 0..n {
                    for j in 0..n {
                        out += &csv_row([i.to_string(), j.to_string(), fmt_f64(map.get(i, j)?)]);
                    }
                }
                out
            }
            Format::Json => {
                let rho: Vec<Vec<f64>> = (0..n)
                    .map(|i| (0..n).map(|j| map.get(i, j)).collect::<Result<_>>())
                    .collect::<Result<_>>()?;
                json_string(json!({
                    "schema_version": SCHEMA_VERSION,
                    "d": spec.dim(), "L": spec.edge_length(), "beta": args.beta, "rho": rho,
                }))
            }
        });
    }

    let table: SectorTraceTable = SectorSpectra::compute(&spec, args.budget)?.traces(args.beta)?;
    let n = spec.num_sites();
    if args.table {
        return Ok(match format {
            Format::Csv => {
                let mut out = csv_row(["k", "dim", "trace"]);
                for (k, t) in table.traces.iter().enumerate() {
                    out += &csv_row([
                        k.to_string(),
                        spinsector::binomial(n, k).to_string(),
                        fmt_f64(*t),
                    ]);
                }
                out
            }
            Format::Json => json_string(json!({
                "schema_version": SCHEMA_VERSION,
                "d": spec.dim(), "L": spec.edge_length(), "beta": args.beta,
                "traces": table.traces, "full_trace": table.full_trace(),
            })),
        });
    }
    if let Some(c) = args.cumulative {
        let f = table.cumulative(c)?;
        return Ok(match format {
            Format::Csv => csv_row(["n", "F"]) + &csv_row([c.to_string(), fmt_f64(f)]),
            Format::Json => json_string(json!({
                "schema_version": SCHEMA_VERSION, "beta": args.beta, "n": c, "F": f,
            })),
        });
    }
    let delta = args.field.expect("one quantity selected");
    let a = table.field_response(delta)?;
    Ok(match format {
        Format::Csv => csv_row(["delta", "response"]) + &csv_row([fmt_f64(delta), fmt_f64(a)]),
        Format::Json => json_string(json!({
            "schema_version": SCHEMA_VERSION, "beta": args.beta, "delta": delta, "response": a,
        })),
    })
}

fn enumeration_budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{BUDGET_ENV} must be an integer, got `{v}`"))
        }),
        Err(_) => Ok(DEFAULT_ENUMERATION_BUDGET),
    }
}

pub fn walks(args: &WalksArgs) -> Result<String> {
    let spec = args.lattice.spec()?;
    let kernel = HeatKernel::new(spec, args.beta)?;
    let budget = enumeration_budget(args.budget)?;
    if args.k_max == 0 {
        return Err(Error::InvalidArgument("--k-max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for k in 1..=args.k_max {
        let distinct = if args.unrestricted_only {
            None
        } else {
            Some(polymer::walk_sum_distinct(&kernel, args.site, k, budget)?)
        };
        let unrestricted = polymer::walk_sum_unrestricted(&kernel, args.site, k)?;
        let estimate = polymer::return_estimate(spec.dim(), args.beta, k)?;
        rows.push((k, distinct, unrestricted, estimate));
    }
    Ok(match args.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = csv_row(["k", "distinct", "unrestricted", "estimate"]);
            for (k, dist, unr, est) in rows {
                out += &csv_row([
                    k.to_string(),
                    dist.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(unr),
                    fmt_f64(est),
                ]);
            }
            out
        }
        Format::Json => json_string(json!({
            "schema_version": SCHEMA_VERSION,
            "d": spec.dim(), "L": spec.edge_length(), "beta": args.beta, "site": args.site,
            "rows": rows.iter().map(|(k, dist, unr, est)| json!({
                "k": k, "distinct": dist, "unrestricted": unr, "estimate": est,
            })).collect::<Vec<_>>(),
        })),
    })
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::HeatKernel(a) => &a.common,
        Command::Expand(a) => &a.common,
        Command::Conjecture(a) => &a.common,
        Command::Saddle(a) => &a.common,
        Command::Sectors(a) => &a.common,
        Command::Walks(a) => &a.common,
    }
}

pub fn render(cmd: &Command) -> Result<String> {
    match cmd {
        Command::HeatKernel(a) => heat_kernel(a),
        Command::Expand(a) => expand(a),
        Command::Conjecture(a) => conjecture(a),
        Command::Saddle(a) => saddle(a),
        Command::Sectors(a) => sectors(a),
        Command::Walks(a) => walks(a),
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let result = render(&cli.command).and_then(|text| {
        match &common(&cli.command).output {
            Some(path) => std::fs::write(path, text)?,
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(text.as_bytes())?;
                lock.flush()?;
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("cyclegas: {err}");
            exit_code(&err)
        }
    }
}
