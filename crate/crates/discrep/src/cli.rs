//! Argument definitions and the subcommand drivers.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discrep_core::arith::gauss_sum;
use discrep_core::counting::{
    norm_ball_count, sharp_count, sharp_count_naive, smoothed_sums, triple_count, CountSample,
};
use discrep_core::fit::{fit_main_terms, leave_one_out, residue_c1, CONTOUR_RADII};
use discrep_core::mellin::{m_k_delta_correction, m_k_limit_form, m_k_with, MellinParams};
use discrep_core::quad::QuadratureConfig;
use discrep_core::series::{
    d_cusp_series, dirichlet_with_prefactor, f_infinity, finite_shift_term, frak_d,
    shifted_dirichlet_with, zero_coeff_term, ShiftConfig,
};
use discrep_core::{Complex64, ComplexVal, SeriesValue};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{ComplexArg, FileConfig, Grid, Precision, Profile};
use crate::error::{HarnessError, Result};
use crate::memo::MemoFactorizer;
use crate::output::{num, write_csv, write_json, write_sidecars, Provenance};
use crate::verify::{run_criteria, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "discrep",
    version,
    about = "Desk-scale checks of the smoothed discriminant count"
)]
pub struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Precision profile; defaults to $DISCREP_PROFILE, then `fast`.
    #[arg(long, global = true, value_enum)]
    pub profile: Option<Profile>,
    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sharp and smoothed counts of (a, b, c) with b² - 4ac = h.
    Count(CountArgs),
    /// Shifted Dirichlet series and the pieces of its spectral expansion.
    Series(SeriesArgs),
    /// M_k by quadrature against its closed form as the damping goes to 0.
    MellinCheck(MellinArgs),
    /// Table of the Gauss sums g_h(c).
    GaussCheck(GaussArgs),
    /// Fit c₁ X log X + c₂ X to smoothed counts.
    Fit(FitArgs),
    /// Run the verification suite.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountArgs {
    /// Shifts, comma-separated.
    #[arg(long = "h", value_delimiter = ',')]
    pub h: Vec<u64>,
    /// Box sizes, comma-separated.
    #[arg(long = "X", visible_alias = "x", value_delimiter = ',')]
    #[serde(rename = "X", alias = "x")]
    pub x: Vec<f64>,
    /// Add the exponentially smoothed sum and its tail bound.
    #[arg(long)]
    pub smoothed: bool,
    /// Truncation level of the smoothed sum.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Add the count of solutions inside the ball of this radius.
    #[arg(long)]
    pub ball: Option<f64>,
    /// Add the O(X²) double-loop count and twice the (a, b, c) box count.
    #[arg(long)]
    pub naive: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Term {
    /// The shifted Dirichlet series.
    #[value(name = "series")]
    #[serde(rename = "series")]
    Series,
    /// The series times its gamma prefactor.
    #[value(name = "prefactor")]
    #[serde(rename = "prefactor")]
    Prefactor,
    /// The damped series.
    #[value(name = "frakd")]
    #[serde(rename = "frakd")]
    FrakD,
    /// Finitely many terms with 4m < h.
    #[value(name = "Yc")]
    #[serde(rename = "Yc")]
    FiniteShift,
    /// The constant-term contribution.
    #[value(name = "Yd")]
    #[serde(rename = "Yd")]
    ZeroCoeff,
    /// The Gauss-sum series D_∞(u), with u taken from --s.
    #[value(name = "dcusp")]
    #[serde(rename = "dcusp")]
    DCusp,
    /// The explicit factor F_∞(s; h).
    #[value(name = "finf")]
    #[serde(rename = "finf")]
    FInf,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesArgs {
    #[arg(long = "h")]
    pub h: Option<u64>,
    /// Complex argument, e.g. 2 or 2.3+0.4i.
    #[arg(long)]
    pub s: Option<ComplexArg>,
    /// Spectral parameter; 0 by default.
    #[arg(long)]
    pub v: Option<ComplexArg>,
    /// Damping; needed by frakd, Yc and Yd.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Truncation length.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
    /// Terms to evaluate, comma-separated; series and prefactor by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub term: Vec<Term>,
    /// Output path; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MellinArgs {
    #[arg(long)]
    pub s: Option<ComplexArg>,
    #[arg(long)]
    pub z: Option<ComplexArg>,
    /// Weight; 0 by default.
    #[arg(long)]
    pub k: Option<f64>,
    /// Damping ladder, comma-separated; 1e-2,1e-3,1e-4 by default.
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    /// Relative gap allowed at the smallest damping.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussArgs {
    #[arg(long = "h", value_delimiter = ',')]
    pub h: Vec<u64>,
    /// Largest modulus c; 64 by default.
    #[arg(long)]
    pub c_max: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitArgs {
    #[arg(long = "h")]
    pub h: Option<u64>,
    /// Smoothing scales, `2^a..2^b` or a list; 2^7..2^13 by default.
    #[arg(long)]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Also extract c₁ by the contour route (square h only).
    #[arg(long)]
    pub residue: bool,
    /// Ratio of the two cusp contributions to the Gauss-sum series; 1 if absent.
    #[arg(long)]
    pub d0_factor: Option<ComplexArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyArgs {
    /// Criteria to run, comma-separated; all by default.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn pick<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

impl CountArgs {
    fn merged(self, file: Self) -> Self {
        Self {
            h: pick(self.h, file.h),
            x: pick(self.x, file.x),
            smoothed: self.smoothed || file.smoothed,
            eps: self.eps.or(file.eps),
            ball: self.ball.or(file.ball),
            naive: self.naive || file.naive,
            out: self.out.or(file.out),
        }
    }
}

impl SeriesArgs {
    fn merged(self, file: Self) -> Self {
        Self {
            h: self.h.or(file.h),
            s: self.s.or(file.s),
            v: self.v.or(file.v),
            delta: self.delta.or(file.delta),
            n: self.n.or(file.n),
            term: pick(self.term, file.term),
            out: self.out.or(file.out),
        }
    }
}

impl MellinArgs {
    fn merged(self, file: Self) -> Self {
        Self {
            s: self.s.or(file.s),
            z: self.z.or(file.z),
            k: self.k.or(file.k),
            delta: pick(self.delta, file.delta),
            tol: self.tol.or(file.tol),
            out: self.out.or(file.out),
        }
    }
}

impl GaussArgs {
    fn merged(self, file: Self) -> Self {
        Self {
            h: pick(self.h, file.h),
            c_max: self.c_max.or(file.c_max),
            out: self.out.or(file.out),
        }
    }
}

impl FitArgs {
    fn merged(self, file: Self) -> Self {
        Self {
            h: self.h.or(file.h),
            grid: self.grid.or(file.grid),
            eps: self.eps.or(file.eps),
            residue: self.residue || file.residue,
            d0_factor: self.d0_factor.or(file.d0_factor),
            out: self.out.or(file.out),
        }
    }
}

impl VerifyArgs {
    fn merged(self, file: Self) -> Self {
        Self {
            only: pick(self.only, file.only),
            out: self.out.or(file.out),
        }
    }
}

/// Everything a subcommand needs once flags, file and environment are merged.
struct Context {
    profile: Profile,
    precision: Precision,
    pool: rayon::ThreadPool,
    jobs: usize,
}

fn require<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| HarnessError::usage(format!("--{name} is required")))
}

fn check_eps(eps: f64) -> Result<f64> {
    if eps > 0.0 && eps < 1.0 {
        Ok(eps)
    } else {
        Err(HarnessError::usage(format!(
            "--eps must lie in (0, 1), got {eps}"
        )))
    }
}

fn check_shift(h: u64) -> Result<u64> {
    if h == 0 {
        Err(HarnessError::usage("--h must be positive"))
    } else {
        Ok(h)
    }
}

/// Validates, runs and writes the selected subcommand.
pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let profile = Profile::resolve(cli.profile, file.profile)?;
    let jobs = cli
        .jobs
        .or(file.jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(HarnessError::usage("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::usage(format!("cannot start {jobs} workers: {e}")))?;
    let ctx = Context {
        profile,
        precision: profile.precision(),
        pool,
        jobs,
    };
    match cli.command {
        Command::Count(a) => count(&ctx, a.merged(file.count)),
        Command::Series(a) => series(&ctx, a.merged(file.series)),
        Command::MellinCheck(a) => mellin_check(&ctx, a.merged(file.mellin_check)),
        Command::GaussCheck(a) => gauss_check(&ctx, a.merged(file.gauss_check)),
        Command::Fit(a) => fit(&ctx, a.merged(file.fit)),
        Command::VerifyAll(a) => verify_all(&ctx, a.merged(file.verify_all)),
    }
}

fn finish(
    out: Option<&Path>,
    meta: impl FnOnce() -> Result<Provenance>,
    start: Instant,
) -> Result<()> {
    if let Some(p) = out {
        write_sidecars(p, &meta()?, start.elapsed())?;
    }
    Ok(())
}

fn count(ctx: &Context, args: CountArgs) -> Result<()> {
    let start = Instant::now();
    if args.h.is_empty() || args.x.is_empty() {
        return Err(HarnessError::usage("count needs --h and --X"));
    }
    for &h in &args.h {
        check_shift(h)?;
    }
    for &x in &args.x {
        if !(x >= 1.0) || !x.is_finite() {
            return Err(HarnessError::usage(format!(
                "--X must be finite and >= 1, got {x}"
            )));
        }
    }
    let eps = check_eps(args.eps.unwrap_or(ctx.precision.eps))?;
    if let Some(r) = args.ball {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(HarnessError::usage("--ball must be a finite radius >= 0"));
        }
    }

    let per_shift = |h: u64| -> discrep_core::Result<Vec<Vec<String>>> {
        let samples: Vec<CountSample> = if args.smoothed {
            smoothed_sums(h, &args.x, eps)?
        } else {
            args.x
                .iter()
                .map(|&x| {
                    Ok(CountSample {
                        x,
                        sharp: sharp_count(h, x.floor() as u64)?,
                        smoothed: f64::NAN,
                        smoothed_tail_bound: f64::NAN,
                    })
                })
                .collect::<discrep_core::Result<_>>()?
        };
        let ball = args
            .ball
            .map(|r| norm_ball_count(h as i64, r))
            .transpose()?;
        samples
            .iter()
            .map(|s| {
                let mut row = vec![h.to_string(), num(s.x), s.sharp.to_string()];
                if args.smoothed {
                    row.push(num(s.smoothed));
                    row.push(num(s.smoothed_tail_bound));
                }
                if args.naive {
                    let x = s.x.floor() as u64;
                    row.push(sharp_count_naive(h, x)?.to_string());
                    row.push((2 * triple_count(h, x)?).to_string());
                }
                if let Some(b) = ball {
                    row.push(b.to_string());
                }
                Ok(row)
            })
            .collect()
    };
    let blocks: Vec<discrep_core::Result<Vec<Vec<String>>>> = ctx
        .pool
        .install(|| args.h.par_iter().map(|&h| per_shift(h)).collect());
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(b?);
    }

    let mut header = vec!["h", "X", "sharp"];
    if args.smoothed {
        header.extend(["smoothed", "tail_bound"]);
    }
    if args.naive {
        header.extend(["sharp_naive", "twice_triple"]);
    }
    if args.ball.is_some() {
        header.push("ball");
    }
    write_csv(args.out.as_deref(), &header, &rows)?;
    finish(
        args.out.as_deref(),
        || {
            Provenance::new(
                "count",
                ctx.profile,
                &args,
                json!({ "eps": eps, "smoothing_cutoff": discrep_core::counting::SMOOTH_CUTOFF }),
            )
        },
        start,
    )
}

#[derive(Debug, Serialize)]
struct TermRow {
    term: Term,
    h: u64,
    s: ComplexArg,
    v: ComplexArg,
    delta: f64,
    n: u64,
    value: ComplexArg,
    abs_err: f64,
    tail_bound: f64,
}

fn with_tail(v: SeriesValue) -> (ComplexVal, f64) {
    (v.value, v.tail_bound)
}

fn series(ctx: &Context, args: SeriesArgs) -> Result<()> {
    let start = Instant::now();
    let h = check_shift(require(args.h, "h")?)?;
    let s = require(args.s, "s")?.0;
    let v = args.v.map_or(Complex64::new(0.0, 0.0), |c| c.0);
    let delta = args.delta.unwrap_or(0.0);
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(HarnessError::usage("--delta must be finite and >= 0"));
    }
    let terms = if args.term.is_empty() {
        vec![Term::Series, Term::Prefactor]
    } else {
        args.term.clone()
    };
    let needs_delta = terms
        .iter()
        .any(|t| matches!(t, Term::FrakD | Term::FiniteShift | Term::ZeroCoeff));
    if needs_delta && delta == 0.0 {
        return Err(HarnessError::usage("frakd, Yc and Yd need --delta > 0"));
    }
    let cfg = ShiftConfig::new(h)?
        .with_delta(delta)
        .with_terms(args.n.unwrap_or(ctx.precision.series_terms))
        .with_gauss_terms(args.n.unwrap_or(ctx.precision.gauss_terms));
    let memo = MemoFactorizer::new();
    let eval = |t: Term| -> discrep_core::Result<TermRow> {
        let (value, tail) = match t {
            Term::Series => with_tail(shifted_dirichlet_with(s, v, &cfg, &memo)?),
            Term::Prefactor => with_tail(dirichlet_with_prefactor(s, v, &cfg)?),
            Term::FrakD => with_tail(frak_d(s, v, &cfg)?),
            Term::FiniteShift => (finite_shift_term(s, v, &cfg)?, 0.0),
            Term::ZeroCoeff => (zero_coeff_term(s, v, &cfg)?, 0.0),
            Term::DCusp => with_tail(d_cusp_series(s, &cfg)?),
            Term::FInf => (f_infinity(s, h)?, 0.0),
        };
        let n = match t {
            Term::DCusp => cfg.gauss_terms,
            Term::Series | Term::Prefactor | Term::FrakD => cfg.terms,
            _ => 0,
        };
        Ok(TermRow {
            term: t,
            h,
            s: ComplexArg(s),
            v: ComplexArg(v),
            delta,
            n,
            value: ComplexArg(value.value),
            abs_err: value.abs_err,
            tail_bound: tail,
        })
    };
    let rows: Vec<TermRow> = ctx.pool.install(|| {
        terms
            .par_iter()
            .map(|&t| eval(t))
            .collect::<discrep_core::Result<_>>()
    })?;

    let meta = || {
        Provenance::new(
            "series",
            ctx.profile,
            &args,
            json!({ "terms": cfg.terms, "gauss_terms": cfg.gauss_terms, "delta": delta }),
        )
    };
    let out = args.out.as_deref();
    if out.is_some_and(|p| p.extension().is_some_and(|e| e == "json")) {
        write_json(out, &json!({ "provenance": meta()?, "rows": rows }))?;
    } else {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                let name = r
                    .term
                    .to_possible_value()
                    .map_or(String::new(), |p| p.get_name().to_string());
                vec![
                    name,
                    r.h.to_string(),
                    num(r.s.0.re),
                    num(r.s.0.im),
                    num(r.v.0.re),
                    num(r.v.0.im),
                    num(r.delta),
                    r.n.to_string(),
                    num(r.value.0.re),
                    num(r.value.0.im),
                    num(r.abs_err),
                    num(r.tail_bound),
                ]
            })
            .collect();
        write_csv(
            out,
            &[
                "term",
                "h",
                "s_re",
                "s_im",
                "v_re",
                "v_im",
                "delta",
                "N",
                "re",
                "im",
                "abs_err",
                "tail_bound",
            ],
            &table,
        )?;
    }
    finish(out, meta, start)
}

fn mellin_check(ctx: &Context, args: MellinArgs) -> Result<()> {
    let start = Instant::now();
    let s = require(args.s, "s")?.0;
    let z = require(args.z, "z")?.0;
    let k = args.k.unwrap_or(0.0);
    let tol = args.tol.unwrap_or(crate::tolerances::MELLIN_LIMIT_REL);
    let ladder = if args.delta.is_empty() {
        crate::tolerances::MELLIN_LADDER.to_vec()
    } else {
        args.delta.clone()
    };
    if ladder.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
        return Err(HarnessError::usage("--delta values must be finite and > 0"));
    }
    if !k.is_finite() || !(tol > 0.0) {
        return Err(HarnessError::usage("--k must be finite and --tol positive"));
    }
    let closed = m_k_limit_form(s, z, k)?.value;
    let quad = QuadratureConfig::with_rel_tol(ctx.precision.quad_rel_tol);
    let values: Vec<discrep_core::Result<(ComplexVal, Complex64)>> = ctx.pool.install(|| {
        ladder
            .par_iter()
            .map(|&d| {
                let m = m_k_with(&MellinParams::new(s, z, k, d), &quad)?;
                Ok((m, m_k_delta_correction(s, k, d)?.value))
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut last_rel = 0.0;
    for (&d, v) in ladder.iter().zip(values) {
        let (m, corr) = v?;
        let diff = (m.value - closed).norm();
        last_rel = diff / closed.norm();
        rows.push(vec![
            num(s.re),
            num(s.im),
            num(z.re),
            num(z.im),
            num(k),
            num(d),
            num(m.value.re),
            num(m.value.im),
            num(m.abs_err),
            num(closed.re),
            num(closed.im),
            num(diff),
            num(last_rel),
            num((m.value - corr - closed).norm() / closed.norm()),
        ]);
    }
    let header = [
        "s_re",
        "s_im",
        "z_re",
        "z_im",
        "k",
        "delta",
        "quad_re",
        "quad_im",
        "quad_err",
        "closed_re",
        "closed_im",
        "abs_diff",
        "rel_diff",
        "corrected_rel_diff",
    ];
    write_csv(args.out.as_deref(), &header, &rows)?;
    finish(
        args.out.as_deref(),
        || {
            Provenance::new(
                "mellin-check",
                ctx.profile,
                &args,
                json!({ "quad_rel_tol": quad.rel_tol, "tol": tol }),
            )
        },
        start,
    )?;
    if last_rel > tol {
        return Err(HarnessError::Checks { failed: 1 });
    }
    Ok(())
}

fn gauss_check(ctx: &Context, args: GaussArgs) -> Result<()> {
    let start = Instant::now();
    if args.h.is_empty() {
        return Err(HarnessError::usage("gauss-check needs --h"));
    }
    for &h in &args.h {
        check_shift(h)?;
    }
    let c_max = args.c_max.unwrap_or(64);
    if c_max == 0 || c_max > 1 << 16 {
        return Err(HarnessError::usage("--c-max must lie in 1..=65536"));
    }
    let pairs: Vec<(u64, u64)> = args
        .h
        .iter()
        .flat_map(|&h| (1..=c_max).map(move |c| (h, c)))
        .collect();
    let records = ctx.pool.install(|| {
        pairs
            .par_iter()
            .map(|&(h, c)| gauss_sum(h, c))
            .collect::<discrep_core::Result<Vec<_>>>()
    })?;
    // at most ⌈c/2⌉ odd residues, each of modulus <= 1
    let mut failed = 0;
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let bound = r.c.div_ceil(2) as f64 + r.value.abs_err;
            let v = r.value.value;
            if !(v.norm() <= bound) {
                failed += 1;
            }
            vec![
                r.h.to_string(),
                r.c.to_string(),
                num(v.re),
                num(v.im),
                num(r.value.abs_err),
            ]
        })
        .collect();
    write_csv(
        args.out.as_deref(),
        &["h", "c", "re", "im", "abs_err"],
        &rows,
    )?;
    finish(
        args.out.as_deref(),
        || Provenance::new("gauss-check", ctx.profile, &args, json!({ "c_max": c_max })),
        start,
    )?;
    if failed > 0 {
        return Err(HarnessError::Checks { failed });
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SampleRow {
    x: f64,
    sharp: u64,
    smoothed: f64,
    tail_bound: f64,
}

#[derive(Debug, Serialize)]
struct ResidueRow {
    value: ComplexArg,
    second_radius: ComplexArg,
    simple_part: ComplexArg,
    radii: [f64; 2],
    radius_spread: f64,
    status: &'static str,
}

fn fit(ctx: &Context, args: FitArgs) -> Result<()> {
    let start = Instant::now();
    let h = check_shift(require(args.h, "h")?)?;
    let grid = match &args.grid {
        Some(g) => g.values().to_vec(),
        None => crate::verify::fit_grid(),
    };
    let eps = check_eps(args.eps.unwrap_or(crate::tolerances::SMOOTHING_EPS))?;
    if grid
        .iter()
        .any(|x| !(*x >= 1.0) || *x > (1u64 << 24) as f64)
    {
        return Err(HarnessError::usage("grid values must lie in [1, 2^24]"));
    }
    let samples = smoothed_sums(h, &grid, eps)?;
    let fitted = fit_main_terms(h, &samples)?;
    let loo = leave_one_out(h, &samples)?;
    let residue = if args.residue {
        let mut cfg = ShiftConfig::new(h)?;
        cfg.d0_factor = args.d0_factor.map(|c| c.0);
        let r = residue_c1(h, &cfg)?;
        Some(ResidueRow {
            value: ComplexArg(r.value),
            second_radius: ComplexArg(r.check),
            simple_part: ComplexArg(r.simple_part),
            radii: CONTOUR_RADII,
            radius_spread: r.radius_spread(),
            status: if r.verified { "verified" } else { "UNVERIFIED" },
        })
    } else {
        None
    };
    let meta = Provenance::new(
        "fit",
        ctx.profile,
        &args,
        json!({ "grid": grid, "eps": eps, "jobs": ctx.jobs }),
    )?;
    let report = json!({
        "provenance": meta,
        "samples": samples.iter().map(|s| SampleRow {
            x: s.x,
            sharp: s.sharp,
            smoothed: s.smoothed,
            tail_bound: s.smoothed_tail_bound,
        }).collect::<Vec<_>>(),
        "fit": {
            "h": fitted.h,
            "c1_hat": fitted.c1_hat,
            "c2_hat": fitted.c2_hat,
            "residuals": fitted.residuals,
            "error_exponent": fitted.error_exponent,
            "condition_number": fitted.condition_number,
        },
        "leave_one_out": {
            "c1_dropped": loo.c1_dropped,
            "max_rel_variation": loo.max_rel_variation,
        },
        "residue_c1": residue,
    });
    write_json(args.out.as_deref(), &report)?;
    finish(args.out.as_deref(), || Ok(meta), start)
}

fn verify_all(ctx: &Context, args: VerifyArgs) -> Result<()> {
    let start = Instant::now();
    if let Some(bad) = args.only.iter().find(|&&i| !(1..=10).contains(&i)) {
        return Err(HarnessError::usage(format!(
            "no criterion {bad}; criteria are 1..=10"
        )));
    }
    let outcomes: Vec<Outcome> = run_criteria(&args.only, ctx.jobs);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if let Some(out) = args.out.as_deref() {
        let meta = Provenance::new("verify-all", ctx.profile, &args, json!({}))?;
        write_json(
            Some(out),
            &json!({ "provenance": meta, "criteria": outcomes }),
        )?;
        finish(Some(out), || Ok(meta), start)?;
    }
    if failed > 0 {
        return Err(HarnessError::Checks { failed });
    }
    Ok(())
}
