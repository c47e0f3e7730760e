use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use plasmon_core::checks::{run_all, CheckConfig, REF_QT};
use plasmon_core::{
    amplitude_eval, build_operator, compare_report, dispersion_sweep, far_field, find_root, hat_green, td_green,
    AmplitudeProfile, Error, RootOptions,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::emit::{emit, finite, num, opt, Record};

/// What went wrong in a run that still produced output.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub not_found: bool,
    /// Rows that failed for reasons other than a missing root.
    pub row_errors: bool,
    pub failed_checks: bool,
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain_error",
        Error::NotFound { .. } => "not_found",
        Error::Numeric(_) => "numeric_error",
        Error::Degenerate(_) => "degenerate",
    }
}

/// `n` evenly spaced values; `n == 1` gives `lo`.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn root_options(cfg: &RunConfig) -> RootOptions {
    RootOptions { tolerance: cfg.tolerance, ..RootOptions::default() }
}

// ---------------------------------------------------------------- dispersion

#[derive(Debug, Args)]
pub struct DispersionArgs {
    /// Smallest scaled wave number
    #[arg(long, allow_hyphen_values = true)]
    pub qmin: f64,
    /// Largest scaled wave number
    #[arg(long, allow_hyphen_values = true)]
    pub qmax: f64,
    /// Number of grid points
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Serialize)]
struct DispersionRecord {
    qt: f64,
    wt: Option<f64>,
    det_residual: Option<f64>,
    nullity_gap: Option<f64>,
    q: f64,
    omega: Option<f64>,
    status: &'static str,
    /// `[re, im]` pairs; JSON only.
    null_vector: Option<Vec<[f64; 2]>>,
}

impl Record for DispersionRecord {
    fn header() -> Vec<&'static str> {
        vec!["qt", "wt", "det_residual", "nullity_gap", "q", "omega", "status"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            num(self.qt),
            opt(self.wt),
            opt(self.det_residual),
            opt(self.nullity_gap),
            num(self.q),
            opt(self.omega),
            self.status.to_string(),
        ]
    }
}

pub fn dispersion<W: Write>(cfg: &RunConfig, args: &DispersionArgs, out: W) -> Result<Outcome> {
    for (name, q) in [("qmin", args.qmin), ("qmax", args.qmax)] {
        if !(q > 0.0 && q < 1.0) {
            bail!("{name} must lie in (0, 1), got {q}");
        }
    }
    if args.qmin > args.qmax {
        bail!("qmin = {} exceeds qmax = {}", args.qmin, args.qmax);
    }
    let grid = linspace(args.qmin, args.qmax, args.n);
    let beta = cfg.beta();
    let mut outcome = Outcome::default();
    let records: Vec<_> = grid
        .iter()
        .zip(dispersion_sweep(&grid, cfg.c0, &root_options(cfg)))
        .map(|(&qt, res)| match res {
            Ok(r) => DispersionRecord {
                qt,
                wt: Some(r.wt),
                det_residual: finite(r.det_residual),
                nullity_gap: finite(r.nullity_gap),
                q: qt * beta,
                omega: Some(r.wt * beta * beta),
                status: "ok",
                null_vector: Some(r.null_vector.iter().map(|c| [c.re, c.im]).collect()),
            },
            Err(e) => {
                eprintln!("qt = {qt}: {e}");
                match e {
                    Error::NotFound { .. } => outcome.not_found = true,
                    _ => outcome.row_errors = true,
                }
                DispersionRecord {
                    qt,
                    wt: None,
                    det_residual: None,
                    nullity_gap: None,
                    q: qt * beta,
                    omega: None,
                    status: status_of(&e),
                    null_vector: None,
                }
            }
        })
        .collect();
    emit(&records, cfg.format, out)?;
    Ok(outcome)
}

// ---------------------------------------------------------------- amplitude

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    /// Scaled wave number
    #[arg(long, allow_hyphen_values = true)]
    pub qt: f64,
    /// Largest distance from the plane
    #[arg(long, default_value_t = 10.0)]
    pub zmax: f64,
    /// Number of samples on [0, zmax]
    #[arg(long, default_value_t = 101)]
    pub n: usize,
}

#[derive(Debug, Serialize)]
struct AmplitudeRecord {
    z: f64,
    re_f: f64,
    im_f: f64,
    abs_f: f64,
    re_far: f64,
    im_far: f64,
    abs_far: f64,
}

impl Record for AmplitudeRecord {
    fn header() -> Vec<&'static str> {
        vec!["z", "re_f", "im_f", "abs_f", "re_far", "im_far", "abs_far"]
    }

    fn cells(&self) -> Vec<String> {
        [self.z, self.re_f, self.im_f, self.abs_f, self.re_far, self.im_far, self.abs_far].map(num).to_vec()
    }
}

pub fn amplitude<W: Write>(cfg: &RunConfig, args: &AmplitudeArgs, out: W) -> Result<Outcome> {
    if !(args.zmax > 0.0 && args.zmax.is_finite()) {
        bail!("zmax must be finite and > 0, got {}", args.zmax);
    }
    let root = find_root(args.qt, cfg.c0, &root_options(cfg))?;
    eprintln!("root: qt = {}, wt = {:.16e}, nullity gap = {:.3e}", root.qt, root.wt, root.nullity_gap);
    let profile = AmplitudeProfile::at_root(&root)?;
    let records: Vec<_> = linspace(0.0, args.zmax, args.n)
        .into_iter()
        .map(|z| {
            let f = amplitude_eval(z, &profile);
            let g = far_field(z, &profile);
            AmplitudeRecord { z, re_f: f.re, im_f: f.im, abs_f: f.norm(), re_far: g.re, im_far: g.im, abs_far: g.norm() }
        })
        .collect();
    emit(&records, cfg.format, out)?;
    Ok(Outcome::default())
}

// ---------------------------------------------------------------- semiclassical

#[derive(Debug, Args)]
pub struct SemiclassicalArgs {
    /// Comma-separated scaled wave numbers
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub qgrid: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct SemiclassicalRecord {
    qt: f64,
    wt_exact: Option<f64>,
    wt_leading: f64,
    wt_corrected: Option<f64>,
    rel_dev_leading: Option<f64>,
    rel_dev_corrected: Option<f64>,
    semiclassical: bool,
    status: String,
}

impl Record for SemiclassicalRecord {
    fn header() -> Vec<&'static str> {
        vec!["qt", "wt_exact", "wt_leading", "wt_corrected", "rel_dev_leading", "rel_dev_corrected", "semiclassical", "status"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            num(self.qt),
            opt(self.wt_exact),
            num(self.wt_leading),
            opt(self.wt_corrected),
            opt(self.rel_dev_leading),
            opt(self.rel_dev_corrected),
            self.semiclassical.to_string(),
            self.status.clone(),
        ]
    }
}

pub fn semiclassical<W: Write>(cfg: &RunConfig, args: &SemiclassicalArgs, out: W) -> Result<Outcome> {
    let rows = compare_report(&args.qgrid, cfg.c0)?;
    let mut outcome = Outcome::default();
    let records: Vec<_> = rows
        .into_iter()
        .map(|r| {
            if let Some(e) = &r.error {
                eprintln!("qt = {}: {e}", r.qt);
                outcome.not_found = true;
            }
            SemiclassicalRecord {
                qt: r.qt,
                wt_exact: r.wt_exact,
                wt_leading: r.wt_leading,
                wt_corrected: r.wt_corrected,
                rel_dev_leading: r.rel_dev_leading,
                rel_dev_corrected: r.rel_dev_corrected,
                semiclassical: r.regime.semiclassical,
                status: if r.error.is_some() { "failed".into() } else { "ok".into() },
            }
        })
        .collect();
    emit(&records, cfg.format, out)?;
    Ok(outcome)
}

// ---------------------------------------------------------------- propagator

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropagatorKind {
    /// Energy-domain propagator at fixed in-plane wave number
    Hat,
    /// Time-domain propagator at fixed in-plane separation
    Time,
}

#[derive(Debug, Args)]
pub struct PropagatorArgs {
    #[arg(long, value_enum, default_value_t = PropagatorKind::Hat)]
    pub kind: PropagatorKind,
    /// Real part of the energy (hat)
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub w_re: f64,
    /// Imaginary part of the energy (hat)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w_im: f64,
    /// In-plane wave number (hat)
    #[arg(long, default_value_t = 0.1)]
    pub k: f64,
    /// Time (time)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t: f64,
    /// In-plane separation (time)
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Source position
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub zp: f64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub zmin: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub zmax: f64,
    #[arg(long, default_value_t = 101)]
    pub n: usize,
}

#[derive(Debug, Serialize)]
struct PropagatorRecord {
    re: Option<f64>,
    im: Option<f64>,
    z: f64,
    zp: f64,
    /// Wave number for `hat`, separation for `time`.
    k_or_r: f64,
    /// Energy for `hat` (real part), time for `time`.
    w_or_t: f64,
    w_im: f64,
    status: &'static str,
}

impl Record for PropagatorRecord {
    fn header() -> Vec<&'static str> {
        vec!["re", "im", "z", "zp", "k_or_r", "w_or_t", "w_im", "status"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            opt(self.re),
            opt(self.im),
            num(self.z),
            num(self.zp),
            num(self.k_or_r),
            num(self.w_or_t),
            num(self.w_im),
            self.status.to_string(),
        ]
    }
}

pub fn propagator<W: Write>(cfg: &RunConfig, args: &PropagatorArgs, out: W) -> Result<Outcome> {
    if args.zmin > args.zmax {
        bail!("zmin = {} exceeds zmax = {}", args.zmin, args.zmax);
    }
    let beta = cfg.beta();
    let records: Vec<_> = linspace(args.zmin, args.zmax, args.n)
        .into_iter()
        .map(|z| {
            let (value, k_or_r, w_or_t, w_im) = match args.kind {
                PropagatorKind::Hat => {
                    (hat_green(Complex64::new(args.w_re, args.w_im), args.k, z, args.zp, beta), args.k, args.w_re, args.w_im)
                }
                PropagatorKind::Time => (td_green(args.t, args.r, z, args.zp, beta), args.r, args.t, 0.0),
            };
            let (re, im, status) = match value {
                Ok(v) if v.re.is_finite() && v.im.is_finite() => (Some(v.re), Some(v.im), "ok"),
                Ok(_) => (None, None, "numeric_error"),
                Err(e) => (None, None, status_of(&e)),
            };
            PropagatorRecord { re, im, z, zp: args.zp, k_or_r, w_or_t, w_im, status }
        })
        .collect();
    if let Some(r) = records.iter().find(|r| r.status == "domain_error") {
        bail!("propagator undefined at z = {}, z' = {}", r.z, r.zp);
    }
    emit(&records, cfg.format, out)?;
    Ok(Outcome::default())
}

// ---------------------------------------------------------------- check

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Include the Fredholm cross-validation (slow)
    #[arg(long)]
    pub oracle: bool,
    /// Write the discretized operator at the series root to this file
    #[arg(long)]
    pub dump_operator: Option<PathBuf>,
    /// Wave number for --dump-operator
    #[arg(long, default_value_t = REF_QT)]
    pub qt: f64,
}

#[derive(Debug, Serialize)]
struct CheckRecord {
    criterion: u32,
    status: &'static str,
    name: String,
    detail: String,
    seconds: f64,
}

impl Record for CheckRecord {
    fn header() -> Vec<&'static str> {
        vec!["criterion", "status", "name", "detail", "seconds"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.criterion.to_string(),
            self.status.to_string(),
            self.name.clone(),
            self.detail.clone(),
            format!("{:.3}", self.seconds),
        ]
    }
}

pub fn check<W: Write>(cfg: &RunConfig, args: &CheckArgs, out: W) -> Result<Outcome> {
    if let Some(path) = &args.dump_operator {
        let root = find_root(args.qt, cfg.c0, &root_options(cfg))?;
        let op = build_operator(&root.point(), cfg.c0, &cfg.grid)?;
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        op.write_text(&mut w)?;
        w.flush()?;
        eprintln!("operator of size {} written to {}", cfg.grid.n_points, path.display());
    }

    let suite = CheckConfig { seed: cfg.seed, grid: cfg.grid, oracle: args.oracle };
    let results = run_all(&suite);
    let failed = results.iter().any(|c| c.passed == Some(false));
    let records: Vec<_> = results
        .into_iter()
        .map(|c| CheckRecord { criterion: c.id, status: c.status(), name: c.name, detail: c.detail, seconds: c.seconds })
        .collect();
    emit(&records, cfg.format, out)?;
    Ok(Outcome { failed_checks: failed, ..Outcome::default() })
}
