//! Self-check suite: each check compares a closed form or a pipeline result
//! against an independent route and reports pass or fail.
//!
//! Random samples come from a seeded ChaCha generator, so a given seed always
//! produces the same table.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::amplitude::{amplitude_eval, boundary_solution, integral_residual, AmplitudeProfile};
use crate::dispersion::{
    default_probe_eps, find_root, lambda_det, regularity_probe, scan_interval, RootOptions, DEFAULT_EXCLUSION,
};
use crate::error::Result;
use crate::kernel::{script_g, script_g_oracle};
use crate::oracle::{oracle_root, weighted_cosine, GridSpec, OracleOptions};
use crate::param_core::{PhysicalParams, ScaledPoint, Sign};
use crate::propagator::{complex_erfc, complex_erfcx, free_td_green, hat_green, i1_integral, i1_quadrature, td_green};
use crate::quad::{graded_edges, Rule};
use crate::semiclassical::{classical_dispersion, compare_report, leading_dispersion_physical};
use crate::series::{decay_bound, functional_residual, lambda_seq, breve_f};

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: String,
    /// `None` when the check was skipped.
    pub passed: Option<bool>,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    fn new(id: u32, name: &str, passed: bool, detail: String, start: Instant) -> Self {
        Self { id, name: name.into(), passed: Some(passed), detail, seconds: start.elapsed().as_secs_f64() }
    }

    fn failed(id: u32, name: &str, err: impl std::fmt::Display, start: Instant) -> Self {
        Self::new(id, name, false, format!("error: {err}"), start)
    }

    fn skipped(id: u32, name: &str) -> Self {
        Self { id, name: name.into(), passed: None, detail: "skipped".into(), seconds: 0.0 }
    }

    pub fn status(&self) -> &'static str {
        match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        }
    }
}

/// Suite settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub seed: u64,
    pub grid: GridSpec,
    /// Run the Fredholm cross-validation (slow).
    pub oracle: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { seed: 20240607, grid: GridSpec::default(), oracle: true }
    }
}

/// Reference point used by the single-point checks.
pub const REF_QT: f64 = 0.05;
pub const REF_C0: f64 = 1e-3;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Random point inside the plasmon bracket and outside the exclusion zones.
pub fn random_regime_point<R: Rng>(r: &mut R) -> ScaledPoint {
    let opts = RootOptions::default();
    loop {
        let qt = r.gen_range(0.01..0.2);
        let (lo, hi) = match scan_interval(qt, &opts) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let wt = r.gen_range(lo..hi);
        if (wt - 2.0 * qt).abs() > DEFAULT_EXCLUSION && (wt - qt * qt).abs() > DEFAULT_EXCLUSION {
            return ScaledPoint::real(qt, wt);
        }
    }
}

fn log_uniform<R: Rng>(r: &mut R, lo: f64, hi: f64) -> f64 {
    (r.gen_range(lo.ln()..hi.ln())).exp()
}

/// Kernel closed form against direct quadrature at 200 random samples.
pub fn check_kernel(seed: u64) -> CheckOutcome {
    let (id, name) = (1, "kernel closed form vs quadrature");
    let start = Instant::now();
    let mut r = rng(seed, 1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = random_regime_point(&mut r);
        let sigma = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let w = Complex64::new(-1.0 + sigma * p.wt.re, 0.0);
        let z = r.gen_range(-6.0..6.0);
        let zp = r.gen_range(-6.0..6.0);
        match (script_g(w, p.qt, z, zp), script_g_oracle(w, p.qt, z, zp)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).norm() / b.norm()),
            (Err(e), _) | (_, Err(e)) => return CheckOutcome::failed(id, name, e, start),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    CheckOutcome::new(id, name, worst <= 1e-8 && secs <= 10.0, format!("max rel err {worst:.2e}, {secs:.2} s"), start)
}

/// Functional equation residual at 20 random `s` with `Re s > -1`.
pub fn check_functional_equation(seed: u64) -> CheckOutcome {
    let (id, name) = (2, "functional equation of the series solution");
    let start = Instant::now();
    let run = || -> Result<f64> {
        let root = find_root(REF_QT, REF_C0, &RootOptions::default())?;
        let profile = AmplitudeProfile::at_root(&root)?;
        let p = root.point();
        let alphas = [p.alpha(Sign::Plus)?, p.alpha(Sign::Minus)?];
        let mut r = rng(seed, 2);
        let mut worst = 0.0f64;
        let mut n = 0;
        while n < 20 {
            let s = Complex64::new(r.gen_range(-0.9..3.0), r.gen_range(-2.0..2.0));
            // Removable points of the right side lose digits to cancellation.
            let near = alphas.iter().any(|a| (s + 1.0 - a).norm() < 0.05 || (s + 1.0 + a).norm() < 0.05)
                || [2.0 + p.qt, 2.0 - p.qt].iter().any(|c| (s + c).norm() < 0.05);
            if near {
                continue;
            }
            let res = functional_residual(s, &profile.expansion, &p, REF_C0)?;
            worst = worst.max(res.norm() / breve_f(s, &profile.expansion)?.norm());
            n += 1;
        }
        Ok(worst)
    };
    match run() {
        Ok(w) => CheckOutcome::new(id, name, w <= 1e-9, format!("max rel residual {w:.2e}"), start),
        Err(e) => CheckOutcome::failed(id, name, e, start),
    }
}

/// `Λ(ω̃) = Λ(-ω̃)` at 100 random points.
pub fn check_symmetry(seed: u64) -> CheckOutcome {
    let (id, name) = (3, "dispersion determinant even in energy");
    let start = Instant::now();
    let mut r = rng(seed, 3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_regime_point(&mut r);
        let c0 = log_uniform(&mut r, 1e-4, 1e-2);
        match (lambda_det(&p, c0), lambda_det(&p.reflected(), c0)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).norm() / a.norm()),
            (Err(e), _) | (_, Err(e)) => return CheckOutcome::failed(id, name, e, start),
        }
    }
    CheckOutcome::new(id, name, worst <= 1e-12, format!("max rel asymmetry {worst:.2e}"), start)
}

/// Series roots against the Fredholm oracle, plus mode-shape agreement.
pub fn check_oracle(grid: &GridSpec) -> (CheckOutcome, CheckOutcome) {
    let (id4, name4) = (4, "series root vs Fredholm oracle root");
    let (id5, name5) = (5, "oracle eigenfunction vs series amplitude");
    let start = Instant::now();
    let opts = OracleOptions { grid: *grid, ..OracleOptions::default() };
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    let mut cosine = None;
    let mut parts = Vec::new();
    for (qt, c0) in [(0.02, 1e-3), (0.05, 1e-3), (0.05, 1e-2)] {
        let t = Instant::now();
        let series = match find_root(qt, c0, &RootOptions::default()) {
            Ok(r) => r,
            Err(e) => {
                let f = CheckOutcome::failed(id4, name4, e, start);
                return (f, CheckOutcome::skipped(id5, name5));
            }
        };
        let oracle = match oracle_root(qt, c0, &opts) {
            Ok(r) => r,
            Err(e) => {
                let f = CheckOutcome::failed(id4, name4, e, start);
                return (f, CheckOutcome::skipped(id5, name5));
            }
        };
        slowest = slowest.max(t.elapsed().as_secs_f64());
        let rel = (series.wt - oracle.wt).abs() / series.wt;
        worst = worst.max(rel);
        parts.push(format!("({qt}, {c0:e}): {rel:.1e}"));
        if (qt, c0) == (REF_QT, REF_C0) {
            let t5 = Instant::now();
            let c = AmplitudeProfile::at_root(&series).map(|p| {
                let shape: Vec<Complex64> =
                    oracle.nodes.iter().map(|&z| (-z).exp() * amplitude_eval(z, &p)).collect();
                weighted_cosine(&oracle.eigenfunction, &shape, &oracle.weights)
            });
            cosine = Some(match c {
                Ok(c) => CheckOutcome::new(id5, name5, c >= 0.9999, format!("weighted cosine {c:.15}"), t5),
                Err(e) => CheckOutcome::failed(id5, name5, e, t5),
            });
        }
    }
    let c4 = CheckOutcome::new(
        id4,
        name4,
        worst <= 1e-3 && slowest <= 60.0,
        format!("max rel diff {worst:.2e} [{}], slowest point {slowest:.1} s", parts.join(", ")),
        start,
    );
    (c4, cosine.unwrap_or_else(|| CheckOutcome::skipped(id5, name5)))
}

/// Integral-equation residual at a root and after detuning by 5%.
pub fn check_integral_residual(grid: &GridSpec) -> CheckOutcome {
    let (id, name) = (6, "integral equation residual of the amplitude");
    let start = Instant::now();
    let run = || -> Result<(f64, f64)> {
        let root = find_root(REF_QT, REF_C0, &RootOptions::default())?;
        let at = integral_residual(&AmplitudeProfile::at_root(&root)?, grid)?;
        let detuned = AmplitudeProfile::least_singular(ScaledPoint::real(REF_QT, 1.05 * root.wt), REF_C0, root.n_max)?;
        Ok((at, integral_residual(&detuned, grid)?))
    };
    match run() {
        Ok((a, d)) => CheckOutcome::new(
            id,
            name,
            a <= 1e-6 && d >= 10.0 * a,
            format!("at root {a:.2e}, detuned 5% {d:.2e}"),
            start,
        ),
        Err(e) => CheckOutcome::failed(id, name, e, start),
    }
}

/// Exact roots against the leading and corrected asymptotic laws.
pub fn check_semiclassical() -> CheckOutcome {
    let (id, name) = (7, "semiclassical agreement");
    let start = Instant::now();
    let rows = match compare_report(&[0.02, 0.05, 0.08], REF_C0) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::failed(id, name, e, start),
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for row in &rows {
        match (row.leading_sq_deviation(), row.predicted_correction(), row.rel_dev_leading, row.rel_dev_corrected) {
            (Some(dev), Some(pred), Some(lead), Some(corr)) => {
                ok &= dev <= 1.5 * pred && corr < lead;
                parts.push(format!("q={}: dev {dev:.3} <= {:.3}, corrected {corr:.1e} < {lead:.1e}", row.qt, 1.5 * pred));
            }
            _ => {
                ok = false;
                parts.push(format!("q={}: {}", row.qt, row.error.clone().unwrap_or_default()));
            }
        }
    }
    CheckOutcome::new(id, name, ok, parts.join("; "), start)
}

/// Classical and leading-order quantum laws coincide.
pub fn check_classical_identity(seed: u64) -> CheckOutcome {
    let (id, name) = (8, "classical constant equals leading quantum law");
    let start = Instant::now();
    let mut r = rng(seed, 8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let params = match PhysicalParams::new(r.gen_range(0.5..3.0), r.gen_range(0.1..10.0), log_uniform(&mut r, 1e-4, 1.0)) {
            Ok(p) => p,
            Err(e) => return CheckOutcome::failed(id, name, e, start),
        };
        let q = r.gen_range(0.001..0.2) * params.beta;
        match (classical_dispersion(q, &params), leading_dispersion_physical(q, &params)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).abs() / a),
            (Err(e), _) | (_, Err(e)) => return CheckOutcome::failed(id, name, e, start),
        }
    }
    CheckOutcome::new(id, name, worst <= 1e-14, format!("max rel diff {worst:.2e}"), start)
}

/// Coefficient decay bounds over 50 random points.
pub fn check_coefficient_bounds(seed: u64) -> CheckOutcome {
    let (id, name) = (9, "series coefficient decay bounds");
    let start = Instant::now();
    let mut r = rng(seed, 9);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = random_regime_point(&mut r);
        let c0 = log_uniform(&mut r, 1e-4, 1e-1);
        let c = match lambda_seq(&p, c0, 30) {
            Ok(c) => c,
            Err(e) => return CheckOutcome::failed(id, name, e, start),
        };
        for n in 1..=30 {
            let b = decay_bound(1.5 * c0, n);
            let bs = decay_bound(0.375 * c0, n);
            for v in [c.lambda_plus[n], c.lambda_minus[n]] {
                if b > 0.0 {
                    worst = worst.max(v.norm() / b);
                } else if v.norm() > 0.0 {
                    worst = f64::INFINITY;
                }
            }
            if bs > 0.0 {
                worst = worst.max(c.lambda_slashed[n].norm() / bs);
            } else if c.lambda_slashed[n].norm() > 0.0 {
                worst = f64::INFINITY;
            }
        }
    }
    CheckOutcome::new(id, name, worst <= 1.0, format!("max |coefficient| / bound = {worst:.3}"), start)
}

/// `e^{ξ²} erfc(ξ) = (2/√π) ∫₀^∞ e^{-2ξs - s²} ds` by quadrature, `Re ξ ≥ 0`.
pub fn erfcx_by_quadrature(xi: Complex64) -> Complex64 {
    let rule = Rule::new(20);
    let edges = graded_edges(0.0, 9.0, 120, 0.01);
    FRAC_2_SQRT_PI * rule.integrate_c(&edges, |s| (-2.0 * xi * s - s * s).exp())
}

/// Largest relative error of [`complex_erfc`] against the quadrature oracle
/// on a polar grid with `|ξ| ≤ radius`.
pub fn erfc_quadrature_error(radius: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..=20 {
        for j in 0..=24 {
            let rho = radius * i as f64 / 20.0;
            let theta = PI * (j as f64 / 24.0 - 0.5);
            let xi = Complex64::from_polar(rho, theta);
            let reference = (-xi * xi).exp() * erfcx_by_quadrature(xi);
            worst = worst.max((complex_erfc(xi) - reference).norm() / reference.norm());
            // Left half-plane through reflection of the oracle.
            let refl = Complex64::new(2.0, 0.0) - reference;
            worst = worst.max((complex_erfc(-xi) - refl).norm() / refl.norm());
            let rx = erfcx_by_quadrature(xi);
            worst = worst.max((complex_erfcx(xi) - rx).norm() / rx.norm());
        }
    }
    worst
}

/// Relative jump-condition residuals of `Ĝ` at `z = z'` and at the plane.
pub fn green_jump_residual(w: Complex64, k: f64, zp: f64, beta: f64) -> Result<f64> {
    let h = 1e-5;
    let g = |z: f64| hat_green(w, k, z, zp, beta);
    let right = |a: f64| -> Result<Complex64> { Ok((-3.0 * g(a)? + 4.0 * g(a + h)? - g(a + 2.0 * h)?) / (2.0 * h)) };
    let left = |a: f64| -> Result<Complex64> { Ok((3.0 * g(a)? - 4.0 * g(a - h)? + g(a - 2.0 * h)?) / (2.0 * h)) };
    // Unit source: the derivative drops by one across z = z'.
    let source = (right(zp)? - left(zp)? + 1.0).norm();
    // Delta well: the derivative drops by 2β Ĝ(0, z') across the plane.
    let g0 = g(0.0)?;
    let well = (right(0.0)? - left(0.0)? + 2.0 * beta * g0).norm() / (2.0 * beta * g0).norm();
    Ok(source.max(well))
}

/// Bound-state part of the time-domain propagator rebuilt from `I₁`:
/// `I = 2iβ e^{iβ²t - βZ} - 2iβ(β - ∂_Z) I₁`, `G - G_f = I e^{ir²/4t} / (8πit)`.
pub fn td_green_from_i1(t: f64, r_par: f64, z: f64, zp: f64, beta: f64) -> Result<Complex64> {
    let zs = z.abs() + zp.abs();
    let h = 1e-4;
    let phi = std::f64::consts::FRAC_PI_4;
    let i1 = i1_quadrature(t, zs, beta, phi)?;
    let d = (i1_quadrature(t, zs + h, beta, phi)? - i1_quadrature(t, zs - h, beta, phi)?) / (2.0 * h);
    let ib = Complex64::new(0.0, 2.0 * beta);
    let big_i = ib * Complex64::new(-beta * zs, beta * beta * t).exp() - ib * (beta * i1 - d);
    let phase = Complex64::new(0.0, r_par * r_par / (4.0 * t)).exp();
    Ok(big_i * phase / Complex64::new(0.0, 8.0 * PI * t))
}

/// Propagator checks: jump conditions, `I₁`, time-domain propagator, `erfc`.
pub fn check_propagator(seed: u64) -> CheckOutcome {
    let (id, name) = (10, "propagator closed forms");
    let start = Instant::now();
    let mut r = rng(seed, 10);
    let run = |r: &mut ChaCha8Rng| -> Result<(f64, f64, f64, f64)> {
        let mut jump = 0.0f64;
        for _ in 0..20 {
            let w = Complex64::new(r.gen_range(-2.0..0.5), r.gen_range(-0.5..0.5));
            let k = r.gen_range(0.0..1.0);
            let beta = r.gen_range(0.5..2.0);
            if ((Complex64::new(k * k, 0.0) - w).sqrt() - beta).norm() < 0.1 {
                continue;
            }
            jump = jump.max(green_jump_residual(w, k, r.gen_range(0.2..2.0), beta)?);
        }
        let mut i1 = 0.0f64;
        let mut td = 0.0f64;
        for _ in 0..20 {
            let t = r.gen_range(0.2..5.0);
            let z = r.gen_range(0.0..4.0);
            let beta = r.gen_range(0.5..2.0);
            let a = i1_integral(t, z, beta)?;
            let b = i1_quadrature(t, z, beta, std::f64::consts::FRAC_PI_4)?;
            i1 = i1.max((a - b).norm() / b.norm());
            let (rp, z1, z2) = (r.gen_range(0.0..2.0), r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5));
            let dz = z1 - z2;
            let bound = td_green(t, rp, z1, z2, beta)? - free_td_green(t, (rp * rp + dz * dz).sqrt());
            let rebuilt = td_green_from_i1(t, rp, z1, z2, beta)?;
            td = td.max((bound - rebuilt).norm() / rebuilt.norm());
        }
        Ok((jump, i1, td, erfc_quadrature_error(5.0)))
    };
    match run(&mut r) {
        Ok((jump, i1, td, erfc)) => CheckOutcome::new(
            id,
            name,
            jump <= 1e-6 && i1 <= 1e-8 && td <= 1e-6 && erfc <= 1e-12,
            format!("jump {jump:.1e}, I1 {i1:.1e}, time-domain {td:.1e}, erfc {erfc:.1e}"),
            start,
        ),
        Err(e) => CheckOutcome::failed(id, name, e, start),
    }
}

/// Behaviour of `Λ` across `ω̃ = 2q̃`.
pub fn check_regularity() -> CheckOutcome {
    let (id, name) = (11, "regularity of the determinant at twice the wave number");
    let start = Instant::now();
    match regularity_probe(REF_QT, REF_C0, &default_probe_eps()) {
        Ok(rep) => {
            let combo = rep.grouped.iter().map(|g| g.1).fold(0.0, f64::max);
            let entries = rep.grouped.iter().map(|g| g.2).fold(0.0, f64::max);
            CheckOutcome::new(
                id,
                name,
                rep.slope >= 1.0 && rep.bounded,
                format!(
                    "slope {:.3}, max |Lambda| {:.4} vs {:.4} at 0.05, grouped entry <= {combo:.3e} while raw entries reach {entries:.1e}",
                    rep.slope, rep.max_abs, rep.reference
                ),
                start,
            )
        }
        Err(e) => CheckOutcome::failed(id, name, e, start),
    }
}

/// Rank deficiency and null-vector agreement at a root.
pub fn check_nullity() -> CheckOutcome {
    let (id, name) = (12, "rank and null vector at a root");
    let start = Instant::now();
    let run = || -> Result<(f64, f64)> {
        let root = find_root(REF_QT, REF_C0, &RootOptions::default())?;
        let sol = boundary_solution(&root)?;
        Ok((root.nullity_gap, sol.disagreement))
    };
    match run() {
        Ok((gap, dis)) => CheckOutcome::new(
            id,
            name,
            gap >= 10.0 && dis <= 1e-6,
            format!("singular value gap {gap:.2e}, minor vs SVD {dis:.2e}"),
            start,
        ),
        Err(e) => CheckOutcome::failed(id, name, e, start),
    }
}

/// Runs every check in order. Checks 4 and 5 are skipped unless
/// `cfg.oracle` is set.
pub fn run_all(cfg: &CheckConfig) -> Vec<CheckOutcome> {
    let mut out = vec![check_kernel(cfg.seed), check_functional_equation(cfg.seed), check_symmetry(cfg.seed)];
    if cfg.oracle {
        let (a, b) = check_oracle(&cfg.grid);
        out.push(a);
        out.push(b);
    } else {
        out.push(CheckOutcome::skipped(4, "series root vs Fredholm oracle root"));
        out.push(CheckOutcome::skipped(5, "oracle eigenfunction vs series amplitude"));
    }
    out.push(check_integral_residual(&cfg.grid));
    out.push(check_semiclassical());
    out.push(check_classical_identity(cfg.seed));
    out.push(check_coefficient_bounds(cfg.seed));
    out.push(check_propagator(cfg.seed));
    out.push(check_regularity());
    out.push(check_nullity());
    out
}
