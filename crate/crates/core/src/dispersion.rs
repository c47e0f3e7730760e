//! Dispersion determinant `Λ(ω̃, q̃) = det(𝔄 - I)` and its real roots.
//!
//! Rows and columns of `𝔄` are indexed by the six boundary values in the order
//! `(+, -, ++, -+, +-, --)`, that is `F̆(q̃)`, `F̆(-q̃)`, `F̆(1+α̃₊)`, `F̆(1-α̃₊)`,
//! `F̆(1+α̃₋)`, `F̆(1-α̃₋)`. Row `μ` evaluates the partial-fraction expansion at
//! the abscissa of boundary value `μ`, and column `ν` collects the part of that
//! expansion proportional to boundary value `ν`.

use nalgebra::SMatrix;
use num_complex::Complex64;
use roots::{find_root_brent, Convergency};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param_core::{alpha_sigma, ScaledPoint, Sign};
use crate::series::{default_n_max, lambda_seq, BoundaryValues};

pub type Mat6 = SMatrix<Complex64, 6, 6>;

/// Exclusion radius around `ω̃ = ±2q̃` and `ω̃ = ±q̃²`.
pub const DEFAULT_EXCLUSION: f64 = 1e-3;

/// Column labels in matrix order.
pub const INDEX_LABELS: [&str; 6] = ["+", "-", "++", "-+", "+-", "--"];

/// Position of column `ς σ` (boundary value `F̆(1 + ς α̃_σ)`).
pub fn shift_index(varsigma: Sign, sigma: Sign) -> usize {
    match (varsigma, sigma) {
        (Sign::Plus, Sign::Plus) => 2,
        (Sign::Minus, Sign::Plus) => 3,
        (Sign::Plus, Sign::Minus) => 4,
        (Sign::Minus, Sign::Minus) => 5,
    }
}

/// The 6×6 matrix at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionMatrix {
    pub entries: [[Complex64; 6]; 6],
    pub point: ScaledPoint,
    pub c0: f64,
    pub n_max: usize,
}

impl DispersionMatrix {
    pub fn to_matrix(&self) -> Mat6 {
        Mat6::from_fn(|i, j| self.entries[i][j])
    }

    /// `𝔄 - I`.
    pub fn shifted(&self) -> Mat6 {
        self.to_matrix() - Mat6::identity()
    }
}

/// Coefficients multiplying the boundary values in the zeroth residues.
///
/// Returns `(c_q, c_plus, c_minus)` with `R₀^σ = P (c_q F̆(q̃) + c_plus F̆(1+α̃_σ) +
/// c_minus F̆(1-α̃_σ))`, `P = 4C₀/(4q̃² - ω̃²)`.
fn residue_weights(point: &ScaledPoint, sigma: Sign, a: Complex64) -> (Complex64, Complex64, Complex64) {
    let q = point.qt;
    let detune = q * q - sigma.value() * point.wt;
    let plus = (a + 1.0) * (a + 1.0) - q * q;
    let minus = (a - 1.0) * (a - 1.0) - q * q;
    let c_q = -q * (a + 1.0) / detune;
    let c_plus = -(a + 1.0) * (a + 1.0) / detune * minus / (4.0 * a);
    let c_minus = -plus / (4.0 * a);
    (c_q, c_plus, c_minus)
}

fn check_exclusion(point: &ScaledPoint, exclusion: f64) -> Result<()> {
    let q = point.qt;
    let w = point.wt;
    let spots = [(2.0 * q, "2q"), (-2.0 * q, "-2q"), (q * q, "q^2"), (-q * q, "-q^2")];
    for (centre, name) in spots {
        let d = (w - centre).norm();
        if d < exclusion {
            return Err(Error::domain(format!(
                "wt = {w} lies within {d:e} of the singular point {name} = {centre} (exclusion {exclusion:e})"
            )));
        }
    }
    Ok(())
}

/// Assembles `𝔄` with the default exclusion radius.
pub fn matrix_elements(point: &ScaledPoint, c0: f64, n_max: usize) -> Result<DispersionMatrix> {
    matrix_elements_with(point, c0, n_max, DEFAULT_EXCLUSION)
}

/// Assembles `𝔄`, refusing points closer than `exclusion` to `±2q̃` or `±q̃²`.
pub fn matrix_elements_with(point: &ScaledPoint, c0: f64, n_max: usize, exclusion: f64) -> Result<DispersionMatrix> {
    if !(point.qt > 0.0 && point.qt < 1.0) {
        return Err(Error::domain(format!("qt must lie in (0, 1), got {}", point.qt)));
    }
    check_exclusion(point, exclusion)?;
    let q = point.qt;
    let w = point.wt;
    let denom = 4.0 * q * q - w * w;
    if denom.norm() == 0.0 {
        return Err(Error::domain("4q^2 - w^2 vanishes"));
    }
    let prefactor = 4.0 * c0 / denom;
    let coeffs = lambda_seq(point, c0, n_max)?;
    let alphas = [alpha_sigma(point, Sign::Plus)?, alpha_sigma(point, Sign::Minus)?];
    let weights = [residue_weights(point, Sign::Plus, alphas[0]), residue_weights(point, Sign::Minus, alphas[1])];
    let rows = BoundaryValues::abscissae(point)?;

    let mut entries = [[Complex64::new(0.0, 0.0); 6]; 6];
    for (mu, &s) in rows.iter().enumerate() {
        let mut col = [Complex64::new(0.0, 0.0); 6];
        for (k, sigma) in Sign::BOTH.into_iter().enumerate() {
            let a = alphas[k];
            let (c_q, c_plus, c_minus) = weights[k];
            let mut ladder = Complex64::new(0.0, 0.0);
            for (n, lam) in coeffs.family(sigma).iter().enumerate() {
                ladder += lam / (s + a + (2 * n + 1) as f64);
            }
            col[0] += c_q * ladder;
            col[shift_index(Sign::Plus, sigma)] += c_plus * ladder;
            col[shift_index(Sign::Minus, sigma)] += c_minus * ladder;
        }
        let mut slashed = Complex64::new(0.0, 0.0);
        for (n, lam) in coeffs.lambda_slashed.iter().enumerate() {
            slashed += lam / (s + q + 2.0 * (n + 1) as f64);
        }
        col[0] += slashed;
        col[1] += slashed;
        for (nu, v) in col.iter().enumerate() {
            entries[mu][nu] = prefactor * v;
        }
    }
    Ok(DispersionMatrix { entries, point: *point, c0, n_max })
}

/// Determinant by LU factorization with partial pivoting.
pub fn det_lu(m: &Mat6) -> Complex64 {
    m.lu().determinant()
}

/// `Λ(ω̃, q̃)` with the default truncation.
pub fn lambda_det(point: &ScaledPoint, c0: f64) -> Result<Complex64> {
    lambda_det_with(point, c0, default_n_max(c0), DEFAULT_EXCLUSION)
}

pub fn lambda_det_with(point: &ScaledPoint, c0: f64, n_max: usize, exclusion: f64) -> Result<Complex64> {
    Ok(det_lu(&matrix_elements_with(point, c0, n_max, exclusion)?.shifted()))
}

/// Singular values in ascending order and the right singular vector of the
/// smallest one.
pub fn smallest_singular(m: &Mat6) -> ([f64; 6], [Complex64; 6]) {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap());
    let mut sv = [0.0; 6];
    for (k, &i) in order.iter().enumerate() {
        sv[k] = svd.singular_values[i];
    }
    let row = order[0];
    let mut v = [Complex64::new(0.0, 0.0); 6];
    for (j, slot) in v.iter_mut().enumerate() {
        *slot = v_t[(row, j)].conj();
    }
    (sv, v)
}

/// Root-search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    /// Relative margin `δ` kept from both ends of `(q̃², q̃)`.
    pub margin: f64,
    pub scan_points: usize,
    /// Truncation; `None` selects [`default_n_max`].
    pub n_max: Option<usize>,
    pub exclusion: f64,
    /// Accept a sign-change-free scan if `min |Λ|` falls below this.
    pub tolerance: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { margin: 0.02, scan_points: 200, n_max: None, exclusion: DEFAULT_EXCLUSION, tolerance: 1e-10 }
    }
}

/// A real root of `Λ` together with null-space diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionRoot {
    pub qt: f64,
    pub wt: f64,
    pub c0: f64,
    /// `|Λ|` at the returned energy.
    pub det_residual: f64,
    /// Second-smallest over smallest singular value of `𝔄 - I`, with the
    /// smallest floored at `ε·σ_max`.
    pub nullity_gap: f64,
    /// Right singular vector of the smallest singular value, scaled so that
    /// the `--` component equals one.
    pub null_vector: [Complex64; 6],
    pub singular_values: [f64; 6],
    pub n_max: usize,
    /// Midpoints of further sign changes seen in the scan.
    pub other_candidates: Vec<f64>,
}

impl DispersionRoot {
    pub fn point(&self) -> ScaledPoint {
        ScaledPoint::real(self.qt, self.wt)
    }
}

/// Scan interval for a given wave number.
pub fn scan_interval(qt: f64, opts: &RootOptions) -> Result<(f64, f64)> {
    if !(qt > 0.0 && qt < 1.0) {
        return Err(Error::domain(format!("qt must lie in (0, 1), got {qt}")));
    }
    // Nudged inward so rounding never lands the edge inside the exclusion zone.
    let lo = (qt * qt * (1.0 + opts.margin)).max((qt * qt + opts.exclusion) * (1.0 + 1e-9));
    let hi = qt * (1.0 - opts.margin);
    if !(lo < hi) {
        return Err(Error::domain(format!("empty search bracket ({lo}, {hi}) at qt = {qt}")));
    }
    Ok((lo, hi))
}

struct RootTolerance;

impl Convergency<f64> for RootTolerance {
    fn is_root_found(&mut self, y: f64) -> bool {
        y == 0.0
    }
    fn is_converged(&mut self, x1: f64, x2: f64) -> bool {
        (x1 - x2).abs() <= 4.0 * f64::EPSILON * x1.abs().max(x2.abs())
    }
    fn is_iteration_limit_reached(&mut self, iter: usize) -> bool {
        iter >= 200
    }
}

/// Sign changes of `Re Λ` on the scan grid, as `(left, right)` pairs.
fn scan(qt: f64, c0: f64, n_max: usize, opts: &RootOptions) -> Result<(Vec<(f64, f64)>, Vec<(f64, f64)>)> {
    let (lo, hi) = scan_interval(qt, opts)?;
    let m = opts.scan_points.max(2);
    let mut trace = Vec::with_capacity(m);
    for k in 0..m {
        let w = lo + (hi - lo) * k as f64 / (m - 1) as f64;
        let lam = lambda_det_with(&ScaledPoint::real(qt, w), c0, n_max, opts.exclusion)?;
        trace.push((w, lam.re));
    }
    let changes = trace
        .windows(2)
        .filter(|p| p[0].1 == 0.0 || p[0].1.signum() != p[1].1.signum())
        .map(|p| (p[0].0, p[1].0))
        .collect();
    Ok((changes, trace))
}

fn refine(qt: f64, c0: f64, n_max: usize, opts: &RootOptions, bracket: (f64, f64), others: Vec<f64>) -> Result<DispersionRoot> {
    let f = |w: f64| {
        lambda_det_with(&ScaledPoint::real(qt, w), c0, n_max, opts.exclusion)
            .map(|l| l.re)
            .unwrap_or(f64::NAN)
    };
    let wt = find_root_brent(bracket.0, bracket.1, f, &mut RootTolerance)
        .map_err(|e| Error::Numeric(format!("Brent refinement failed on {bracket:?}: {e:?}")))?;
    finish_root(qt, wt, c0, n_max, opts.exclusion, others)
}

/// Fills the diagnostics of a root located at `wt`.
pub fn finish_root(qt: f64, wt: f64, c0: f64, n_max: usize, exclusion: f64, others: Vec<f64>) -> Result<DispersionRoot> {
    let m = matrix_elements_with(&ScaledPoint::real(qt, wt), c0, n_max, exclusion)?.shifted();
    let det_residual = det_lu(&m).norm();
    let (sv, v) = smallest_singular(&m);
    let pivot = v[5];
    if pivot.norm() == 0.0 {
        return Err(Error::Degenerate("null vector has no component along F(1 - alpha_-)".into()));
    }
    let null_vector = v.map(|x| x / pivot);
    Ok(DispersionRoot {
        qt,
        wt,
        c0,
        det_residual,
        // Singular values below machine precision are numerically zero.
        nullity_gap: sv[1] / sv[0].max(f64::EPSILON * sv[5]),
        null_vector,
        singular_values: sv,
        n_max,
        other_candidates: others,
    })
}

/// Lowest real root of `Λ` in the bracket `(q̃²(1+δ), q̃(1-δ))`.
pub fn find_root(qt: f64, c0: f64, opts: &RootOptions) -> Result<DispersionRoot> {
    find_root_near(qt, c0, opts, None)
}

/// Like [`find_root`], but when `seed` is given the sign change nearest to it
/// is refined instead of the lowest one.
pub fn find_root_near(qt: f64, c0: f64, opts: &RootOptions, seed: Option<f64>) -> Result<DispersionRoot> {
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(Error::domain(format!("c0 must be finite and > 0, got {c0}")));
    }
    let n_max = opts.n_max.unwrap_or_else(|| default_n_max(c0));
    let (changes, trace) = scan(qt, c0, n_max, opts)?;
    if changes.is_empty() {
        let best = trace.iter().copied().min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap());
        if let Some((w, v)) = best {
            if v.abs() <= opts.tolerance {
                return finish_root(qt, w, c0, n_max, opts.exclusion, Vec::new());
            }
        }
        return Err(Error::NotFound { reason: format!("no sign change of Lambda at qt = {qt}, c0 = {c0}"), trace });
    }
    let pick = match seed {
        None => 0,
        Some(s) => (0..changes.len())
            .min_by(|&a, &b| {
                let da = (0.5 * (changes[a].0 + changes[a].1) - s).abs();
                let db = (0.5 * (changes[b].0 + changes[b].1) - s).abs();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap(),
    };
    let others = changes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pick)
        .map(|(_, c)| 0.5 * (c.0 + c.1))
        .collect();
    refine(qt, c0, n_max, opts, changes[pick], others)
}

/// Roots along an ascending wave-number grid. Each solved root seeds the next
/// point through the leading-order scaling `ω̃ ∝ √q̃`.
pub fn dispersion_sweep(q_grid: &[f64], c0: f64, opts: &RootOptions) -> Vec<Result<DispersionRoot>> {
    let mut out = Vec::with_capacity(q_grid.len());
    let mut last: Option<(f64, f64)> = None;
    for &qt in q_grid {
        let seed = last.map(|(q_prev, w_prev)| w_prev * (qt / q_prev).sqrt());
        let res = find_root_near(qt, c0, opts, seed);
        if let Ok(r) = &res {
            last = Some((r.qt, r.wt));
        }
        out.push(res);
    }
    out
}

/// Behaviour of `Λ` on both sides of `ω̃ = 2q̃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub qt: f64,
    pub c0: f64,
    /// `(ε, Λ(2q̃+ε), Λ(2q̃-ε))`.
    pub samples: Vec<(f64, Complex64, Complex64)>,
    /// `(ε, |𝔄⁺₊ + 𝔄⁺₋₊| at 2q̃+ε, largest |entry| at 2q̃+ε)`.
    pub grouped: Vec<(f64, f64, f64)>,
    /// Least-squares slope of `log|Λ(2q̃+ε) - Λ(2q̃-ε)|` against `log ε`.
    pub slope: f64,
    /// `|Λ(2q̃ + 0.05)|`.
    pub reference: f64,
    pub max_abs: f64,
    /// `max_abs ≤ 10 · reference`.
    pub bounded: bool,
}

/// Default probe distances, halving from 0.04.
pub fn default_probe_eps() -> Vec<f64> {
    (0..8).map(|k| 0.04 / 2f64.powi(k)).collect()
}

/// Evaluates `Λ` at `2q̃ ± ε` with the exclusion zone lifted. The matrix
/// entries diverge there individually; their grouped combinations stay finite
/// and so does the determinant.
pub fn regularity_probe(qt: f64, c0: f64, eps_list: &[f64]) -> Result<RegularityReport> {
    if !(qt > 0.0 && qt < 1.0) {
        return Err(Error::domain(format!("qt must lie in (0, 1), got {qt}")));
    }
    let n_max = default_n_max(c0);
    let centre = 2.0 * qt;
    let lam = |w: f64| lambda_det_with(&ScaledPoint::real(qt, w), c0, n_max, 0.0);
    let reference = lam(centre + 0.05)?.norm();
    let mut samples = Vec::with_capacity(eps_list.len());
    let mut grouped = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        samples.push((eps, lam(centre + eps)?, lam(centre - eps)?));
        let m = matrix_elements_with(&ScaledPoint::real(qt, centre + eps), c0, n_max, 0.0)?;
        let combo = (m.entries[0][0] + m.entries[0][shift_index(Sign::Minus, Sign::Plus)]).norm();
        let biggest = m.entries.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        grouped.push((eps, combo, biggest));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, a, b)| (a - b).norm() > 0.0)
        .map(|(e, a, b)| (e.ln(), (a - b).norm().ln()))
        .collect();
    let slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::INFINITY
    };
    let max_abs = samples.iter().flat_map(|(_, a, b)| [a.norm(), b.norm()]).fold(0.0, f64::max);
    Ok(RegularityReport { qt, c0, samples, grouped, slope, reference, max_abs, bounded: max_abs <= 10.0 * reference })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_coupling_gives_unit_determinant() {
        let l = lambda_det_with(&ScaledPoint::real(0.05, 0.01), 0.0, 3, DEFAULT_EXCLUSION).unwrap();
        assert!((l - 1.0).norm() < 1e-15);
    }

    #[test]
    fn real_energy_gives_real_determinant() {
        let l = lambda_det(&ScaledPoint::real(0.05, 0.013), 1e-3).unwrap();
        assert_eq!(l.im, 0.0);
    }

    #[test]
    fn exclusion_zone_is_enforced() {
        let e = matrix_elements(&ScaledPoint::real(0.05, 0.0025 + 1e-4), 1e-3, 4).unwrap_err();
        assert!(matches!(e, Error::Domain(_)));
        assert!(matrix_elements(&ScaledPoint::real(0.05, 0.1 - 1e-4), 1e-3, 4).is_err());
    }

    #[test]
    fn empty_sweep() {
        assert!(dispersion_sweep(&[], 1e-3, &RootOptions::default()).is_empty());
    }

    #[test]
    fn root_near_semiclassical_value() {
        let r = find_root(0.05, 1e-3, &RootOptions::default()).unwrap();
        let lead = (2.0 * 1e-3 * 0.05f64).sqrt();
        assert!((r.wt / lead - 1.0).abs() < 0.05, "wt = {}", r.wt);
        assert!(r.det_residual <= 1e-10);
        assert!(r.nullity_gap >= 10.0);
        assert_eq!(r.null_vector[5], Complex64::new(1.0, 0.0));
    }
}
