//! Reconstruction of the even scattering amplitude `F(z)` at a dispersion root.
//!
//! The boundary values come from the null space of `𝔄 - I`, computed twice: by
//! Cramer's rule on the leading 5×5 block (first minor `M₆,₆`) and from the
//! SVD. Everything is normalized so that `F̆(1 - α̃₋) = 1`.

use nalgebra::{DMatrix, DVector, SMatrix};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{
    matrix_elements_with, smallest_singular, DispersionRoot, Mat6, DEFAULT_EXCLUSION,
};
use crate::error::{Error, Result};
use crate::kernel::{KernelContext, DEFAULT_Z_MAX};
use crate::oracle::GridSpec;
use crate::param_core::{alpha_sigma, ScaledPoint, Sign};
use crate::quad::{graded_edges, split_edges, Rule};
use crate::series::{AmplitudeExpansion, BoundaryValues};

type Mat5 = SMatrix<Complex64, 5, 5>;

/// A first minor is treated as vanishing below this fraction of `‖𝔄 - I‖⁵`.
const MINOR_FLOOR: f64 = 1e-13;

/// Largest allowed relative disagreement between the minor and SVD routes.
pub const PATH_AGREEMENT: f64 = 1e-6;

/// The amplitude at one `(q̃, ω̃, C₀)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeProfile {
    pub point: ScaledPoint,
    pub c0: f64,
    pub expansion: AmplitudeExpansion,
    pub bv: BoundaryValues,
    /// Value imposed on `F̆(1 - α̃₋)`.
    pub normalization: Complex64,
    /// Real parts of the exponents, `α̃₊ + 2n`, `α̃₋ + 2n`, then `q̃ + 2n + 1`.
    pub decay_constants: Vec<f64>,
}

/// Both null-vector routes and how well they agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySolution {
    /// Result of the minor route, used downstream.
    pub bv: BoundaryValues,
    pub svd: BoundaryValues,
    /// `max_k |minor_k - svd_k| / max_k |svd_k|`.
    pub disagreement: f64,
    /// Row and column removed to form the minor that was used.
    pub minor_index: (usize, usize),
    pub minor: Complex64,
}

fn minor(m: &Mat6, row: usize, col: usize) -> Mat5 {
    m.clone().remove_row(row).remove_column(col)
}

/// Null vector from the first minor obtained by deleting `row` and `col`,
/// with component `col` set to one.
fn minor_null_vector(m: &Mat6, row: usize, col: usize) -> [Complex64; 6] {
    let block = minor(m, row, col);
    let det = block.lu().determinant();
    let rhs: Vec<Complex64> = (0..6).filter(|&r| r != row).map(|r| -m[(r, col)]).collect();
    let mut v = [Complex64::new(0.0, 0.0); 6];
    v[col] = Complex64::new(1.0, 0.0);
    let others: Vec<usize> = (0..6).filter(|&c| c != col).collect();
    // Cramer's rule: column k of the minor replaced by the right-hand side.
    for (k, &target) in others.iter().enumerate() {
        let mut replaced = block;
        for (r, &b) in rhs.iter().enumerate() {
            replaced[(r, k)] = b;
        }
        v[target] = replaced.lu().determinant() / det;
    }
    v
}

/// Boundary values at a root through both linear-algebra routes.
pub fn boundary_solution(root: &DispersionRoot) -> Result<BoundarySolution> {
    let m = matrix_elements_with(&root.point(), root.c0, root.n_max, DEFAULT_EXCLUSION)?.shifted();
    boundary_solution_from(&m)
}

/// Same as [`boundary_solution`] for an explicit `𝔄 - I`.
pub fn boundary_solution_from(m: &Mat6) -> Result<BoundarySolution> {
    let scale = m.norm().powi(5).max(f64::MIN_POSITIVE);
    let mut pick = (5, 5);
    let mut best = minor(m, 5, 5).lu().determinant();
    if best.norm() <= MINOR_FLOOR * scale {
        for r in 0..6 {
            for c in 0..6 {
                let d = minor(m, r, c).lu().determinant();
                if d.norm() > best.norm() {
                    best = d;
                    pick = (r, c);
                }
            }
        }
    }
    if best.norm() <= MINOR_FLOOR * scale {
        return Err(Error::Degenerate("every first minor of A - I vanishes".into()));
    }
    let mut v = minor_null_vector(m, pick.0, pick.1);
    if pick.1 != 5 {
        if v[5].norm() == 0.0 {
            return Err(Error::Degenerate("null vector has no component along F(1 - alpha_-)".into()));
        }
        let p = v[5];
        v = v.map(|x| x / p);
    }
    let (_, s) = smallest_singular(m);
    if s[5].norm() == 0.0 {
        return Err(Error::Degenerate("SVD null vector has no component along F(1 - alpha_-)".into()));
    }
    let s = s.map(|x| x / s[5]);
    let top = s.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let disagreement = v.iter().zip(&s).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / top;
    Ok(BoundarySolution {
        bv: BoundaryValues::from_array(v),
        svd: BoundaryValues::from_array(s),
        disagreement,
        minor_index: pick,
        minor: best,
    })
}

/// Boundary values at a root, normalized to `F̆(1 - α̃₋) = 1`.
///
/// Fails if the minor and SVD routes disagree by more than [`PATH_AGREEMENT`].
pub fn solve_boundary_values(root: &DispersionRoot) -> Result<BoundaryValues> {
    let sol = boundary_solution(root)?;
    if sol.disagreement > PATH_AGREEMENT {
        return Err(Error::Numeric(format!(
            "minor and SVD null vectors disagree by {:e} at qt = {}, wt = {}",
            sol.disagreement, root.qt, root.wt
        )));
    }
    Ok(sol.bv)
}

impl AmplitudeProfile {
    /// Profile built from given boundary values; no root condition is checked.
    pub fn from_boundary_values(point: ScaledPoint, c0: f64, bv: BoundaryValues, n_max: usize) -> Result<Self> {
        let expansion = AmplitudeExpansion::new(&point, c0, &bv, n_max)?;
        let mut decay_constants = Vec::with_capacity(3 * (n_max + 1));
        for sigma in Sign::BOTH {
            let a = alpha_sigma(&point, sigma)?.re;
            decay_constants.extend((0..=n_max).map(|n| a + 2.0 * n as f64));
        }
        decay_constants.extend((0..=n_max).map(|n| point.qt + (2 * n + 1) as f64));
        Ok(Self { point, c0, expansion, bv, normalization: bv.f_bmam, decay_constants })
    }

    /// Profile at a dispersion root.
    pub fn at_root(root: &DispersionRoot) -> Result<Self> {
        let bv = solve_boundary_values(root)?;
        Self::from_boundary_values(root.point(), root.c0, bv, root.n_max)
    }

    /// Profile from the smallest right singular vector of `𝔄 - I` at an
    /// arbitrary point. Away from a root this is the best available
    /// approximation to a mode, which makes detuning measurable.
    pub fn least_singular(point: ScaledPoint, c0: f64, n_max: usize) -> Result<Self> {
        let m = matrix_elements_with(&point, c0, n_max, DEFAULT_EXCLUSION)?.shifted();
        let (_, v) = smallest_singular(&m);
        if v[5].norm() == 0.0 {
            return Err(Error::Degenerate("singular vector has no component along F(1 - alpha_-)".into()));
        }
        let bv = BoundaryValues::from_array(v.map(|x| x / v[5]));
        Self::from_boundary_values(point, c0, bv, n_max)
    }
}

/// `F(z)` from the exponential series. Even in `z` by construction.
pub fn amplitude_eval(z: f64, profile: &AmplitudeProfile) -> Complex64 {
    let z = z.abs();
    let exp = &profile.expansion;
    let q = profile.point.qt;
    let mut acc = Complex64::new(0.0, 0.0);
    for sigma in Sign::BOTH {
        let r0 = exp.r0(sigma);
        for (lam, pole) in exp.coeffs.family(sigma).iter().zip(exp.poles.family(sigma)) {
            // s_n + 1 = -α̃ - 2n.
            acc += r0 * lam * ((pole + 1.0) * z).exp();
        }
    }
    for (n, lam) in exp.coeffs.lambda_slashed.iter().enumerate() {
        acc += exp.r0_slashed * lam * (-(q + (2 * n + 1) as f64) * z).exp();
    }
    acc
}

/// Three leading exponentials of [`amplitude_eval`], accurate for `|z| ≫ 1`.
pub fn far_field(z: f64, profile: &AmplitudeProfile) -> Complex64 {
    let z = z.abs();
    let exp = &profile.expansion;
    let mut acc = exp.r0_slashed * (-(profile.point.qt + 1.0) * z).exp();
    for sigma in Sign::BOTH {
        let a = -(exp.poles.family(sigma)[0] + 1.0);
        acc += exp.r0(sigma) * (-a * z).exp();
    }
    acc
}

/// `∫₀^∞ e^{-sz} e^{-z} F(z) dz` by quadrature, truncated at `z_max`.
pub fn laplace_numeric(s: Complex64, profile: &AmplitudeProfile, z_max: f64) -> Complex64 {
    let rule = Rule::new(20);
    let edges = graded_edges(0.0, z_max, 60, 0.02);
    rule.integrate_c(&edges, |z| (-(s + 1.0) * z).exp() * amplitude_eval(z, profile))
}

/// Pointwise residual of the integral equation,
/// `F(z) + (C₀/q̃) ∫ [𝒢(-1+ω̃) + 𝒢(-1-ω̃)](z; y) e^{-|y|} F(y) dy`.
pub fn residual_at(z: f64, profile: &AmplitudeProfile, ctx: &KernelContext, z_max: f64) -> Result<Complex64> {
    let rule = Rule::new(20);
    let edges = split_edges(-z_max, z_max, &[0.0, z, -z], 8, 0.01);
    let (nodes, weights) = rule.composite(&edges);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&y, &w) in nodes.iter().zip(&weights) {
        acc += w * ctx.paired_kernel(z, y)? * (-y.abs()).exp() * amplitude_eval(y, profile);
    }
    Ok(amplitude_eval(z, profile) + profile.c0 / profile.point.qt * acc)
}

/// Relative weighted-L² residual of the integral equation on the nodes of
/// `grid`. Rows are evaluated in parallel and summed in node order.
pub fn integral_residual(profile: &AmplitudeProfile, grid: &GridSpec) -> Result<f64> {
    let ctx = KernelContext::new(profile.point, profile.c0)?;
    let (nodes, weights) = grid.nodes()?;
    let rows: Vec<(f64, f64)> = nodes
        .par_iter()
        .zip(weights.par_iter())
        .map(|(&z, &w)| {
            let r = residual_at(z, profile, &ctx, grid.z_max)?;
            Ok((w * r.norm_sqr(), w * amplitude_eval(z, profile).norm_sqr()))
        })
        .collect::<Result<_>>()?;
    let (num, den) = rows.iter().fold((0.0, 0.0), |a, r| (a.0 + r.0, a.1 + r.1));
    if den == 0.0 {
        return Err(Error::Degenerate("amplitude vanishes on the grid; residual is undefined".into()));
    }
    Ok((num / den).sqrt())
}

/// `∫_{-z_max}^{z_max} |F|² dz`.
pub fn l2_norm_sq(profile: &AmplitudeProfile, z_max: f64) -> f64 {
    let rule = Rule::new(20);
    let edges = graded_edges(0.0, z_max, 60, 0.02);
    2.0 * rule.integrate_c(&edges, |z| Complex64::new(amplitude_eval(z, profile).norm_sqr(), 0.0)).re
}

/// Residual of the half-line even equation applied to `e^{-z} F(z)` on the
/// nodes of `grid`, using the discretized operator rows.
pub fn even_equation_residual(profile: &AmplitudeProfile, grid: &GridSpec) -> Result<f64> {
    let op = crate::oracle::build_operator(&profile.point, profile.c0, grid)?;
    let phi = DVector::from_iterator(
        op.nodes.len(),
        op.nodes.iter().map(|&z| (-z).exp() * amplitude_eval(z, profile)),
    );
    let r = &op.matrix * &phi;
    let w = DMatrix::from_diagonal(&DVector::from_iterator(op.weights.len(), op.weights.iter().map(|&x| Complex64::new(x.sqrt(), 0.0))));
    let num = (&w * r).norm();
    let den = (&w * phi).norm();
    if den == 0.0 {
        return Err(Error::Degenerate("amplitude vanishes on the grid; residual is undefined".into()));
    }
    Ok(num / den)
}

/// Default truncation used for the Laplace and norm quadratures.
pub const PROFILE_Z_MAX: f64 = DEFAULT_Z_MAX;
