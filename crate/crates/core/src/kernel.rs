//! Scattering kernel of the linearized Hartree equation.
//!
//! `𝒢(w, q, z; z') = ∫ Ĝ(w, q, z; y) e^{-|y|} e^{-q|y - z'|} dy` has a closed form
//! in three regions of `(z, z')`; everything here is in β-scaled units.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param_core::{alpha_sigma, ScaledPoint, Sign};
use crate::propagator::{decay_exponent, hat_green};
use crate::quad::{split_edges, Rule};

/// Denominators smaller than this are treated as a pole hit.
const DENOM_TOL: f64 = 1e-13;

/// Truncation of the real line used by the quadrature oracles.
pub const DEFAULT_Z_MAX: f64 = 40.0;

fn guard(name: &str, value: Complex64) -> Result<Complex64> {
    if value.norm() < DENOM_TOL || !value.re.is_finite() || !value.im.is_finite() {
        Err(Error::domain(format!("vanishing denominator {name} = {value}")))
    } else {
        Ok(value)
    }
}

/// Closed-form kernel `𝒢(w, q̃, z; z')` with `α = √(q̃² - w)`.
pub fn script_g(w: Complex64, qt: f64, z: f64, zp: f64) -> Result<Complex64> {
    if !(qt > 0.0) {
        return Err(Error::domain(format!("qt must be > 0, got {qt}")));
    }
    let alpha = decay_exponent(w, qt)?;
    script_g_alpha(alpha, qt, z, zp)
}

/// Closed form evaluated from a precomputed decay exponent.
pub fn script_g_alpha(alpha: Complex64, qt: f64, z: f64, zp: f64) -> Result<Complex64> {
    // 𝒢(z; z') = 𝒢(-z; -z') reduces everything to z ≥ 0.
    let (z, zp) = if z < 0.0 { (-z, -zp) } else { (z, zp) };
    let q = qt;
    let a = alpha;
    let am1 = guard("alpha - 1", a - 1.0)?;
    let ap1sq = guard("(alpha + 1)^2 - q^2", (a + 1.0) * (a + 1.0) - q * q)?;
    let e = |x: Complex64| x.exp();
    let c = |x: f64| Complex64::new(x, 0.0);

    if zp >= 0.0 {
        let first = 2.0 * q * e(-a * z - q * zp) / (am1 * ap1sq * guard("alpha - 1 + q", a - 1.0 + q)?);
        let last = q * e(-a * (z + zp) - zp) / (a * am1 * ap1sq);
        if zp <= z {
            let mid1 = c((-q * (z - zp) - z).exp())
                / (guard("alpha - 1 - q", a - 1.0 - q)? * (a + 1.0 + q));
            let am1sq = guard("(alpha - 1)^2 - q^2", am1 * am1 - q * q)?;
            let mid2 = q * e(-a * (z - zp) - zp) / (a * am1sq);
            Ok(first + mid1 - mid2 - last)
        } else {
            let mid1 = c((-q * (zp - z) - z).exp())
                / (guard("alpha - 1 + q", a - 1.0 + q)? * guard("alpha + 1 - q", a + 1.0 - q)?);
            let mid2 = q * e(-a * (zp - z) - zp) / (a * ap1sq);
            Ok(first + mid1 - mid2 - last)
        }
    } else {
        let first = -2.0 * q * e(-a * z + q * zp) / (am1 * ap1sq * guard("alpha - 1 - q", a - 1.0 - q)?);
        let mid1 = c((-q * (z - zp) - z).exp()) / (guard("alpha - 1 - q", a - 1.0 - q)? * (a + 1.0 + q));
        let mid2 = q * e(-a * (z - zp) + zp) / (am1 * ap1sq);
        Ok(first + mid1 - mid2)
    }
}

/// Direct quadrature of the defining integral of `𝒢`.
///
/// Panels break at the kinks `y ∈ {0, z, z'}` and are graded toward them. The
/// estimate is accepted once two successive refinements agree to 1e-14
/// relative; otherwise a numeric error carries the last two estimates.
pub fn script_g_oracle(w: Complex64, qt: f64, z: f64, zp: f64) -> Result<Complex64> {
    script_g_oracle_with(w, qt, z, zp, DEFAULT_Z_MAX)
}

pub fn script_g_oracle_with(w: Complex64, qt: f64, z: f64, zp: f64, z_max: f64) -> Result<Complex64> {
    if !(qt > 0.0) {
        return Err(Error::domain(format!("qt must be > 0, got {qt}")));
    }
    // Validates the branch and the pole before integrating.
    script_g(w, qt, z, zp)?;
    let rule = Rule::new(20);
    let integrand = |y: f64| -> Complex64 {
        let g = hat_green(w, qt, z, y, 1.0).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        g * (-y.abs() - qt * (y - zp).abs()).exp()
    };
    let breaks = [0.0, z, zp];
    let mut prev: Option<Complex64> = None;
    let mut per_side = 6;
    for _ in 0..5 {
        let edges = split_edges(-z_max, z_max, &breaks, per_side, 0.02);
        let v = rule.integrate_c(&edges, integrand);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Numeric(format!("non-finite quadrature value at w={w}, z={z}, zp={zp}")));
        }
        if let Some(p) = prev {
            if (v - p).norm() <= 1e-14 * v.norm().max(1e-300) {
                return Ok(v);
            }
        }
        prev = Some(v);
        per_side *= 2;
    }
    let last = prev.unwrap();
    Err(Error::Numeric(format!(
        "kernel quadrature did not settle at w={w}, qt={qt}, z={z}, zp={zp}; last estimate {last}"
    )))
}

/// Cached data for evaluating the slashed kernel at one `(q̃, ω̃, C₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelContext {
    pub point: ScaledPoint,
    pub c0: f64,
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
}

impl KernelContext {
    pub fn new(point: ScaledPoint, c0: f64) -> Result<Self> {
        if !(point.qt > 0.0) {
            return Err(Error::domain(format!("qt must be > 0, got {}", point.qt)));
        }
        if !(c0 >= 0.0 && c0.is_finite()) {
            return Err(Error::domain(format!("c0 must be finite and >= 0, got {c0}")));
        }
        let alpha_plus = alpha_sigma(&point, Sign::Plus)?;
        let alpha_minus = alpha_sigma(&point, Sign::Minus)?;
        for a in [alpha_plus, alpha_minus] {
            guard("alpha - 1", a - 1.0)?;
        }
        Ok(Self { point, c0, alpha_plus, alpha_minus })
    }

    /// `𝒢(-1+ω̃; z, z') + 𝒢(-1-ω̃; z, z')`.
    pub fn paired_kernel(&self, z: f64, zp: f64) -> Result<Complex64> {
        let q = self.point.qt;
        Ok(script_g_alpha(self.alpha_plus, q, z, zp)? + script_g_alpha(self.alpha_minus, q, z, zp)?)
    }
}

/// `𝒢̸(z; z') = (C₀/q̃) e^{-|z|} [𝒢(-1+ω̃) + 𝒢(-1-ω̃)]`.
pub fn slashed_kernel(ctx: &KernelContext, z: f64, zp: f64) -> Result<Complex64> {
    Ok(ctx.c0 / ctx.point.qt * (-z.abs()).exp() * ctx.paired_kernel(z, zp)?)
}

/// Kernel of the even-sector equation on the half-line, `𝒢̸(z; z') + 𝒢̸(z; -z')`.
pub fn even_kernel(ctx: &KernelContext, z: f64, zp: f64) -> Result<Complex64> {
    Ok(slashed_kernel(ctx, z, zp)? + slashed_kernel(ctx, z, -zp)?)
}

/// `(𝒟_q u)(z) = ∫ e^{-q̃|z-y|} u(y) dy` at each point of `at`, over `[-z_max, z_max]`.
pub fn dq_apply<F>(u: F, qt: f64, z_max: f64, at: &[f64]) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    if !(qt > 0.0) {
        return Err(Error::domain(format!("qt must be > 0, got {qt}")));
    }
    let rule = Rule::new(20);
    Ok(at
        .iter()
        .map(|&z| {
            let edges = split_edges(-z_max, z_max, &[0.0, z], 16, 0.02);
            rule.integrate_c(&edges, |y| (-qt * (z - y).abs()).exp() * u(y))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn reflection_symmetry() {
        let w = c(-1.0 + 0.02);
        let a = script_g(w, 0.05, 0.3, -0.7).unwrap();
        let b = script_g(w, 0.05, -0.3, 0.7).unwrap();
        assert!((a - b).norm() <= 1e-15 * a.norm());
    }

    #[test]
    fn continuity_across_region_boundaries() {
        let w = c(-1.0 + 0.013);
        let z = 0.8;
        for (lo, hi) in [(z - 1e-13, z + 1e-13), (-1e-13, 1e-13)] {
            let a = script_g(w, 0.07, z, lo).unwrap();
            let b = script_g(w, 0.07, z, hi).unwrap();
            assert!((a - b).norm() <= 1e-12 * a.norm(), "jump at {lo}..{hi}");
        }
    }

    #[test]
    fn real_energy_gives_real_kernel() {
        let g = script_g(c(-1.0 + 0.01), 0.05, 0.4, -1.2).unwrap();
        assert_eq!(g.im, 0.0);
    }

    #[test]
    fn closed_form_matches_oracle_sample() {
        let w = c(-1.0 + 0.02);
        let a = script_g(w, 0.05, 0.4, 0.9).unwrap();
        let b = script_g_oracle(w, 0.05, 0.4, 0.9).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn pole_is_reported() {
        // alpha = 1 exactly when w = q^2 - 1.
        let q: f64 = 0.25;
        let err = script_g(c(q * q - 1.0), q, 0.1, 0.2).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn dq_of_unit_decay_at_origin() {
        let v = dq_apply(|y| c((-y.abs()).exp()), 1.0, 40.0, &[0.0]).unwrap();
        assert!((v[0] - 1.0).norm() < 1e-13);
    }

    #[test]
    fn slashed_kernel_is_even_in_energy() {
        let p = ScaledPoint::real(0.05, 0.01);
        let a = slashed_kernel(&KernelContext::new(p, 1e-3).unwrap(), 0.3, 1.1).unwrap();
        let b = slashed_kernel(&KernelContext::new(p.reflected(), 1e-3).unwrap(), 0.3, 1.1).unwrap();
        assert!((a - b).norm() <= 1e-15 * a.norm());
    }
}
