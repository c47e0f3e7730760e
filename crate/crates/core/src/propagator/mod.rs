//! Propagators of a particle bound to a plane by a delta well.
//!
//! [`hat_green`] is the energy/in-plane-momentum representation used by the
//! dispersion pipeline. [`td_green`] and [`i1_integral`] give the time-domain
//! propagator; they are not used downstream and exist for verification.

mod erfc;

pub use erfc::{complex_erfc, complex_erfcx};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::quad::{graded_edges, Rule};

/// Relative distance from `α = β` treated as sitting on the pole.
const POLE_TOL: f64 = 1e-13;

/// Decay exponent `√(k² - w)` on the principal branch, rejecting the cut.
pub(crate) fn decay_exponent(w: Complex64, k: f64) -> Result<Complex64> {
    let arg = Complex64::new(k * k, 0.0) - w;
    if arg.im == 0.0 && arg.re <= 0.0 {
        return Err(Error::domain(format!("k^2 - w = {arg} lies on the branch cut")));
    }
    let alpha = arg.sqrt();
    if !(alpha.re > 0.0) {
        return Err(Error::domain(format!("Re alpha = {} is not positive", alpha.re)));
    }
    Ok(alpha)
}

/// `Ĝ(w, k, z, z') = (1/2α)[e^{-α|z-z'|} + β/(α-β) e^{-α(|z|+|z'|)}]`, `α = √(k²-w)`.
pub fn hat_green(w: Complex64, k: f64, z: f64, zp: f64, beta: f64) -> Result<Complex64> {
    if !(beta > 0.0) {
        return Err(Error::domain(format!("beta must be > 0, got {beta}")));
    }
    let alpha = decay_exponent(w, k)?;
    let gap = alpha - beta;
    if gap.norm() <= POLE_TOL * beta.max(1.0) {
        return Err(Error::domain(format!(
            "w = {w} sits on the bound-state pole w = k^2 - beta^2"
        )));
    }
    let direct = (-alpha * (z - zp).abs()).exp();
    let reflected = beta / gap * (-alpha * (z.abs() + zp.abs())).exp();
    Ok((direct + reflected) / (2.0 * alpha))
}

/// One evaluation of [`hat_green`] together with its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenEval {
    pub value: Complex64,
    pub w: Complex64,
    pub k: f64,
    pub z: f64,
    pub zp: f64,
    pub beta: f64,
}

impl GreenEval {
    pub fn new(w: Complex64, k: f64, z: f64, zp: f64, beta: f64) -> Result<Self> {
        let value = hat_green(w, k, z, zp, beta)?;
        Ok(Self { value, w, k, z, zp, beta })
    }
}

/// Free-particle propagator `e^{-iπ/4}(4πt)^{-3/2} e^{ir²/4t}` for `t > 0`.
pub fn free_td_green(t: f64, r: f64) -> Complex64 {
    let phase = Complex64::new(0.0, r * r / (4.0 * t) - FRAC_PI_4).exp();
    phase * (4.0 * PI * t).powf(-1.5)
}

/// Time-domain propagator; identically zero for `t < 0`.
pub fn td_green(t: f64, r_par: f64, z: f64, zp: f64, beta: f64) -> Result<Complex64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::domain(format!("time-domain propagator undefined at t = {t}")));
    }
    if !(beta >= 0.0) {
        return Err(Error::domain(format!("beta must be >= 0, got {beta}")));
    }
    if t < 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let dz = z - zp;
    let free = free_td_green(t, (r_par * r_par + dz * dz).sqrt());
    Ok(free * (1.0 + binding_factor(t, z, zp, beta)))
}

/// `G/G_f - 1`, the relative correction due to the bound state.
///
/// `e^{iβ²t - βZ} erfc(y)` with `y = e^{-iπ/4}Z/(2√t) - e^{iπ/4}β√t` is written as
/// `e^{iZ²/4t} erfcx(y)`, since `iβ²t - βZ - y² = iZ²/4t` exactly.
pub(crate) fn binding_factor(t: f64, z: f64, zp: f64, beta: f64) -> Complex64 {
    let zsum = z.abs() + zp.abs();
    let dz = z - zp;
    let rt = t.sqrt();
    let e_plus = Complex64::from_polar(1.0, FRAC_PI_4);
    let e_minus = e_plus.conj();
    let y = e_minus * (zsum / (2.0 * rt)) - e_plus * (beta * rt);
    let phase = Complex64::new(0.0, (zsum * zsum - dz * dz) / (4.0 * t)).exp();
    e_plus * beta * (PI * t).sqrt() * phase * complex_erfcx(y)
}

/// Closed form of `I₁(t, Z) = ∫₀^∞ dϖ/(2π) e^{-iϖt} cos(Z√ϖ) / (√ϖ (ϖ + β²))`.
pub fn i1_integral(t: f64, z: f64, beta: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("I1 requires t > 0, got {t}")));
    }
    if !(beta > 0.0) {
        return Err(Error::domain(format!("I1 requires beta > 0, got {beta}")));
    }
    let rt = t.sqrt();
    let e_plus = Complex64::from_polar(1.0, FRAC_PI_4);
    let a = e_plus * (beta * rt);
    let b = e_plus.conj() * (z / (2.0 * rt));
    // e^{iβ²t ± βZ} erfc(a ± b) = e^{iZ²/4t} erfcx(a ± b).
    let phase = Complex64::new(0.0, z * z / (4.0 * t)).exp();
    Ok(phase * (complex_erfcx(a + b) + complex_erfcx(a - b)) / (4.0 * beta))
}

/// Direct quadrature of the defining integral of `I₁` along a rotated ray.
///
/// With `ϖ = u²` and `u = r e^{-iφ}` the oscillatory factor becomes
/// `exp(-i t r² e^{-2iφ})`, which decays for `0 < φ < π/2`. No pole is crossed
/// since the poles sit at `u = ±iβ`.
pub fn i1_quadrature(t: f64, z: f64, beta: f64, phi: f64) -> Result<Complex64> {
    if !(t > 0.0 && beta > 0.0) {
        return Err(Error::domain("I1 quadrature requires t > 0 and beta > 0"));
    }
    if !(phi > 0.0 && phi < PI / 2.0) {
        return Err(Error::domain(format!("rotation angle {phi} outside (0, pi/2)")));
    }
    let rot = Complex64::from_polar(1.0, -phi);
    let rot2 = rot * rot;
    let damp = (2.0 * phi).sin() * t;
    let grow = z.abs() * phi.sin();
    // Beyond r_max the modulus e^{-damp r² + grow r} is below 1e-18.
    let r_max = (grow + (grow * grow + 4.0 * damp * 42.0).sqrt()) / (2.0 * damp);
    let rule = Rule::new(24);
    let edges = graded_edges(0.0, r_max, 80, (r_max / 400.0).min(0.05));
    let integrand = |r: f64| {
        let u = rot * r;
        let osc = (Complex64::new(0.0, -t) * rot2 * (r * r)).exp();
        osc * (u * z).cos() / (u * u + beta * beta)
    };
    Ok(rot / PI * rule.integrate_c(&edges, integrand))
}

/// Electrostatic kernel `e^{-q|z|}/(2q)`.
pub fn electrostatic_kernel(q: f64, z: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::domain(format!("q must be > 0, got {q}")));
    }
    Ok((-q * z.abs()).exp() / (2.0 * q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hat_green_at_origin() {
        let (w, k, beta) = (c(-0.3), 0.4, 1.0);
        let alpha = (k * k + 0.3f64).sqrt();
        let g = hat_green(w, k, 0.0, 0.0, beta).unwrap();
        assert!((g - c(1.0 / (2.0 * (alpha - beta)))).norm() < 1e-15);
    }

    #[test]
    fn hat_green_pole_and_cut() {
        assert!(hat_green(c(-0.75), 0.5, 0.1, 0.2, 1.0).is_err());
        assert!(hat_green(c(2.0), 1.0, 0.1, 0.2, 1.0).is_err());
    }

    #[test]
    fn hat_green_weak_binding_limit() {
        let w = Complex64::new(-0.2, 0.05);
        let g = hat_green(w, 0.3, 0.4, -0.9, 1e-12).unwrap();
        let alpha = (c(0.09) - w).sqrt();
        let free = (-alpha * 1.3).exp() / (2.0 * alpha);
        assert!((g - free).norm() < 1e-11);
    }

    #[test]
    fn td_green_vanishes_before_zero() {
        assert_eq!(td_green(-1.0, 0.3, 0.1, 0.2, 1.0).unwrap(), c(0.0));
        assert!(td_green(0.0, 0.3, 0.1, 0.2, 1.0).is_err());
    }

    #[test]
    fn td_green_without_binding_is_free() {
        let g = td_green(0.8, 0.5, 0.3, -0.2, 0.0).unwrap();
        let f = free_td_green(0.8, (0.25f64 + 0.25).sqrt());
        assert!((g - f).norm() < 1e-16);
    }

    #[test]
    fn i1_is_even_in_z() {
        let a = i1_integral(0.7, 1.3, 1.0).unwrap();
        let b = i1_integral(0.7, -1.3, 1.0).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn electrostatic_kernel_values() {
        assert_eq!(electrostatic_kernel(1.0, 0.0).unwrap(), 0.5);
        assert!(electrostatic_kernel(0.0, 1.0).is_err());
    }
}
