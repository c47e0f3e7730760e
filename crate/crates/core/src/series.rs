//! Partial-fraction representation of the Laplace-transformed amplitude.
//!
//! The transform `F̆(s) = ∫₀^∞ e^{-sz} e^{-z} F(z) dz` of an even mode is
//! meromorphic with three ladders of simple poles
//!
//! ```text
//! s_n^± = -α̃_± - (2n+1),      s̸_n = -q̃ - 2(n+1),
//! ```
//!
//! whose residues are `R_n^σ = Λ_n^σ R_0^σ` and `R̸_n = Λ̸_n R̸_0`. The
//! coefficients `Λ` decay like `Cⁿ/(n!)⁴`, so a handful of terms suffices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param_core::{alpha_sigma, ScaledPoint, Sign};

/// Hard cap on the number of series terms.
pub const N_MAX_CAP: usize = 60;
/// Target for the coefficient tail when choosing the truncation.
pub const TAIL_TARGET: f64 = 1e-14;
/// Minimum distance from a pole at which the expansion is evaluated.
pub const POLE_EXCLUSION: f64 = 1e-10;

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `(scale)^n / (n!)^4` without overflow.
pub fn decay_bound(scale: f64, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if scale == 0.0 {
        return 0.0;
    }
    (n as f64 * scale.ln() - 4.0 * ln_factorial(n)).exp()
}

/// Tail estimate `2 (1.5 C₀)^{n+1} / ((n+1)!)⁴` after keeping `n` terms.
pub fn tail_bound(c0: f64, n_max: usize) -> f64 {
    2.0 * decay_bound(1.5 * c0, n_max + 1)
}

/// Smallest truncation whose tail estimate is below [`TAIL_TARGET`], capped at
/// [`N_MAX_CAP`].
pub fn default_n_max(c0: f64) -> usize {
    (0..N_MAX_CAP).find(|&n| tail_bound(c0, n) < TAIL_TARGET).unwrap_or(N_MAX_CAP)
}

/// Pole locations of the transformed amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleSet {
    pub s_plus: Vec<Complex64>,
    pub s_minus: Vec<Complex64>,
    pub s_slashed: Vec<f64>,
    pub n_max: usize,
}

impl PoleSet {
    pub fn new(point: &ScaledPoint, n_max: usize) -> Result<Self> {
        let ap = alpha_sigma(point, Sign::Plus)?;
        let am = alpha_sigma(point, Sign::Minus)?;
        let ladder = |a: Complex64| (0..=n_max).map(|n| -a - (2 * n + 1) as f64).collect();
        Ok(Self {
            s_plus: ladder(ap),
            s_minus: ladder(am),
            s_slashed: (0..=n_max).map(|n| -point.qt - 2.0 * (n + 1) as f64).collect(),
            n_max,
        })
    }

    pub fn family(&self, sigma: Sign) -> &[Complex64] {
        match sigma {
            Sign::Plus => &self.s_plus,
            Sign::Minus => &self.s_minus,
        }
    }

    /// Distance from `s` to the nearest pole.
    pub fn distance(&self, s: Complex64) -> f64 {
        let a = self.s_plus.iter().chain(&self.s_minus).map(|p| (s - p).norm());
        let b = self.s_slashed.iter().map(|&p| (s - p).norm());
        a.chain(b).fold(f64::INFINITY, f64::min)
    }
}

/// Truncated coefficient sequences `Λ_n^±`, `Λ̸_n` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoeffs {
    pub lambda_plus: Vec<Complex64>,
    pub lambda_minus: Vec<Complex64>,
    pub lambda_slashed: Vec<Complex64>,
    pub tail_bound: f64,
}

impl SeriesCoeffs {
    pub fn family(&self, sigma: Sign) -> &[Complex64] {
        match sigma {
            Sign::Plus => &self.lambda_plus,
            Sign::Minus => &self.lambda_minus,
        }
    }

    pub fn n_max(&self) -> usize {
        self.lambda_slashed.len() - 1
    }
}

fn nonzero(name: &str, j: usize, v: Complex64) -> Result<Complex64> {
    if v.norm() < 1e-300 || !v.re.is_finite() || !v.im.is_finite() {
        Err(Error::domain(format!("factor {name} vanishes at j = {j}")))
    } else {
        Ok(v)
    }
}

/// Coefficient sequences by iterated products.
pub fn lambda_seq(point: &ScaledPoint, c0: f64, n_max: usize) -> Result<SeriesCoeffs> {
    if !(c0 >= 0.0 && c0.is_finite()) {
        return Err(Error::domain(format!("c0 must be finite and >= 0, got {c0}")));
    }
    let w = point.wt;
    let q = point.qt;
    let mut families = [Vec::with_capacity(n_max + 1), Vec::with_capacity(n_max + 1)];
    for (slot, sigma) in families.iter_mut().zip(Sign::BOTH) {
        let a = alpha_sigma(point, sigma)?;
        let sw = sigma.value() * w;
        let mut acc = Complex64::new(1.0, 0.0);
        slot.push(acc);
        for j in 1..=n_max {
            let jf = j as f64;
            let inner = nonzero("4j(j+alpha) - 2 sigma w", j, 4.0 * jf * (jf + a) - 2.0 * sw)?;
            let odd = 2.0 * jf - 1.0;
            let outer = nonzero("1 + (2j-1)^2 + 2(2j-1)alpha - sigma w", j, 1.0 + odd * odd + 2.0 * odd * a - sw)?;
            let shift = nonzero("j + alpha", j, jf + a)?;
            acc *= -c0 / jf / shift * (1.0 + sw / inner) / outer;
            slot.push(acc);
        }
    }
    let mut slashed = Vec::with_capacity(n_max + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    slashed.push(acc);
    for j in 1..=n_max {
        let jf = j as f64;
        let g = jf * (jf + 1.0) + (jf + 0.5) * q;
        let den = nonzero("4g^2 - w^2/4", j, 4.0 * g * g - w * w / 4.0)?;
        acc *= -c0 / jf / (jf + q) * g / den;
        slashed.push(acc);
    }
    let [lambda_plus, lambda_minus] = families;
    Ok(SeriesCoeffs { lambda_plus, lambda_minus, lambda_slashed: slashed, tail_bound: tail_bound(c0, n_max) })
}

/// The six Laplace-domain values that close the dispersion system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryValues {
    /// `F̆(q̃)`
    pub f_q: Complex64,
    /// `F̆(-q̃)`
    pub f_mq: Complex64,
    /// `F̆(1 + α̃₊)`
    pub f_bpap: Complex64,
    /// `F̆(1 - α̃₊)`
    pub f_bmap: Complex64,
    /// `F̆(1 + α̃₋)`
    pub f_bpam: Complex64,
    /// `F̆(1 - α̃₋)`
    pub f_bmam: Complex64,
}

impl BoundaryValues {
    /// Order `(+, -, ++, -+, +-, --)` used by the dispersion matrix.
    pub fn to_array(&self) -> [Complex64; 6] {
        [self.f_q, self.f_mq, self.f_bpap, self.f_bmap, self.f_bpam, self.f_bmam]
    }

    pub fn from_array(v: [Complex64; 6]) -> Self {
        Self { f_q: v[0], f_mq: v[1], f_bpap: v[2], f_bmap: v[3], f_bpam: v[4], f_bmam: v[5] }
    }

    pub fn zero() -> Self {
        Self::from_array([Complex64::new(0.0, 0.0); 6])
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_array(self.to_array().map(|v| v * k))
    }

    /// `F̆(1 + ς α̃_σ)`.
    pub fn at_shift(&self, varsigma: Sign, sigma: Sign) -> Complex64 {
        match (varsigma, sigma) {
            (Sign::Plus, Sign::Plus) => self.f_bpap,
            (Sign::Minus, Sign::Plus) => self.f_bmap,
            (Sign::Plus, Sign::Minus) => self.f_bpam,
            (Sign::Minus, Sign::Minus) => self.f_bmam,
        }
    }

    /// Evaluation points matching [`BoundaryValues::to_array`].
    pub fn abscissae(point: &ScaledPoint) -> Result<[Complex64; 6]> {
        let q = Complex64::new(point.qt, 0.0);
        let ap = alpha_sigma(point, Sign::Plus)?;
        let am = alpha_sigma(point, Sign::Minus)?;
        Ok([q, -q, 1.0 + ap, 1.0 - ap, 1.0 + am, 1.0 - am])
    }
}

fn checked(name: &str, v: Complex64) -> Result<Complex64> {
    if v.norm() < 1e-14 {
        Err(Error::domain(format!("vanishing denominator {name} = {v}")))
    } else {
        Ok(v)
    }
}

/// Zeroth residues `(R₀⁺, R₀⁻, R̸₀)` in terms of the boundary values.
pub fn residues0(point: &ScaledPoint, c0: f64, bv: &BoundaryValues) -> Result<(Complex64, Complex64, Complex64)> {
    let q = point.qt;
    let w = point.wt;
    let coupling = 2.0 * c0;
    let mut r = [Complex64::new(0.0, 0.0); 2];
    for (slot, sigma) in r.iter_mut().zip(Sign::BOTH) {
        let a = alpha_sigma(point, sigma)?;
        let am1 = checked("alpha - 1", a - 1.0)?;
        let plus = checked("(alpha + 1)^2 - q^2", (a + 1.0) * (a + 1.0) - q * q)?;
        let minus = checked("(alpha - 1)^2 - q^2", am1 * am1 - q * q)?;
        let direct = 4.0 * q * bv.f_q / (am1 * plus * minus);
        let shifted = ((a + 1.0) / am1) * bv.at_shift(Sign::Plus, sigma) / plus + bv.at_shift(Sign::Minus, sigma) / minus;
        *slot = 0.5 * coupling * (direct + shifted / a);
    }
    let den = checked("4q^2 - w^2", 4.0 * q * q - w * w)?;
    let slashed = 2.0 * coupling / den * (bv.f_q + bv.f_mq);
    Ok((r[0], r[1], slashed))
}

/// Residues and pole ladders of one transformed amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeExpansion {
    pub r0_plus: Complex64,
    pub r0_minus: Complex64,
    pub r0_slashed: Complex64,
    pub coeffs: SeriesCoeffs,
    pub poles: PoleSet,
}

impl AmplitudeExpansion {
    pub fn new(point: &ScaledPoint, c0: f64, bv: &BoundaryValues, n_max: usize) -> Result<Self> {
        let (r0_plus, r0_minus, r0_slashed) = residues0(point, c0, bv)?;
        Ok(Self {
            r0_plus,
            r0_minus,
            r0_slashed,
            coeffs: lambda_seq(point, c0, n_max)?,
            poles: PoleSet::new(point, n_max)?,
        })
    }

    pub fn r0(&self, sigma: Sign) -> Complex64 {
        match sigma {
            Sign::Plus => self.r0_plus,
            Sign::Minus => self.r0_minus,
        }
    }

    /// Same expansion multiplied by a constant.
    pub fn scaled(&self, k: Complex64) -> Self {
        Self { r0_plus: self.r0_plus * k, r0_minus: self.r0_minus * k, r0_slashed: self.r0_slashed * k, ..self.clone() }
    }
}

/// Partial-fraction evaluation of `F̆(s)`.
pub fn breve_f(s: Complex64, exp: &AmplitudeExpansion) -> Result<Complex64> {
    let dist = exp.poles.distance(s);
    if dist < POLE_EXCLUSION {
        return Err(Error::domain(format!("s = {s} is within {dist:e} of a pole")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for sigma in Sign::BOTH {
        let r0 = exp.r0(sigma);
        for (lam, pole) in exp.coeffs.family(sigma).iter().zip(exp.poles.family(sigma)) {
            acc += r0 * lam / (s - pole);
        }
    }
    for (lam, &pole) in exp.coeffs.lambda_slashed.iter().zip(&exp.poles.s_slashed) {
        acc += exp.r0_slashed * lam / (s - pole);
    }
    Ok(acc)
}

/// Left side minus right side of the five-point functional equation.
pub fn functional_residual(s: Complex64, exp: &AmplitudeExpansion, point: &ScaledPoint, c0: f64) -> Result<Complex64> {
    let q = point.qt;
    let coupling = 2.0 * c0;
    let f_s = breve_f(s, exp)?;
    let f_s2 = breve_f(s + 2.0, exp)?;
    let f_q = breve_f(Complex64::new(q, 0.0), exp)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for sigma in Sign::BOTH {
        let a = alpha_sigma(point, sigma)?;
        let am1 = checked("alpha - 1", a - 1.0)?;
        let plus = checked("(alpha + 1)^2 - q^2", (a + 1.0) * (a + 1.0) - q * q)?;
        let minus = checked("(alpha - 1)^2 - q^2", am1 * am1 - q * q)?;
        let f_shift = breve_f(a + 1.0, exp)?;
        let at_q = 4.0 * q * q / (am1 * plus * minus) / checked("s + 1 + alpha", s + 1.0 + a)?;
        let mut ladder = Complex64::new(0.0, 0.0);
        let mut shifted = Complex64::new(0.0, 0.0);
        for vs in Sign::BOTH {
            let v = vs.value();
            let p = checked("(1 + vs q)^2 - alpha^2", Complex64::new((1.0 + v * q).powi(2), 0.0) - a * a)?;
            let d = checked("s + 2 + vs q", s + 2.0 + v * q)?;
            ladder += 1.0 / (p * d);
            let r = checked("(1 + vs alpha)^2 - q^2", (1.0 + v * a) * (1.0 + v * a) - q * q)?;
            let e = checked("s + 1 - vs alpha", s + 1.0 - v * a)?;
            shifted += v * (1.0 / (p * d) - (q / a) / (r * e));
        }
        let via_q = f_q * (at_q + ladder);
        let via_alpha = f_shift / plus * (q / a) * ((a + 1.0) / am1 / (s + 1.0 + a) + 1.0 / (s + 1.0 - a));
        rhs += via_q + via_alpha + f_s2 * shifted;
    }
    Ok(f_s - coupling / (2.0 * q) * rhs)
}

/// `lim_{s→pole} (s - pole) f(s)` by Richardson extrapolation over four radii.
pub fn residue_limit<F>(f: F, pole: Complex64, radius: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let hs: Vec<f64> = (0..4).map(|k| radius / 2f64.powi(k)).collect();
    let mut t: Vec<Complex64> = hs
        .iter()
        .map(|&h| f(pole + h).map(|v| v * h))
        .collect::<Result<_>>()?;
    // Neville extrapolation to h = 0 assuming a power series in h.
    for level in 1..t.len() {
        for i in (level..t.len()).rev() {
            let (hi, hj) = (hs[i], hs[i - level]);
            t[i] = (t[i] * hj - t[i - 1] * hi) / (hj - hi);
        }
    }
    Ok(t[t.len() - 1])
}
