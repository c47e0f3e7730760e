//! Parameter types, branch-correct square roots and regime checks.
//!
//! Natural units `ħ = 1 = 2m*` are used throughout. Every numerical routine in
//! this crate works in units scaled by the binding strength β, so lengths are
//! in units of `1/β` and energies in units of `β²`. Conversion happens only at
//! the I/O boundary via [`to_scaled`] and [`from_scaled`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign label selecting one of the two frequency-shifted channels.
///
/// `Plus` refers to energy `-1 + ω̃` (decay exponent `√(1+q̃²-ω̃)`), `Minus` to
/// energy `-1 - ω̃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Physical inputs in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Inverse binding length, `V₀a/2`.
    pub beta: f64,
    /// Surface number density of the charged layer.
    pub eta0: f64,
    /// Value of `e²η₀/ε₀`.
    pub coupling: f64,
}

impl PhysicalParams {
    pub fn new(beta: f64, eta0: f64, coupling: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("eta0", eta0), ("coupling", coupling)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { beta, eta0, coupling })
    }

    /// Dimensionless Coulomb coupling `coupling / (2β³)`.
    pub fn c0(&self) -> f64 {
        self.coupling / (2.0 * self.beta.powi(3))
    }

    /// Ground-state binding energy `-β²`.
    pub fn binding_energy(&self) -> f64 {
        -self.beta * self.beta
    }
}

/// Characteristic lengths of the layer at a given wave number and energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthScales {
    /// Binding length `1/β`.
    pub l_b: f64,
    /// In-plane wavelength scale `1/q`.
    pub l_p: f64,
    /// de Broglie length `1/√ω`.
    pub l_db: f64,
    /// Mean interparticle distance, `π(l_d/2)² = 1/η₀`.
    pub l_d: f64,
    /// Length at which Coulomb and binding forces balance.
    pub l_c: f64,
}

impl LengthScales {
    /// Requires `q > 0` and `omega > 0`.
    pub fn new(params: &PhysicalParams, q: f64, omega: f64) -> Result<Self> {
        if !(q > 0.0) {
            return Err(Error::domain(format!("q must be > 0, got {q}")));
        }
        if !(omega > 0.0) {
            return Err(Error::domain(format!("omega must be > 0 for a de Broglie length, got {omega}")));
        }
        let l_d = 2.0 / (std::f64::consts::PI * params.eta0).sqrt();
        // With e²/ε₀ = coupling/η₀: l_C³ = 4π l_d² ε₀/e² = 4π l_d² η₀ / coupling.
        let l_c = (4.0 * std::f64::consts::PI * l_d * l_d * params.eta0 / params.coupling).cbrt();
        Ok(Self {
            l_b: 1.0 / params.beta,
            l_p: 1.0 / q,
            l_db: 1.0 / omega.sqrt(),
            l_d,
            l_c,
        })
    }

    /// `(2 l_b / l_C)³`, which equals [`PhysicalParams::c0`].
    pub fn c0(&self) -> f64 {
        (2.0 * self.l_b / self.l_c).powi(3)
    }
}

/// Dimensionless point `(q̃, ω̃) = (q/β, ω/β²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPoint {
    pub qt: f64,
    pub wt: Complex64,
}

impl ScaledPoint {
    pub fn new(qt: f64, wt: Complex64) -> Self {
        Self { qt, wt }
    }

    pub fn real(qt: f64, wt: f64) -> Self {
        Self { qt, wt: Complex64::new(wt, 0.0) }
    }

    /// The same wave number at energy `-ω̃`.
    pub fn reflected(&self) -> Self {
        Self { qt: self.qt, wt: -self.wt }
    }

    /// `q̃² < |ω̃| < q̃ < 1`.
    pub fn in_regime(&self) -> bool {
        let w = self.wt.norm();
        self.qt * self.qt < w && w < self.qt && self.qt < 1.0
    }

    pub fn alpha(&self, sigma: Sign) -> Result<Complex64> {
        alpha_sigma(self, sigma)
    }
}

/// Vertical decay exponent `α̃_σ = √(1 + q̃² - σω̃)` on the principal branch.
///
/// Fails when the radicand lies on the branch cut (real and nonpositive).
pub fn alpha_sigma(point: &ScaledPoint, sigma: Sign) -> Result<Complex64> {
    let arg = Complex64::new(1.0 + point.qt * point.qt, 0.0) - sigma.value() * point.wt;
    if !(arg.re.is_finite() && arg.im.is_finite()) {
        return Err(Error::domain(format!("non-finite radicand {arg} for alpha")));
    }
    if arg.im == 0.0 && arg.re <= 0.0 {
        return Err(Error::domain(format!(
            "alpha radicand {arg} lies on the branch cut (qt={}, wt={})",
            point.qt, point.wt
        )));
    }
    Ok(arg.sqrt())
}

/// Heuristic cutoffs for the asymptotic orderings `q̃² ≪ |ω̃| ≪ q̃`, `C₀ ≪ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalThresholds {
    pub qt_max: f64,
    pub w_over_q_max: f64,
    pub q2_over_w_max: f64,
    pub c0_max: f64,
}

impl Default for SemiclassicalThresholds {
    fn default() -> Self {
        Self { qt_max: 0.1, w_over_q_max: 0.2, q2_over_w_max: 0.2, c0_max: 0.01 }
    }
}

/// Flags describing where a point sits relative to the proven regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeReport {
    /// Real `ω̃` with `q̃² < ω̃ < q̃`.
    pub in_bracket: bool,
    /// Both `α̃_±` exist on the principal branch with positive real part.
    pub branch_ok: bool,
    pub semiclassical: bool,
}

pub fn validate_regime(point: &ScaledPoint, c0: f64) -> RegimeReport {
    validate_regime_with(point, c0, &SemiclassicalThresholds::default())
}

pub fn validate_regime_with(point: &ScaledPoint, c0: f64, th: &SemiclassicalThresholds) -> RegimeReport {
    let q = point.qt;
    let w = point.wt;
    let in_bracket = w.im == 0.0 && q * q < w.re && w.re < q;
    let branch_ok = Sign::BOTH
        .iter()
        .all(|&s| alpha_sigma(point, s).map(|a| a.re > 0.0).unwrap_or(false));
    let wabs = w.norm();
    let semiclassical = q > 0.0
        && wabs > 0.0
        && q <= th.qt_max
        && wabs / q <= th.w_over_q_max
        && q * q / wabs <= th.q2_over_w_max
        && c0 <= th.c0_max;
    RegimeReport { in_bracket, branch_ok, semiclassical }
}

/// Converts a physical energy and wave number into scaled units.
pub fn to_scaled(params: &PhysicalParams, omega: f64, q: f64) -> Result<ScaledPoint> {
    if !(q > 0.0) {
        return Err(Error::domain(format!("q must be > 0, got {q}")));
    }
    let b = params.beta;
    Ok(ScaledPoint::real(q / b, omega / (b * b)))
}

/// Inverse of [`to_scaled`]: returns `(ω, q)`.
pub fn from_scaled(params: &PhysicalParams, point: &ScaledPoint) -> (Complex64, f64) {
    let b = params.beta;
    (point.wt * (b * b), point.qt * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_trivial_values() {
        let a = alpha_sigma(&ScaledPoint::real(0.1, 0.0), Sign::Plus).unwrap();
        assert!((a.re - 1.01f64.sqrt()).abs() < 1e-15 && a.im == 0.0);
        let a = alpha_sigma(&ScaledPoint::real(0.1, 0.05), Sign::Plus).unwrap();
        assert!((a.re - 0.96f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn alpha_conjugation() {
        let p = ScaledPoint::new(0.1, Complex64::new(0.0, 0.05));
        let pc = ScaledPoint::new(0.1, Complex64::new(0.0, -0.05));
        let a = alpha_sigma(&p, Sign::Plus).unwrap();
        let b = alpha_sigma(&pc, Sign::Plus).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    fn alpha_on_cut_is_rejected() {
        let p = ScaledPoint::real(0.0, 1.5);
        assert!(matches!(alpha_sigma(&p, Sign::Plus), Err(Error::Domain(_))));
        assert!(alpha_sigma(&p, Sign::Minus).is_ok());
    }

    #[test]
    fn bracket_flags() {
        assert!(validate_regime(&ScaledPoint::real(0.05, 0.01), 1e-3).in_bracket);
        assert!(!validate_regime(&ScaledPoint::real(0.05, 0.06), 1e-3).in_bracket);
        assert!(!validate_regime(&ScaledPoint::real(0.05, 0.001), 1e-3).in_bracket);
    }

    #[test]
    fn scaling_examples() {
        let p = PhysicalParams::new(2.0, 1.0, 1.0).unwrap();
        let s = to_scaled(&p, 0.08, 0.1).unwrap();
        assert!((s.qt - 0.05).abs() < 1e-16 && (s.wt.re - 0.02).abs() < 1e-16);
        let unit = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        let s = to_scaled(&unit, 0.3, 0.7).unwrap();
        assert_eq!((s.qt, s.wt.re), (0.7, 0.3));
        assert!(to_scaled(&p, 0.1, 0.0).is_err());
    }

    #[test]
    fn rejects_nonpositive_params() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::NAN).is_err());
    }
}
