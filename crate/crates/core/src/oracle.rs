//! Brute-force cross-check: Nyström discretization of the even-sector
//! Fredholm equation on the half-line.
//!
//! The unknown is `e^{-z} F(z)` at the quadrature nodes. A mode exists where
//! the operator `I + K W` has a null vector; the search minimizes its smallest
//! singular value over real `ω̃`.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{scan_interval, RootOptions};
use crate::error::{Error, Result};
use crate::kernel::{even_kernel, KernelContext, DEFAULT_Z_MAX};
use crate::param_core::ScaledPoint;
use crate::quad::Rule;

/// Node-placement rule of a [`GridSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeshRule {
    /// Gauss–Legendre panels whose edges follow `z = -L ln(1 - u(1 - e^{-z_max/L}))`
    /// for uniform `u`, `L = 4`, so node density falls off like `e^{-z/4}`.
    GradedGaussLegendre,
}

/// Half-line quadrature mesh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub z_max: f64,
    pub n_points: usize,
    /// Number of panels; `n_points` must be a multiple of it.
    pub panels: usize,
    pub rule: MeshRule,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { z_max: DEFAULT_Z_MAX, n_points: 400, panels: 40, rule: MeshRule::GradedGaussLegendre }
    }
}

const GRADING_LENGTH: f64 = 4.0;

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 50 {
            return Err(Error::domain(format!("grid needs at least 50 points, got {}", self.n_points)));
        }
        if !(self.z_max >= 20.0) || !self.z_max.is_finite() {
            return Err(Error::domain(format!("grid z_max must be >= 20, got {}", self.z_max)));
        }
        if self.panels == 0 || self.n_points % self.panels != 0 || self.n_points / self.panels < 2 {
            return Err(Error::domain(format!(
                "n_points = {} must be a multiple of panels = {} with at least 2 nodes per panel",
                self.n_points, self.panels
            )));
        }
        Ok(())
    }

    /// Panel edges on `[0, z_max]`.
    pub fn edges(&self) -> Vec<f64> {
        let l = GRADING_LENGTH;
        let span = 1.0 - (-self.z_max / l).exp();
        let mut e: Vec<f64> = (0..=self.panels)
            .map(|k| -l * (1.0 - span * k as f64 / self.panels as f64).ln())
            .collect();
        e[self.panels] = self.z_max;
        e
    }

    /// Nodes and weights on `[0, z_max]`.
    pub fn nodes(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate()?;
        let MeshRule::GradedGaussLegendre = self.rule;
        Ok(Rule::new(self.n_points / self.panels).composite(&self.edges()))
    }
}

/// Discretized `I + K W` on the half-line.
#[derive(Debug, Clone, PartialEq)]
pub struct FredholmOperator {
    pub matrix: DMatrix<Complex64>,
    pub point: ScaledPoint,
    pub c0: f64,
    pub grid: GridSpec,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Assembles the operator; rows are filled in parallel.
pub fn build_operator(point: &ScaledPoint, c0: f64, grid: &GridSpec) -> Result<FredholmOperator> {
    let (nodes, weights) = grid.nodes()?;
    let ctx = KernelContext::new(*point, c0)?;
    let n = nodes.len();
    let rows: Vec<Vec<Complex64>> = nodes
        .par_iter()
        .enumerate()
        .map(|(i, &z)| {
            let mut row = Vec::with_capacity(n);
            for (j, (&zp, &w)) in nodes.iter().zip(&weights).enumerate() {
                let k = if c0 == 0.0 { Complex64::new(0.0, 0.0) } else { even_kernel(&ctx, z, zp)? * w };
                row.push(if i == j { k + 1.0 } else { k });
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    Ok(FredholmOperator { matrix, point: *point, c0, grid: *grid, nodes, weights })
}

/// Smallest singular value and its right singular vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPair {
    pub sigma: f64,
    pub vector: DVector<Complex64>,
}

impl FredholmOperator {
    /// Smallest singular pair by inverse iteration on `MᴴM` through two LU
    /// factorizations. Much cheaper than a full SVD for the scan.
    pub fn smallest_singular(&self) -> Result<SingularPair> {
        let n = self.matrix.nrows();
        let lu = self.matrix.clone().lu();
        let lu_adj = self.matrix.adjoint().lu();
        let mut x = DVector::from_element(n, Complex64::new(1.0, 0.0));
        x /= Complex64::new(x.norm(), 0.0);
        let mut sigma = f64::INFINITY;
        for _ in 0..200 {
            // (MᴴM)⁻¹ x = M⁻¹ M⁻ᴴ x.
            let y = match lu_adj.solve(&x) {
                Some(y) => y,
                None => return Ok(SingularPair { sigma: 0.0, vector: x }),
            };
            let z = match lu.solve(&y) {
                Some(z) => z,
                None => return Ok(SingularPair { sigma: 0.0, vector: x }),
            };
            let growth = z.norm();
            if !growth.is_finite() || growth == 0.0 {
                return Err(Error::Numeric("inverse iteration broke down".into()));
            }
            let next = 1.0 / growth.sqrt();
            x = z / Complex64::new(growth, 0.0);
            let settled = (next - sigma).abs() <= 1e-13 * next;
            sigma = next;
            if settled {
                break;
            }
        }
        // Rayleigh estimate from the converged vector.
        let sigma = (&self.matrix * &x).norm();
        Ok(SingularPair { sigma, vector: x })
    }

    /// Spectral norm by power iteration on `MᴴM`.
    pub fn norm2(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut x = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
        let mut est = 0.0;
        for _ in 0..100 {
            let y = self.matrix.adjoint() * (&self.matrix * &x);
            let g = y.norm();
            if g == 0.0 {
                return 0.0;
            }
            x = y / Complex64::new(g, 0.0);
            let next = g.sqrt();
            if (next - est).abs() <= 1e-12 * next {
                return next;
            }
            est = next;
        }
        est
    }

    /// Relative asymmetry of `W D W K W`, where `D` is the even-sector
    /// matrix of `e^{-q̃|z - z'|}` and `K W = M - I`.
    ///
    /// The kernel itself is not symmetric; it is a symmetric operator composed
    /// with `𝒟_q`, so this bilinear form is the discrete object that should be
    /// symmetric. It is so up to discretization error.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.nodes.len();
        let q = self.point.qt;
        let d = DMatrix::from_fn(n, n, |i, j| {
            let (a, b) = (self.nodes[i], self.nodes[j]);
            Complex64::new((-q * (a - b).abs()).exp() + (-q * (a + b)).exp(), 0.0)
        });
        let w = DMatrix::from_fn(n, n, |i, j| Complex64::new(if i == j { self.weights[i] } else { 0.0 }, 0.0));
        let kw = &self.matrix - DMatrix::identity(n, n);
        let b = &w * d * &w * kw;
        let scale = b.norm();
        if scale == 0.0 {
            return 0.0;
        }
        (&b - b.transpose()).norm() / scale
    }

    /// Plain-text dump: `n` on the first line, then one `re im` pair per line
    /// in row-major order.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.matrix.nrows();
        writeln!(out, "{n}")?;
        for i in 0..n {
            for j in 0..n {
                let v = self.matrix[(i, j)];
                writeln!(out, "{:.16e} {:.16e}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// Oracle settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub grid: GridSpec,
    pub scan_points: usize,
    pub margin: f64,
    /// Relative width at which golden-section refinement stops.
    pub x_tolerance: f64,
    /// Accept the minimum only if `σ_min ≤ floor · ‖operator‖`.
    pub floor: f64,
    /// Search interval; `None` uses the plasmon bracket with `margin`.
    pub bracket: Option<(f64, f64)>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { grid: GridSpec::default(), scan_points: 32, margin: 0.02, x_tolerance: 1e-11, floor: 1e-6, bracket: None }
    }
}

/// A root located by the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRoot {
    pub qt: f64,
    pub wt: f64,
    pub sigma_min: f64,
    pub operator_norm: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Null vector at the nodes, scaled to unit peak with real positive peak.
    pub eigenfunction: Vec<Complex64>,
    /// `(ω̃, σ_min)` samples of the coarse scan.
    pub trace: Vec<(f64, f64)>,
}

fn sigma_at(qt: f64, c0: f64, grid: &GridSpec, wt: f64) -> Result<f64> {
    Ok(build_operator(&ScaledPoint::real(qt, wt), c0, grid)?.smallest_singular()?.sigma)
}

/// Locates the minimum of `σ_min(ω̃)` over the plasmon bracket.
pub fn oracle_root(qt: f64, c0: f64, opts: &OracleOptions) -> Result<OracleRoot> {
    opts.grid.validate()?;
    let bracket_opts = RootOptions { margin: opts.margin, ..RootOptions::default() };
    let (lo, hi) = match opts.bracket {
        Some((lo, hi)) if lo > 0.0 && lo < hi => (lo, hi),
        Some(b) => return Err(Error::domain(format!("invalid search interval {b:?}"))),
        None => scan_interval(qt, &bracket_opts)?,
    };
    let m = opts.scan_points.max(3);
    let ws: Vec<f64> = (0..m).map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64).collect();
    let sig: Vec<f64> = ws.par_iter().map(|&w| sigma_at(qt, c0, &opts.grid, w)).collect::<Result<_>>()?;
    let trace: Vec<(f64, f64)> = ws.iter().copied().zip(sig.iter().copied()).collect();
    let k = (0..m).min_by(|&a, &b| sig[a].partial_cmp(&sig[b]).unwrap()).unwrap();
    let (mut a, mut b) = (ws[k.saturating_sub(1)], ws[(k + 1).min(m - 1)]);

    // Golden-section search on the bracketing pair of scan intervals.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = sigma_at(qt, c0, &opts.grid, x1)?;
    let mut f2 = sigma_at(qt, c0, &opts.grid, x2)?;
    while (b - a) > opts.x_tolerance * 0.5 * (a + b) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = sigma_at(qt, c0, &opts.grid, x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = sigma_at(qt, c0, &opts.grid, x2)?;
        }
    }
    let wt = if f1 < f2 { x1 } else { x2 };
    let op = build_operator(&ScaledPoint::real(qt, wt), c0, &opts.grid)?;
    let pair = op.smallest_singular()?;
    let operator_norm = op.norm2();
    if pair.sigma > opts.floor * operator_norm {
        return Err(Error::NotFound {
            reason: format!(
                "smallest singular value {:e} never fell below {:e} of the operator norm at qt = {qt}",
                pair.sigma, opts.floor
            ),
            trace,
        });
    }
    let peak = pair.vector.iter().copied().max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap()).unwrap();
    let phase = peak.conj() / peak.norm();
    let eigenfunction = pair.vector.iter().map(|v| v * phase / peak.norm()).collect();
    Ok(OracleRoot {
        qt,
        wt,
        sigma_min: pair.sigma,
        operator_norm,
        nodes: op.nodes,
        weights: op.weights,
        eigenfunction,
        trace,
    })
}

/// Weighted cosine similarity `|⟨a, b⟩_W| / (‖a‖_W ‖b‖_W)`.
pub fn weighted_cosine(a: &[Complex64], b: &[Complex64], weights: &[f64]) -> f64 {
    let mut dot = Complex64::new(0.0, 0.0);
    let (mut na, mut nb) = (0.0, 0.0);
    for ((x, y), w) in a.iter().zip(b).zip(weights) {
        dot += w * x.conj() * y;
        na += w * x.norm_sqr();
        nb += w * y.norm_sqr();
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot.norm() / (na * nb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GridSpec {
        GridSpec { n_points: 80, panels: 16, ..GridSpec::default() }
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec { n_points: 40, panels: 4, ..GridSpec::default() }.validate().is_err());
        assert!(GridSpec { z_max: 10.0, ..GridSpec::default() }.validate().is_err());
        assert!(GridSpec { n_points: 401, ..GridSpec::default() }.validate().is_err());
        assert!(GridSpec::default().validate().is_ok());
    }

    #[test]
    fn weights_integrate_decay() {
        let (z, w) = GridSpec::default().nodes().unwrap();
        let s: f64 = z.iter().zip(&w).map(|(z, w)| w * (-z).exp()).sum();
        // The last panel, [14.7, 40], limits this to about 1e-12.
        assert!((s - 1.0).abs() < 1e-10, "{s}");
        assert!(z[1] - z[0] < 0.02);
    }

    #[test]
    fn zero_coupling_is_identity() {
        let op = build_operator(&ScaledPoint::real(0.05, 0.01), 0.0, &small()).unwrap();
        assert_eq!(op.matrix, DMatrix::identity(80, 80));
    }

    #[test]
    fn inverse_iteration_matches_svd() {
        let op = build_operator(&ScaledPoint::real(0.05, 0.011), 1e-3, &small()).unwrap();
        let s = op.matrix.clone().singular_values();
        let min = s.iter().copied().fold(f64::INFINITY, f64::min);
        let got = op.smallest_singular().unwrap().sigma;
        assert!((got - min).abs() <= 1e-10 * min.max(1e-3), "{got} vs {min}");
    }

    #[test]
    fn dump_format_header() {
        let op = build_operator(&ScaledPoint::real(0.05, 0.01), 1e-3, &small()).unwrap();
        let mut buf = Vec::new();
        op.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("80"));
        assert_eq!(text.lines().count(), 1 + 80 * 80);
    }
}
