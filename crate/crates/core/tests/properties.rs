use num_complex::Complex64;
use proptest::prelude::*;

use plasmon_core::amplitude::{amplitude_eval, AmplitudeProfile};
use plasmon_core::dispersion::{lambda_det, scan_interval, RootOptions};
use plasmon_core::kernel::{script_g, script_g_oracle};
use plasmon_core::param_core::{alpha_sigma, LengthScales, PhysicalParams, ScaledPoint, Sign};
use plasmon_core::propagator::complex_erfc;
use plasmon_core::semiclassical::{classical_dispersion, corrected_dispersion};
use plasmon_core::series::{decay_bound, lambda_seq};

/// `(q̃, ω̃)` inside the plasmon bracket, away from the pole at `q̃²`.
fn regime_point() -> impl Strategy<Value = ScaledPoint> {
    (0.01f64..0.2, 0.0f64..1.0).prop_filter_map("bracket", |(q, u)| {
        let (lo, hi) = scan_interval(q, &RootOptions::default()).ok()?;
        Some(ScaledPoint::real(q, lo + u * (hi - lo)))
    })
}

fn coupling() -> impl Strategy<Value = f64> {
    (-4.0f64..-2.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_reflection(p in regime_point(), z in -5.0f64..5.0, zp in -5.0f64..5.0, plus in any::<bool>()) {
        let w = Complex64::new(-1.0 + if plus { p.wt.re } else { -p.wt.re }, 0.0);
        let a = script_g(w, p.qt, z, zp).unwrap();
        let b = script_g(w, p.qt, -z, -zp).unwrap();
        prop_assert!((a - b).norm() <= 1e-14 * a.norm());
    }

    #[test]
    fn kernel_matches_quadrature(p in regime_point(), z in -4.0f64..4.0, zp in -4.0f64..4.0) {
        let w = Complex64::new(-1.0 + p.wt.re, 0.0);
        let a = script_g(w, p.qt, z, zp).unwrap();
        let b = script_g_oracle(w, p.qt, z, zp).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * b.norm());
    }

    #[test]
    fn determinant_even_in_energy(p in regime_point(), c0 in coupling()) {
        let a = lambda_det(&p, c0).unwrap();
        let b = lambda_det(&p.reflected(), c0).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn coefficients_obey_decay_bounds(p in regime_point(), c0 in coupling()) {
        let c = lambda_seq(&p, c0, 30).unwrap();
        for n in 1..=30 {
            prop_assert!(c.lambda_plus[n].norm() <= decay_bound(1.5 * c0, n));
            prop_assert!(c.lambda_minus[n].norm() <= decay_bound(1.5 * c0, n));
            prop_assert!(c.lambda_slashed[n].norm() <= decay_bound(0.375 * c0, n));
        }
    }

    #[test]
    fn amplitude_is_even(p in regime_point(), c0 in coupling(), z in 0.0f64..10.0) {
        let prof = AmplitudeProfile::least_singular(p, c0, 6).unwrap();
        prop_assert_eq!(amplitude_eval(z, &prof), amplitude_eval(-z, &prof));
    }

    #[test]
    fn alpha_has_positive_real_part(q in 0.0f64..1.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let p = ScaledPoint::new(q, Complex64::new(re, im));
        for s in Sign::BOTH {
            if let Ok(a) = alpha_sigma(&p, s) {
                prop_assert!(a.re >= 0.0);
                let back = 1.0 + q * q - s.value() * p.wt;
                prop_assert!((a * a - back).norm() <= 1e-13 * back.norm().max(1.0));
            }
        }
    }

    #[test]
    fn erfc_symmetries(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let z = Complex64::new(x, y);
        let v = complex_erfc(z);
        prop_assert!((complex_erfc(z.conj()) - v.conj()).norm() <= 1e-15 * v.norm());
        let r = complex_erfc(-z);
        prop_assert!((v + r - 2.0).norm() <= 1e-13 * v.norm().max(r.norm()).max(1.0));
    }

    #[test]
    fn classical_law_linear_in_density(coupling in 1e-4f64..1.0, q in 1e-3f64..0.5) {
        let a = PhysicalParams::new(1.0, 1.0, coupling).unwrap();
        let b = PhysicalParams::new(1.0, 2.0, 2.0 * coupling).unwrap();
        let wa = classical_dispersion(q, &a).unwrap();
        let wb = classical_dispersion(q, &b).unwrap();
        prop_assert!((wb * wb / q - 2.0 * wa * wa / q).abs() <= 1e-14 * wb * wb / q);
    }

    #[test]
    fn coupling_from_length_scales(beta in 0.2f64..5.0, eta0 in 0.01f64..10.0, coupling in 1e-4f64..1.0) {
        let p = PhysicalParams::new(beta, eta0, coupling).unwrap();
        let l = LengthScales::new(&p, 0.1, 0.01).unwrap();
        prop_assert!((l.c0() - p.c0()).abs() <= 1e-13 * p.c0());
    }

    #[test]
    fn corrected_law_is_a_fixed_point(q in 0.005f64..0.1, c0 in coupling()) {
        let w = corrected_dispersion(q, c0).unwrap();
        let again = (2.0 * c0 * q * (1.0 - 0.75 * q + q.powi(4) / (w * w))).sqrt();
        prop_assert!((again - w).abs() <= 1e-11 * w);
    }
}
