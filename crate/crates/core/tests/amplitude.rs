use num_complex::Complex64;
use plasmon_core::amplitude::{
    amplitude_eval, boundary_solution, even_equation_residual, far_field, integral_residual, l2_norm_sq,
    laplace_numeric, AmplitudeProfile,
};
use plasmon_core::dispersion::{find_root, DispersionRoot, RootOptions};
use plasmon_core::oracle::GridSpec;
use plasmon_core::series::{breve_f, BoundaryValues};
use plasmon_core::Sign;

fn root() -> DispersionRoot {
    find_root(0.05, 1e-3, &RootOptions::default()).unwrap()
}

#[test]
fn minor_and_svd_routes_agree() {
    let sol = boundary_solution(&root()).unwrap();
    assert_eq!(sol.minor_index, (5, 5));
    assert!(sol.disagreement <= 1e-8);
    assert_eq!(sol.bv.f_bmam, Complex64::new(1.0, 0.0));
}

#[test]
fn series_reproduces_its_boundary_values() {
    let p = AmplitudeProfile::at_root(&root()).unwrap();
    let at = BoundaryValues::abscissae(&p.point).unwrap();
    for (s, want) in at.iter().zip(p.bv.to_array()) {
        let got = breve_f(*s, &p.expansion).unwrap();
        assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "at {s}: {got} vs {want}");
    }
}

#[test]
fn laplace_transform_of_profile_matches() {
    let p = AmplitudeProfile::at_root(&root()).unwrap();
    let ap = p.point.alpha(Sign::Plus).unwrap();
    for (s, want) in [(Complex64::new(p.point.qt, 0.0), p.bv.f_q), (1.0 + ap, p.bv.f_bpap)] {
        let got = laplace_numeric(s, &p, 40.0);
        assert!((got - want).norm() <= 1e-7 * want.norm(), "{got} vs {want}");
    }
}

#[test]
fn far_field_is_the_slow_part() {
    let p = AmplitudeProfile::at_root(&root()).unwrap();
    for z in [10.0, 20.0] {
        let full = amplitude_eval(z, &p);
        let far = far_field(z, &p);
        // The first dropped exponential is smaller by e^{-2z}.
        assert!((full - far).norm() <= 10.0 * (-2.0 * z).exp() * far.norm());
    }
}

#[test]
fn amplitude_is_localized_and_square_integrable() {
    let p = AmplitudeProfile::at_root(&root()).unwrap();
    let slow = p.point.alpha(Sign::Plus).unwrap().re;
    let ratio = amplitude_eval(5.0, &p).norm() / amplitude_eval(0.0, &p).norm();
    assert!(ratio <= 10.0 * (-slow * 5.0).exp());
    let (a, b) = (l2_norm_sq(&p, 40.0), l2_norm_sq(&p, 80.0));
    assert!((a - b).abs() <= 1e-10 * b);
}

#[test]
fn integral_equation_holds_at_root_only() {
    let r = root();
    let grid = GridSpec::default();
    let at = integral_residual(&AmplitudeProfile::at_root(&r).unwrap(), &grid).unwrap();
    assert!(at <= 1e-6);
    let off = plasmon_core::ScaledPoint::real(r.qt, 1.05 * r.wt);
    let detuned = integral_residual(&AmplitudeProfile::least_singular(off, r.c0, r.n_max).unwrap(), &grid).unwrap();
    assert!(detuned >= 10.0 * at);
}

#[test]
fn half_line_even_equation_holds() {
    let p = AmplitudeProfile::at_root(&root()).unwrap();
    assert!(even_equation_residual(&p, &GridSpec::default()).unwrap() <= 1e-6);
}

#[test]
fn scaling_the_boundary_values_scales_the_amplitude() {
    let r = root();
    let p = AmplitudeProfile::at_root(&r).unwrap();
    let k = Complex64::new(0.0, 2.5);
    let q = AmplitudeProfile::from_boundary_values(p.point, p.c0, p.bv.scale(k), r.n_max).unwrap();
    for z in [0.0, 0.7, 3.0] {
        assert!((amplitude_eval(z, &q) - k * amplitude_eval(z, &p)).norm() <= 1e-14 * amplitude_eval(z, &q).norm());
    }
}
