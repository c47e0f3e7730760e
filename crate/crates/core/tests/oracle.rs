use plasmon_core::dispersion::{find_root, RootOptions};
use plasmon_core::oracle::{build_operator, oracle_root, GridSpec, OracleOptions};
use plasmon_core::ScaledPoint;

fn grid(n: usize, z_max: f64) -> GridSpec {
    GridSpec { n_points: n, panels: n / 10, z_max, ..GridSpec::default() }
}

#[test]
fn weighted_form_becomes_symmetric_under_refinement() {
    let p = ScaledPoint::real(0.05, 0.0101);
    let coarse = build_operator(&p, 1e-3, &grid(100, 40.0)).unwrap().symmetry_defect();
    let fine = build_operator(&p, 1e-3, &grid(400, 40.0)).unwrap().symmetry_defect();
    assert!(fine < coarse);
    assert!(fine <= 1e-6, "{fine}");
}

#[test]
fn operator_is_singular_only_at_series_root() {
    let series = find_root(0.05, 1e-3, &RootOptions::default()).unwrap().wt;
    for n in [400, 800] {
        let at = build_operator(&ScaledPoint::real(0.05, series), 1e-3, &grid(n, 40.0)).unwrap();
        let off = build_operator(&ScaledPoint::real(0.05, 1.05 * series), 1e-3, &grid(n, 40.0)).unwrap();
        let s_at = at.smallest_singular().unwrap().sigma / at.norm2();
        let s_off = off.smallest_singular().unwrap().sigma / off.norm2();
        assert!(s_at <= 1e-6, "n = {n}: {s_at}");
        assert!(s_off >= 1e3 * s_at, "n = {n}: {s_off} vs {s_at}");
    }
}

#[test]
fn root_converges_under_refinement() {
    let series = find_root(0.05, 1e-3, &RootOptions::default()).unwrap().wt;
    let narrow = |g: GridSpec| OracleOptions {
        grid: g,
        scan_points: 5,
        x_tolerance: 1e-9,
        bracket: Some((0.98 * series, 1.02 * series)),
        ..OracleOptions::default()
    };
    let a = oracle_root(0.05, 1e-3, &narrow(grid(400, 40.0))).unwrap();
    let b = oracle_root(0.05, 1e-3, &narrow(grid(800, 60.0))).unwrap();
    assert!((a.wt - b.wt).abs() <= 2e-4 * a.wt);
    assert!(a.sigma_min <= 1e-6 * a.operator_norm);

    // Even mode decays well before the end of the mesh.
    let peak = a.eigenfunction.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tail = a.eigenfunction.last().unwrap().norm();
    assert!(tail <= 1e-8 * peak);
}

#[test]
fn bad_grids_are_rejected() {
    assert!(oracle_root(0.05, 1e-3, &OracleOptions { grid: grid(40, 40.0), ..OracleOptions::default() }).is_err());
    let bad = OracleOptions { bracket: Some((0.02, 0.01)), ..OracleOptions::default() };
    assert!(oracle_root(0.05, 1e-3, &bad).is_err());
}
