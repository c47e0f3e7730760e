use std::process::{Command, Output};

fn plasmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plasmon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SWEEP: [&str; 9] = ["dispersion", "--c0", "1e-3", "--qmin", "0.02", "--qmax", "0.1", "--n", "9"];

#[test]
fn dispersion_sweep_emits_one_row_per_point() {
    let o = plasmon(&SWEEP);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "qt,wt,det_residual,nullity_gap,q,omega,status");
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
    // q̃ = 0.05 is the fourth row.
    let wt: f64 = rows[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!((wt - 0.010130177426329).abs() <= 1e-12 * wt);
}

#[test]
fn output_is_reproducible_and_logs_config() {
    let a = plasmon(&SWEEP);
    let b = plasmon(&SWEEP);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("effective config"));
}

#[test]
fn floats_carry_seventeen_digits() {
    let text = stdout(&plasmon(&SWEEP));
    let cell = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let mantissa = cell.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{cell}");
}

#[test]
fn invalid_coupling_is_a_usage_error() {
    let o = plasmon(&["dispersion", "--c0", "-1", "--qmin", "0.02", "--qmax", "0.1", "--n", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_flag_exits_one() {
    assert_eq!(plasmon(&["dispersion", "--bogus"]).status.code(), Some(1));
    assert_eq!(plasmon(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let o = plasmon(&["dispersion", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("--qmin"));
}

#[test]
fn mixing_unit_modes_is_rejected() {
    let o = plasmon(&["--c0", "1e-3", "--eta0", "1", "--coupling", "0.1", "dispersion", "--qmin", "0.05", "--qmax", "0.05", "--n", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn physical_units_give_the_same_root() {
    // coupling / (2β³) = 1e-3 with β = 2.
    let o = plasmon(&["--beta", "2", "--eta0", "1", "--coupling", "0.016", "dispersion", "--qmin", "0.05", "--qmax", "0.05", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let wt: f64 = row[1].parse().unwrap();
    let q: f64 = row[4].parse().unwrap();
    let omega: f64 = row[5].parse().unwrap();
    assert!((wt - 0.010130177426329).abs() <= 1e-12 * wt);
    assert_eq!(q, 0.1);
    assert!((omega - 4.0 * wt).abs() <= 1e-15 * omega);
}

#[test]
fn empty_grid_gives_header_only() {
    let o = plasmon(&["dispersion", "--qmin", "0.02", "--qmax", "0.1", "--n", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "qt,wt,det_residual,nullity_gap,q,omega,status\n");
}

#[test]
fn missing_root_exits_two_with_status() {
    let o = plasmon(&["dispersion", "--c0", "1e-7", "--qmin", "0.05", "--qmax", "0.05", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.ends_with(",not_found"));
    assert!(!row.to_lowercase().contains("nan"));
}

#[test]
fn json_round_trip_preserves_values() {
    let csv_text = stdout(&plasmon(&SWEEP));
    let mut args = SWEEP.to_vec();
    args.push("--json");
    let json: serde_json::Value = serde_json::from_slice(&plasmon(&args).stdout).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for (row, line) in rows.iter().zip(csv_text.lines().skip(1)) {
        let wt_csv: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(row["wt"].as_f64().unwrap(), wt_csv);
        assert_eq!(row["null_vector"].as_array().unwrap().len(), 6);
        assert_eq!(row["null_vector"][5][0].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"c0": 1e-2, "format": "json"}"#).unwrap();
    let p = path.to_str().unwrap();

    let from_file = plasmon(&["--config", p, "dispersion", "--qmin", "0.05", "--qmax", "0.05", "--n", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    let wt_file = v[0]["wt"].as_f64().unwrap();

    let flagged = plasmon(&["--config", p, "--c0", "1e-3", "--format", "csv", "dispersion", "--qmin", "0.05", "--qmax", "0.05", "--n", "1"]);
    let text = stdout(&flagged);
    let wt_flag: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((wt_flag - 0.010130177426329).abs() <= 1e-12);
    assert!(wt_file > 2.0 * wt_flag);

    std::fs::write(&path, r#"{"c0": 1e-3, "typo": 1}"#).unwrap();
    assert_eq!(plasmon(&["--config", p, "dispersion", "--qmin", "0.05", "--qmax", "0.05", "--n", "1"]).status.code(), Some(1));
}

#[test]
fn amplitude_profile_decays() {
    let o = plasmon(&["amplitude", "--qt", "0.05", "--zmax", "10", "--n", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[1][3] < w[0][3]));
    let last = rows.last().unwrap();
    assert!((last[3] - last[6]).abs() <= 1e-8 * last[3]);
}

#[test]
fn semiclassical_table() {
    let o = plasmon(&["semiclassical", "--c0", "1e-3", "--qgrid", "0.02,0.05,0.08"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    for line in text.lines().skip(1) {
        let c: Vec<&str> = line.split(',').collect();
        let lead: f64 = c[4].parse().unwrap();
        let corr: f64 = c[5].parse().unwrap();
        assert!(corr < lead);
    }
}

#[test]
fn propagator_samples() {
    let o = plasmon(&["propagator", "--kind", "hat", "--zmin", "-2", "--zmax", "2", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("re,im,z,zp,k_or_r,w_or_t,w_im,status\n"));
    assert_eq!(text.lines().count(), 6);
    let o = plasmon(&["propagator", "--kind", "time", "--t", "0", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_without_oracle_passes_and_dumps_operator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("op.txt");
    let o = plasmon(&[
        "--grid-points", "100", "--grid-panels", "10", "check", "--dump-operator", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 13);
    assert_eq!(text.matches(",PASS,").count(), 10);
    assert_eq!(text.matches(",SKIP,").count(), 2);

    let dump = std::fs::read_to_string(&path).unwrap();
    let mut lines = dump.lines();
    assert_eq!(lines.next().unwrap(), "100");
    assert_eq!(lines.count(), 100 * 100);
}
