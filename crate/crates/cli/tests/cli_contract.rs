use std::io::Write;
use std::process::{Command, Output};

fn nestpol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nestpol")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header columns and data rows of a CSV report.
fn table(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# nestpol v1 seed="));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

#[test]
fn header_line_records_seed_and_command() {
    let out = nestpol(&["geom", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# nestpol v1 seed=7 cmd=geom\nquantity,value,formula\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn geom_rejects_invalid_radius() {
    assert_eq!(nestpol(&["geom", "--rho0", "1.0"]).status.code(), Some(2));
    assert_eq!(nestpol(&["geom", "--delta0", "1.5"]).status.code(), Some(2));
}

#[test]
fn geom_report_is_consistent() {
    let out = nestpol(&["geom"]);
    let (_, rows) = table(&out);
    let value = |name: &str| -> f64 {
        rows.iter().find(|r| r[0] == name).unwrap()[1].parse().unwrap()
    };
    let sigma = value("sigma");
    assert!((sigma - nestpol_core::geometry::sigma_hat(2.0, 0.5).unwrap()).abs() == 0.0);
    assert!((value("q2") - sigma.powf(-0.5)).abs() < 1e-15);
    assert!((value("c_ca") - 8.0).abs() < 1e-12);
}

#[test]
fn floats_have_seventeen_significant_digits() {
    let (header, rows) = table(&nestpol(&["converge", "--m_max", "4"]));
    assert_eq!(header, ["m", "lebesgue", "measured", "bound"]);
    for field in rows.iter().flat_map(|r| r[1..].iter()) {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
    }
}

#[test]
fn converge_rows_respect_bound() {
    let out = nestpol(&["converge", "--pole_re", "1.5", "--pole_im", "0.5", "--rho", "2.3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = table(&out);
    assert_eq!(rows.len(), 24);
    let measured = column(&header, &rows, "measured");
    let bound = column(&header, &rows, "bound");
    assert!(measured.iter().zip(&bound).all(|(m, b)| m <= b));
}

#[test]
fn converge_constant_function_is_exact() {
    let (header, rows) = table(&nestpol(&["converge", "--fn", "constant"]));
    assert!(column(&header, &rows, "measured").iter().all(|&m| m.abs() < 1e-14));
}

#[test]
fn converge_pole_inside_disc_is_a_violation() {
    assert_eq!(nestpol(&["converge", "--pole_re", "1.2"]).status.code(), Some(3));
}

#[test]
fn chain_modes_succeed_with_defaults() {
    for mode in ["error_first", "stability_first", "uniform", "varorder", "derivative"] {
        let out = nestpol(&["chain", "--mode", mode, "--L", "3"]);
        assert!(out.status.success(), "{mode}: {}", String::from_utf8_lossy(&out.stderr));
        let (header, rows) = table(&out);
        assert_eq!(header.len(), 10);
        assert!(!rows.is_empty());
    }
}

#[test]
fn chain_rows_are_sorted_by_window() {
    let (_, rows) = table(&nestpol(&["chain", "--L", "3"]));
    let keys: Vec<(usize, usize)> = rows.iter().map(|r| (r[2].parse().unwrap(), r[3].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 10);
}

#[test]
fn derivative_mode_refuses_low_orders() {
    let out = nestpol(&["chain", "--mode", "derivative", "--alpha", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn varorder_fills_bound_column_from_second_level() {
    let (header, rows) = table(&nestpol(&["chain", "--mode", "varorder", "--L", "4"]));
    let k = header.iter().position(|h| h == "varorder_bound").unwrap();
    assert!(rows[0][k].is_empty());
    assert!(rows[1..].iter().all(|r| r[k].parse::<f64>().is_ok()));
}

#[test]
fn osc_budget_violation_is_a_configuration_error() {
    let out = nestpol(&["osc", "--L", "1", "--directions", "0,100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn osc_helmholtz_rows_respect_bounds() {
    let out = nestpol(&["osc", "--fn", "helmholtz", "--y0", "-1", "--L", "3", "--directions", "approach"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn osc_zero_directions_match_plain_interpolation() {
    let args = ["osc", "--L", "2", "--alpha", "10", "--directions", "zero"];
    let (header, rows) = table(&nestpol(&args));
    let explicit = nestpol(&["osc", "--L", "2", "--alpha", "10", "--directions", "0,0,0"]);
    assert_eq!(table(&explicit).1, rows);
    assert!(column(&header, &rows, "measured_accuracy").iter().all(|m| m.is_finite()));
}

#[test]
fn fastsum_small_instance_is_exact() {
    let (header, rows) = table(&nestpol(&["fastsum", "--n", "16"]));
    assert!(column(&header, &rows, "err_rel")[0] <= 1e-12);
}

#[test]
fn fastsum_default_instance_meets_target() {
    let (header, rows) = table(&nestpol(&["fastsum", "--n", "1024,2048"]));
    let err = column(&header, &rows, "err_rel");
    let ops = column(&header, &rows, "op_count");
    assert!(err.iter().all(|&e| e <= 1e-6));
    assert!(ops[1] / ops[0] <= 2.5);
}

#[test]
fn config_file_then_flags() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# small run\nn = 64\nkernel = log\nm = 6").unwrap();
    let path = file.path().to_str().unwrap();
    let (_, rows) = table(&nestpol(&["fastsum", "--config", path]));
    assert_eq!(rows[0][0], "64");
    assert_eq!(rows[0][1], "6");
    let (_, rows) = table(&nestpol(&["fastsum", "--config", path, "--n", "32"]));
    assert_eq!(rows[0][0], "32");
    assert_eq!(rows[0][1], "6");
}

#[test]
fn config_errors_exit_with_two() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "unknown_key = 3").unwrap();
    let path = file.path().to_str().unwrap();
    assert_eq!(nestpol(&["fastsum", "--config", path]).status.code(), Some(2));
    assert_eq!(nestpol(&["fastsum", "--config", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(nestpol(&["fastsum", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(nestpol(&["fastsum", "--n", "x"]).status.code(), Some(2));
    assert_eq!(nestpol(&["fastsum", "--kernel", "gauss"]).status.code(), Some(2));
    assert_eq!(nestpol(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let out = nestpol(&["chain", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[default: error_first]"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("geom.csv");
    let to_file = nestpol(&["geom", "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), nestpol(&["geom"]).stdout);
}

#[test]
fn seeds_change_random_scenarios_only_through_the_seed() {
    let a = nestpol(&["osc", "--L", "2", "--directions", "random", "--seed", "1"]);
    let b = nestpol(&["osc", "--L", "2", "--directions", "random", "--seed", "2"]);
    assert_ne!(table(&a).1, table(&b).1);
    assert_eq!(a.stdout, nestpol(&["osc", "--L", "2", "--directions", "random", "--seed", "1"]).stdout);
}
