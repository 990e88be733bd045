use std::path::PathBuf;
use std::process::{Command, Output};

fn vdw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdw")).args(args).output().expect("binary runs")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vdw-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .parse()
        .unwrap()
}

const ATOM: &str = "[atom]\nomega10 = 1.0\nd2 = 1.0\n";

const DIELECTRIC: &str = "[scene]\nkind = \"layers\"\n[material]\nkind = \"drude_lorentz\"\nomega_pe = 3.0\nomega_te = 1.0\nomega_ge = 0.001\n";

#[test]
fn vacuum_eval_has_no_scattering() {
    let cfg = format!(
        "[scene]\nkind = \"layers\"\n[material]\nkind = \"vacuum\"\n{ATOM}[geometry]\norientation = \"parallel\"\nz = 0.5\nl = 1e-3\n"
    );
    let o = vdw(&["eval", "--config", scratch("vacuum.toml", &cfg).to_str().unwrap()]);
    assert!(o.status.success());
    let r = stdout(&o);
    assert_eq!(value(&r, "u1"), 0.0);
    assert_eq!(value(&r, "u2"), 0.0);
    assert!(value(&r, "total") < 0.0);
}

#[test]
fn one_grid_point_ratio_is_reduced() {
    let cfg = format!("{DIELECTRIC}{ATOM}[geometry]\norientation = \"parallel\"\nz = 0.01\nl = 0.1\n");
    let o = vdw(&["eval", "--rel-tol", "1e-6", "--config", scratch("fig5a.toml", &cfg).to_str().unwrap()]);
    assert!(o.status.success());
    let ratio = value(&stdout(&o), "ratio");
    assert!(ratio > 0.0 && ratio < 1.0, "{ratio}");
}

#[test]
fn missing_key_is_named() {
    let cfg = format!("{DIELECTRIC}[atom]\nomega10 = 1.0\n[geometry]\norientation = \"parallel\"\nz = 0.01\nl = 0.1\n");
    let o = vdw(&["eval", "--config", scratch("missing.toml", &cfg).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`d2`"));

    let cfg = format!("{DIELECTRIC}{ATOM}[geometry]\norientation = \"vertical\"\nl = 0.1\n");
    let o = vdw(&["eval", "--config", scratch("missing_z.toml", &cfg).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`z`"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(vdw(&["eval", "--bogus"]).status.code(), Some(1));
    assert_eq!(vdw(&["--help"]).status.code(), Some(0));
}

#[test]
fn one_point_sweep_matches_eval() {
    let cfg = format!(
        "{DIELECTRIC}{ATOM}[geometry]\norientation = \"vertical\"\nz = 0.2\nl = 0.3\n[sweep]\norientation = \"vertical\"\nz = [0.2]\nl = [0.3]\n"
    );
    let path = scratch("one_point.toml", &cfg);
    let e = stdout(&vdw(&["eval", "--config", path.to_str().unwrap()]));
    let s = vdw(&["sweep", "--config", path.to_str().unwrap()]);
    assert!(s.status.success());
    let s = stdout(&s);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    for key in ["u0", "u1", "u2", "total", "ratio"] {
        let k = header.iter().position(|h| *h == key).unwrap();
        assert_eq!(fields[k].parse::<f64>().unwrap(), value(&e, key), "{key}");
    }
    assert_eq!(*fields.last().unwrap(), "true");
}

#[test]
fn vacuum_sweep_ratio_is_one_and_output_is_stable() {
    let cfg = format!(
        "[scene]\nkind = \"layers\"\n[material]\nkind = \"vacuum\"\n{ATOM}[sweep]\norientation = \"parallel\"\nz = [0.1, 1.0]\nl = {{ start = 1e-3, stop = 10.0, points = 9 }}\n"
    );
    let path = scratch("vacuum_sweep.toml", &cfg);
    let a = stdout(&vdw(&["sweep", "--workers", "3", "--config", path.to_str().unwrap()]));
    let b = stdout(&vdw(&["sweep", "--workers", "1", "--config", path.to_str().unwrap()]));
    assert_eq!(a, b);
    let rows: Vec<&str> = a.lines().skip(1).collect();
    assert_eq!(rows.len(), 18);
    for r in rows {
        let ratio: f64 = r.split(',').nth(6).unwrap().parse().unwrap();
        assert_eq!(ratio, 1.0);
    }
}

#[test]
fn sweep_writes_to_out() {
    let cfg = format!(
        "[scene]\nkind = \"bulk\"\n[material]\nkind = \"constant\"\neps = 4.0\n{ATOM}[sweep]\norientation = \"parallel\"\nz = [1.0]\nl = [1000.0]\n"
    );
    let path = scratch("bulk.toml", &cfg);
    let out = path.with_extension("csv");
    let o = vdw(&["sweep", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let ratio: f64 = text.lines().nth(1).unwrap().split(',').nth(6).unwrap().parse().unwrap();
    assert!((ratio * 32.0 - 1.0).abs() < 0.03, "{ratio}");
}

#[test]
fn verify_passes_on_defaults() {
    let o = vdw(&["verify", "--seed", "11"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn corrupted_denominator_fails_verification() {
    let o = vdw(&["verify", "--trials", "5", "--corrupt-denominator", "vii"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn small_figure_run() {
    let cfg = "[figure]\nheights = [0.01, 1.0]\nseparations = [0.001, 0.1]\n";
    let path = scratch("figure.toml", cfg);
    let o = vdw(&["figure", "fig5a", "--config", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "l_over_c_omega10,z_label,ratio,err,converged");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let ratio = |k: usize| rows[k][2].parse::<f64>().unwrap();
    assert!(ratio(0) < 1.0);
    assert!((ratio(2) - 1.0).abs() < 1e-2);
    assert!(rows.iter().all(|r| r[4] == "true"));
    assert_eq!(vdw(&["figure", "fig9"]).status.code(), Some(1));
}
