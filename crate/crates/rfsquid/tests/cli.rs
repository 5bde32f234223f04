use std::path::Path;
use std::process::{Command, Output};

fn rfsquid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfsquid")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_lists_subcommands_and_config_keys() {
    let o = rfsquid(&["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for word in ["levels", "crossing", "sweep", "validate", "plot", "device.beta_L", "sweep.seed_phi_x"] {
        assert!(text.contains(word), "help lacks {word}");
    }
}

#[test]
fn crossing_reports_the_reference_pair() {
    let o = rfsquid(&["crossing"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("{key} ="))).unwrap();
        line.split('=').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap()
    };
    assert!((value("phi_x0") - 0.332_253_757_9).abs() < 1e-8);
    assert_eq!(value("k1"), 1.0);
    assert_eq!(value("k2"), 24.0);
    assert!(value("lambda0") > 1.0 && value("lambda0") < 3.0);
}

#[test]
fn seed_flag_selects_another_crossing() {
    let o = rfsquid(&["crossing", "--seed-phix", "0.345"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("k2 = 25"));
}

#[test]
fn invalid_arguments_exit_with_code_two() {
    for args in [
        &["sweep", "--nu", "-5"][..],
        &["sweep", "--points", "1", "--nu", "25e9"],
        &["levels", "--reff", "0"],
        &["levels", "--config", "/nonexistent/file.conf"],
        &["sweep"],
    ] {
        let o = rfsquid(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
}

fn data_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn levels_csv_has_header_units_and_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("levels.csv");
    let o = rfsquid(&["levels", "--points", "11", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let lines = data_lines(&out);
    assert_eq!(lines.len(), 13);
    assert!(lines[0].starts_with("phi_x,nu,e_f1"));
    assert!(lines[1].starts_with("# units:"));
    let rows = rfsquid::sweep::read_csv(&out).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.nu.is_nan() && r.e_f1 > r.e_f2));
}

#[test]
fn sweep_then_plot_gives_an_svg_polyline() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let svg = dir.path().join("w.svg");
    let o = rfsquid(&["sweep", "--points", "41", "--nu", "36e9", "--reff", "4e6", "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("classification"));
    let o = rfsquid(&["plot", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.root_element().attribute("version"), Some("1.1"));
    let lines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
    assert_eq!(lines.len(), 1);
    let points = lines[0].attribute("points").unwrap().split_whitespace().count();
    assert_eq!(points, 41);
}

#[test]
fn shipped_presets_parse_and_locate_their_crossings() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = rfsquid::sweep::read_config(&path).unwrap();
        assert_eq!(cfg.drive.nu.len(), 1, "{}", path.display());
        let o = rfsquid(&["crossing", "--config", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", path.display());
        seen += 1;
    }
    assert_eq!(seen, 3);
}
