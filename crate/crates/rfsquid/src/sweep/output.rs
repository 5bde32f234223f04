//! CSV and SVG emission.

use super::run::{SweepRow, COLUMNS, UNITS};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// The CSV text: header, a `#` line with units, one record per row.
pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut head = csv::Writer::from_writer(Vec::new());
    head.write_record(COLUMNS)?;
    let mut out = into_string(head)?;
    let units: Vec<String> = COLUMNS
        .iter()
        .zip(UNITS)
        .filter(|(_, u)| !u.is_empty())
        .map(|(c, u)| format!("{c} [{u}]"))
        .collect();
    let _ = writeln!(out, "# units: {}", units.join(", "));
    let mut body = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        let values = [
            r.phi_x, r.nu, r.e_f1, r.e_f2, r.e_0, r.e_l, r.e_r, r.f1_ghz, r.f2_ghz, r.l_ghz, r.r_ghz,
            r.gamma1, r.gamma2, r.rho_f1, r.rho_f2, r.w, r.w_osc,
        ];
        let mut rec: Vec<String> = values.iter().map(|&x| num(x)).collect();
        rec.push(r.flags.clone());
        body.write_record(&rec)?;
    }
    out.push_str(&into_string(body)?);
    Ok(out)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Csv(csv::Error::from(e.into_error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(rows)?).map_err(|e| io_err(path, e))
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rd.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(Error::ConfigValue {
            key: "csv header".into(),
            msg: format!("expected {}", COLUMNS.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let f = |k: usize| -> Result<f64> {
            rec[k].parse().map_err(|_| Error::ConfigValue {
                key: format!("csv record {} column {}", i + 1, COLUMNS[k]),
                msg: format!("`{}` is not a number", &rec[k]),
            })
        };
        rows.push(SweepRow {
            phi_x: f(0)?,
            nu: f(1)?,
            e_f1: f(2)?,
            e_f2: f(3)?,
            e_0: f(4)?,
            e_l: f(5)?,
            e_r: f(6)?,
            f1_ghz: f(7)?,
            f2_ghz: f(8)?,
            l_ghz: f(9)?,
            r_ghz: f(10)?,
            gamma1: f(11)?,
            gamma2: f(12)?,
            rho_f1: f(13)?,
            rho_f2: f(14)?,
            w: f(15)?,
            w_osc: f(16)?,
            flags: rec[17].to_string(),
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_csv(&text)
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

fn tick_label(x: f64) -> String {
    if x != 0.0 && (x.abs() >= 1e4 || x.abs() < 1e-2) {
        format!("{x:.2e}")
    } else {
        format!("{x:.4}")
    }
}

/// SVG plot of `w` against `phi_x` for the first drive frequency in `rows`.
/// Points without a finite `w` are left out.
pub fn svg_string(rows: &[SweepRow]) -> String {
    let nu = rows.first().map_or(f64::NAN, |r| r.nu);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.nu.to_bits() == nu.to_bits() && r.w.is_finite())
        .map(|r| (r.phi_x, r.w))
        .collect();
    let (mut x0, mut x1) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let mut y1 = pts.iter().fold(0.0f64, |m, p| m.max(p.1));
    if !(x1 > x0) {
        x0 = rows.first().map_or(0.0, |r| r.phi_x) - 0.5;
        x1 = x0 + 1.0;
    }
    if !(y1 > 0.0) {
        y1 = 1.0;
    }
    let y0 = 0.0;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{l} {t} V{b} H{r}" fill="none" stroke="black" stroke-width="1"/>"#,
        l = LEFT,
        t = TOP,
        b = TOP + ph,
        r = LEFT + pw
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{b:.2}" x2="{px:.2}" y2="{b2:.2}" stroke="black"/><text x="{px:.2}" y="{ty:.2}" font-size="11" text-anchor="middle">{lab}</text>"#,
            px = sx(x),
            b = TOP + ph,
            b2 = TOP + ph + 5.0,
            ty = TOP + ph + 18.0,
            lab = tick_label(x)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{l2:.2}" y1="{py:.2}" x2="{l:.2}" y2="{py:.2}" stroke="black"/><text x="{tx:.2}" y="{py:.2}" font-size="11" text-anchor="end" dominant-baseline="middle">{lab}</text>"#,
            l = LEFT,
            l2 = LEFT - 5.0,
            tx = LEFT - 8.0,
            py = sy(y),
            lab = tick_label(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{x:.2}" y="{y:.2}" font-size="13" text-anchor="middle">phi_x</text>"#,
        x = LEFT + 0.5 * pw,
        y = HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{y:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 20 {y:.2})">W (1/s)</text>"#,
        y = TOP + 0.5 * ph
    );
    if nu.is_finite() {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="20" font-size="13" text-anchor="middle">nu = {g:.4} GHz</text>"#,
            x = LEFT + 0.5 * pw,
            g = nu / 1e9
        );
    }
    let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y))).collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.2" points="{}"/>"#,
        coords.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(rows: &[SweepRow], path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(rows)).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(i: usize) -> SweepRow {
        let x = 0.34 + 1e-3 * i as f64 + 1.0 / 3.0 * 1e-7;
        SweepRow {
            phi_x: x,
            nu: 25.756e9,
            e_f1: 1e-21 * x,
            e_f2: 9e-22 / 7.0,
            e_0: 8e-22,
            e_l: 8e-22,
            e_r: 7.9e-22,
            f1_ghz: 25.1,
            f2_ghz: 24.3,
            l_ghz: 0.0,
            r_ghz: -3.0,
            gamma1: 1.0e6 / 3.0,
            gamma2: 2.0e6,
            rho_f1: 1e-3 * x,
            rho_f2: 2e-4,
            w: 1e5 * (i as f64 + 0.1).sin().abs(),
            w_osc: 1.0,
            flags: if i == 1 { "nonperturbative;negative-in-time".into() } else { String::new() },
        }
    }

    #[test]
    fn three_rows_give_header_plus_three_records() {
        let rows: Vec<_> = (0..3).map(row).collect();
        let text = csv_string(&rows).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 4);
        assert_eq!(data[0], COLUMNS.join(","));
        assert!(text.lines().nth(1).unwrap().starts_with("# units"));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows: Vec<_> = (0..5).map(row).collect();
        let back = parse_csv(&csv_string(&rows).unwrap()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn flags_with_delimiters_are_quoted() {
        let mut r = row(0);
        r.flags = "error: a, \"b\"".into();
        let text = csv_string(&[r.clone()]).unwrap();
        assert!(text.contains("\"error: a, \"\"b\"\"\""));
        assert_eq!(parse_csv(&text).unwrap()[0].flags, r.flags);
    }

    #[test]
    fn nan_survives() {
        let mut r = row(0);
        r.w = f64::NAN;
        let back = parse_csv(&csv_string(&[r]).unwrap()).unwrap();
        assert!(back[0].w.is_nan());
    }

    #[test]
    fn svg_has_one_polyline() {
        let rows: Vec<_> = (0..20).map(row).collect();
        let s = svg_string(&rows);
        assert!(s.starts_with("<?xml"));
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(s.contains("W (1/s)"));
    }
}
