//! Spectrum tables: closed forms paired with numeric eigenvalues.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dirac_gyroscope::{closed_form_lines, dirac_energies_numeric, DiracGyroParams};
use crate::error::Result;
use crate::kg_gyroscope::{kg_energies_numeric, kg_lines_symmetric, GyroParams, Sign, SpectralLine};

pub const CSV_HEADER: &str = "l,m,branch,sign,E_closed,E_numeric,rel_diff";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub l: u32,
    pub m: f64,
    pub branch: Option<u8>,
    pub sign: Sign,
    #[serde(rename = "E_closed")]
    pub e_closed: Option<f64>,
    #[serde(rename = "E_numeric")]
    pub e_numeric: f64,
    pub rel_diff: Option<f64>,
}

/// Pairs closed-form and numeric lines of one shell. Within each sign both
/// lists are ordered by `|E|` and matched in that order; the row takes the
/// closed-form labels.
pub fn pair_lines(closed: Option<Vec<SpectralLine>>, numeric: Vec<SpectralLine>) -> Vec<Row> {
    let mut rows = Vec::with_capacity(numeric.len());
    match closed {
        None => {
            for n in numeric {
                rows.push(Row {
                    l: n.labels.l,
                    m: n.labels.m(),
                    branch: n.labels.branch,
                    sign: n.labels.sign,
                    e_closed: None,
                    e_numeric: n.energy,
                    rel_diff: None,
                });
            }
        }
        Some(closed) => {
            assert_eq!(closed.len(), numeric.len(), "closed form and numeric line counts differ");
            for sign in [Sign::Plus, Sign::Minus] {
                let by_size = |lines: &[SpectralLine]| {
                    let mut v: Vec<SpectralLine> = lines.iter().filter(|l| l.labels.sign == sign).cloned().collect();
                    v.sort_by(|a, b| {
                        a.energy
                            .abs()
                            .total_cmp(&b.energy.abs())
                            .then(a.labels.sort_key().cmp(&b.labels.sort_key()))
                    });
                    v
                };
                for (c, n) in by_size(&closed).into_iter().zip(by_size(&numeric)) {
                    rows.push(Row {
                        l: c.labels.l,
                        m: c.labels.m(),
                        branch: c.labels.branch,
                        sign,
                        e_closed: Some(c.energy),
                        e_numeric: n.energy,
                        rel_diff: Some((n.energy - c.energy).abs() / c.energy.abs().max(f64::MIN_POSITIVE)),
                    });
                }
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.l, a.m, a.branch.unwrap_or(0), a.sign)
            .partial_cmp(&(b.l, b.m, b.branch.unwrap_or(0), b.sign))
            .expect("finite labels")
    });
    rows
}

pub fn kg_rows(l_max: u32, params: &GyroParams) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for l in 0..=l_max {
        let closed = if params.is_symmetric() { Some(kg_lines_symmetric(l, params)?) } else { None };
        rows.extend(pair_lines(closed, kg_energies_numeric(l, params)?));
    }
    Ok(rows)
}

pub fn dirac_rows(l_max: u32, params: &DiracGyroParams) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for l in 0..=l_max {
        rows.extend(pair_lines(closed_form_lines(l, params)?, dirac_energies_numeric(l, params)?));
    }
    Ok(rows)
}

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// `l,m,branch,sign,E_closed,E_numeric,rel_diff` fields of one row.
pub fn csv_fields(row: &Row) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        row.l,
        row.m,
        row.branch.map(|b| b.to_string()).unwrap_or_default(),
        row.sign.symbol(),
        fmt_opt(row.e_closed),
        fmt_num(row.e_numeric),
        fmt_opt(row.rel_diff)
    )
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(80 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", csv_fields(r));
    }
    out
}

pub fn to_json(rows: &[Row]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
}

/// Inverse of [`to_csv`].
pub fn parse_csv(text: &str) -> std::result::Result<Vec<Row>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("unexpected header".into());
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(format!("expected 7 fields: {line}"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s}: {e}"));
            let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
            Ok(Row {
                l: f[0].parse().map_err(|e| format!("{e}"))?,
                m: num(f[1])?,
                branch: if f[2].is_empty() { None } else { Some(f[2].parse().map_err(|e| format!("{e}"))?) },
                sign: match f[3] {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    s => return Err(format!("bad sign {s}")),
                },
                e_closed: opt(f[4])?,
                e_numeric: num(f[5])?,
                rel_diff: opt(f[6])?,
            })
        })
        .collect()
}

/// Largest `rel_diff` per shell, for summaries.
pub fn worst_by_shell(rows: &[Row]) -> BTreeMap<u32, f64> {
    let mut out = BTreeMap::new();
    for r in rows {
        if let Some(d) = r.rel_diff {
            let e = out.entry(r.l).or_insert(0.0f64);
            *e = e.max(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac_gyroscope::DiracGyroParams;

    #[test]
    fn kg_spherical_rows() {
        let rows = kg_rows(1, &GyroParams::default()).unwrap();
        assert_eq!(rows.len(), 8);
        let r = rows.iter().find(|r| r.l == 1 && r.m == 0.0 && r.sign == Sign::Plus).unwrap();
        assert!((r.e_closed.unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!(r.rel_diff.unwrap() < 1e-12);
        let rows = kg_rows(0, &GyroParams::default()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!([rows[0].e_numeric, rows[1].e_numeric], [1.0, -1.0]);
    }

    #[test]
    fn dirac_spherical_rows() {
        let p = DiracGyroParams::abelian(GyroParams::default()).unwrap();
        let rows = dirac_rows(1, &p).unwrap();
        assert_eq!(rows.len(), 4 + 12);
        let count = |e: f64| rows.iter().filter(|r| (r.e_numeric.abs() - e).abs() < 1e-12).count();
        assert_eq!(count(2f64.sqrt()), 8);
        assert_eq!(count(5f64.sqrt()), 4);
        assert!(rows.iter().all(|r| r.rel_diff.unwrap() < 1e-12));
    }

    #[test]
    fn asymmetric_rows_have_no_closed_form() {
        let g = GyroParams::natural(1.0, [1.0, 2.0, 3.0]).unwrap();
        let rows = kg_rows(2, &g).unwrap();
        assert!(rows.iter().all(|r| r.e_closed.is_none() && r.rel_diff.is_none()));
        let csv = to_csv(&rows);
        assert!(csv.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn csv_json_round_trip() {
        let p = DiracGyroParams::abelian(GyroParams::natural(1.0, [1.0, 1.0, 2.0]).unwrap()).unwrap();
        let rows = dirac_rows(2, &p).unwrap();
        let from_csv = parse_csv(&to_csv(&rows)).unwrap();
        let from_json: Vec<Row> = serde_json::from_str(&to_json(&rows)).unwrap();
        assert_eq!(from_csv, rows);
        assert_eq!(from_json, rows);
    }
}
