//! Parameter scans fanned out over a thread pool, emitted in grid order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::config::{dirac_params, Model, RunConfig, ScanAxis, ScanSpec, VariantKind};
use super::table::{csv_fields, dirac_rows, fmt_num, kg_rows, Row};

pub const SCAN_HEADER: &str = "axis,value,model,l,m,branch,sign,E_closed,E_numeric,rel_diff";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub axis: String,
    pub value: f64,
    pub model: String,
    #[serde(flatten)]
    pub row: Row,
}

/// Rows of one grid point.
pub fn scan_point(cfg: &RunConfig, spec: &ScanSpec, value: f64) -> Result<Vec<ScanRow>> {
    let mut params = cfg.params;
    let mut variant = cfg.variant;
    let mut v = cfg.v;
    match spec.axis {
        ScanAxis::I3OverI1 => params.inertia[2] = value * params.inertia[0],
        ScanAxis::Mass => params.mass = value,
        ScanAxis::V3 => {
            variant = VariantKind::Nonabelian;
            v = Some([(1.0 - value * value).max(0.0).sqrt(), 0.0, value]);
        }
    }
    let rows = match cfg.model {
        Model::Kg => kg_rows(cfg.l_max, &params)?,
        Model::Dirac => dirac_rows(cfg.l_max, &dirac_params(&params, variant, v)?)?,
    };
    Ok(rows
        .into_iter()
        .map(|row| ScanRow {
            axis: spec.axis.name().into(),
            value,
            model: cfg.model.name().into(),
            row,
        })
        .collect())
}

pub fn run_scan(cfg: &RunConfig, spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    let per_point: Vec<Result<Vec<ScanRow>>> = spec
        .points()
        .into_par_iter()
        .map(|value| scan_point(cfg, spec, value))
        .collect();
    let mut out = Vec::new();
    for rows in per_point {
        out.extend(rows?);
    }
    Ok(out)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.axis, fmt_num(r.value), r.model, csv_fields(&r.row)));
    }
    out
}

pub fn scan_json(rows: &[ScanRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{resolve, Command, Overrides};

    #[test]
    fn grid_order_and_content() {
        let flags = Overrides {
            scan: Some("mass:1:3:1".parse().unwrap()),
            model: Some(Model::Kg),
            l_max: Some(1),
            ..Default::default()
        };
        let cfg = resolve(Command::Scan, None, &flags).unwrap();
        let rows = run_scan(&cfg, &cfg.scan.unwrap()).unwrap();
        assert_eq!(rows.len(), 3 * 8);
        let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let l0_plus = rows.iter().filter(|r| r.row.l == 0 && r.row.e_numeric > 0.0);
        for (r, m) in l0_plus.zip([1.0, 2.0, 3.0]) {
            assert_eq!(r.row.e_numeric, m);
        }
    }

    #[test]
    fn v3_scan_reaches_the_poles() {
        let flags = Overrides {
            scan: Some("v3:-1:1:0.5".parse().unwrap()),
            inertia: Some([1.0, 1.0, 2.0]),
            l_max: Some(1),
            ..Default::default()
        };
        let cfg = resolve(Command::Scan, None, &flags).unwrap();
        let rows = run_scan(&cfg, &cfg.scan.unwrap()).unwrap();
        assert!(rows.iter().all(|r| r.row.rel_diff.unwrap() < 1e-10));
        let json: Vec<ScanRow> = serde_json::from_str(&scan_json(&rows)).unwrap();
        assert_eq!(json, rows);
    }
}
