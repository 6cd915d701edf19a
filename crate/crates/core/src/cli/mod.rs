//! Command-line front end: configuration, tables, validation, scans.

pub mod config;
pub mod report;
pub mod scan;
pub mod table;
pub mod validate;

use std::path::Path;

use crate::error::{Error, Result};

use config::{Command, OutputFormat, RunConfig};
use validate::{run_validation, FaultInjection};

/// Result of one command: text to emit and whether validation failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

pub fn execute(cfg: &RunConfig, fault: FaultInjection) -> Result<Outcome> {
    let json = cfg.output_format == OutputFormat::Json;
    let ok = |text: String| Ok(Outcome { text, failed: false });
    match cfg.command {
        Command::Kg => {
            let rows = table::kg_rows(cfg.l_max, &cfg.params)?;
            ok(if json { table::to_json(&rows) } else { table::to_csv(&rows) })
        }
        Command::Dirac => {
            let rows = table::dirac_rows(cfg.l_max, &cfg.dirac_params()?)?;
            ok(if json { table::to_json(&rows) } else { table::to_csv(&rows) })
        }
        Command::Scan => {
            let spec = cfg.scan.ok_or_else(|| Error::config("scan", "missing"))?;
            let rows = scan::run_scan(cfg, &spec)?;
            ok(if json { scan::scan_json(&rows) } else { scan::scan_csv(&rows) })
        }
        Command::Covariant => {
            let sys = match &cfg.system {
                Some(path) => report::load_system(path)?,
                None => report::default_system(),
            };
            let r = report::covariant_report(&sys)?;
            ok(if json {
                serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
            } else {
                report::report_csv(&r)
            })
        }
        Command::Validate => {
            let r = run_validation(cfg, fault);
            let text = if json {
                serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
            } else {
                let mut s = String::from("name,expectation,residual,tolerance,pass\n");
                for c in &r.checks {
                    let exp = serde_json::to_value(c.expectation).expect("enum serializes");
                    s.push_str(&format!(
                        "{},{},{},{},{}\n",
                        c.name,
                        exp.as_str().unwrap_or_default(),
                        table::fmt_num(c.residual),
                        table::fmt_num(c.tolerance),
                        c.pass
                    ));
                }
                s
            };
            Ok(Outcome {
                text,
                failed: !r.all_pass,
            })
        }
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::config("output_path", format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::config("output_path", e.to_string()))
        }
    }
}
