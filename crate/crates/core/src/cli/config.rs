//! Run configuration: defaults, JSON config file, command-line overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dirac_gyroscope::{DiracGyroParams, Variant};
use crate::error::{Error, Result};
use crate::kg_gyroscope::GyroParams;

/// Matrix dimension guard: `4(2·50 + 1) = 404`.
pub const L_MAX_LIMIT: u32 = 50;
pub const DEFAULT_L_MAX: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Kg,
    Dirac,
    Covariant,
    Validate,
    Scan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantKind {
    #[default]
    Abelian,
    Nonabelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Spectrum computed at each scan point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Kg,
    #[default]
    Dirac,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Kg => "kg",
            Model::Dirac => "dirac",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanAxis {
    #[serde(rename = "I3_over_I1")]
    I3OverI1,
    #[serde(rename = "mass")]
    Mass,
    #[serde(rename = "v3")]
    V3,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::I3OverI1 => "I3_over_I1",
            ScanAxis::Mass => "mass",
            ScanAxis::V3 => "v3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ScanSpec {
    /// Grid `start, start + step, …` up to `stop` inclusive (with a half-step
    /// allowance for rounding). Values are computed as `start + k·step`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + k as f64 * self.step).collect()
    }

    fn validate(&self) -> Result<()> {
        if ![self.start, self.stop, self.step].iter().all(|x| x.is_finite()) {
            return Err(Error::config("scan", "range values must be finite"));
        }
        if !(self.step > 0.0) {
            return Err(Error::config("scan", "step must be positive"));
        }
        if self.stop < self.start {
            return Err(Error::config("scan", "stop must not be below start"));
        }
        if self.points().len() > 10_000 {
            return Err(Error::config("scan", "more than 10000 grid points"));
        }
        Ok(())
    }
}

impl FromStr for ScanSpec {
    type Err = Error;

    /// `AXIS:START:STOP:STEP`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::config("scan", format!("expected AXIS:START:STOP:STEP, got `{s}`")));
        }
        let axis = match parts[0] {
            "I3_over_I1" => ScanAxis::I3OverI1,
            "mass" => ScanAxis::Mass,
            "v3" => ScanAxis::V3,
            other => {
                return Err(Error::config("scan", format!("unknown axis `{other}` (I3_over_I1, mass, v3)")));
            }
        };
        let num = |i: usize| -> Result<f64> {
            parts[i]
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::config("scan", format!("`{}` is not a number", parts[i])))
        };
        Ok(ScanSpec {
            axis,
            start: num(1)?,
            stop: num(2)?,
            step: num(3)?,
        })
    }
}

/// Fully resolved configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: GyroParams,
    pub variant: VariantKind,
    pub v: Option<[f64; 3]>,
    pub l_max: u32,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub scan: Option<ScanSpec>,
    pub model: Model,
    pub system: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        Self {
            command,
            params: GyroParams::default(),
            variant: VariantKind::Abelian,
            v: None,
            l_max: DEFAULT_L_MAX,
            output_format: OutputFormat::Csv,
            output_path: None,
            scan: None,
            model: Model::Dirac,
            system: None,
        }
    }

    pub fn dirac_params(&self) -> Result<DiracGyroParams> {
        dirac_params(&self.params, self.variant, self.v)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        for (field, v) in [("hbar", p.hbar), ("c", p.c), ("mass", p.mass)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(field, format!("must be positive and finite, got {v}")));
            }
        }
        if p.inertia.iter().any(|i| !(i.is_finite() && *i > 0.0)) {
            return Err(Error::config("inertia", format!("moments must be positive, got {:?}", p.inertia)));
        }
        if self.l_max > L_MAX_LIMIT {
            return Err(Error::config("l_max", format!("{} exceeds the limit {L_MAX_LIMIT}", self.l_max)));
        }
        if let Some(s) = &self.scan {
            s.validate()?;
        }
        match self.command {
            Command::Dirac => {
                self.dirac_params()?;
            }
            Command::Scan => {
                let Some(scan) = self.scan else {
                    return Err(Error::config("scan", "the scan command needs AXIS:START:STOP:STEP"));
                };
                if scan.axis == ScanAxis::V3 {
                    if self.model != Model::Dirac {
                        return Err(Error::config("model", "the v3 axis only applies to the dirac model"));
                    }
                    if !(scan.start >= -1.0 && scan.stop <= 1.0) {
                        return Err(Error::config("scan", "v3 must stay within [-1, 1]"));
                    }
                }
                if scan.axis != ScanAxis::V3 && self.model == Model::Dirac {
                    self.dirac_params()?;
                }
                if scan.axis != ScanAxis::V3 && scan.start <= 0.0 {
                    return Err(Error::config("scan", format!("{} values must be positive", scan.axis.name())));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn dirac_params(params: &GyroParams, variant: VariantKind, v: Option<[f64; 3]>) -> Result<DiracGyroParams> {
    let variant = match variant {
        VariantKind::Abelian => Variant::Abelian,
        VariantKind::Nonabelian => {
            let v = v.ok_or_else(|| Error::config("v", "the nonabelian variant needs a unit vector --v V1,V2,V3"))?;
            Variant::NonAbelian { v }
        }
    };
    DiracGyroParams::new(*params, variant).map_err(|e| match e {
        Error::NotSymmetric { .. } => Error::config("inertia", format!("{e}; the nonabelian variant needs I1 = I2")),
        Error::InvalidParams(m) if m.contains("unit vector") => Error::config("v", m),
        Error::InvalidParams(m) => Error::config("params", m),
        other => other,
    })
}

/// Every field optional; mirrors [`RunConfig`] names.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub params: Option<PartialParams>,
    pub variant: Option<VariantKind>,
    pub v: Option<[f64; 3]>,
    pub l_max: Option<u32>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
    pub scan: Option<ScanField>,
    pub model: Option<Model>,
    pub system: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialParams {
    pub hbar: Option<f64>,
    pub c: Option<f64>,
    pub mass: Option<f64>,
    pub inertia: Option<[f64; 3]>,
}

/// A scan written either as `"AXIS:START:STOP:STEP"` or as an object.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ScanField {
    Text(String),
    Spec(ScanSpec),
}

impl ScanField {
    fn resolve(&self) -> Result<ScanSpec> {
        match self {
            ScanField::Text(s) => s.parse(),
            ScanField::Spec(s) => Ok(*s),
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }
}

/// Values given on the command line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub l_max: Option<u32>,
    pub inertia: Option<[f64; 3]>,
    pub mass: Option<f64>,
    pub hbar: Option<f64>,
    pub c: Option<f64>,
    pub variant: Option<VariantKind>,
    pub v: Option<[f64; 3]>,
    pub scan: Option<ScanSpec>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
    pub model: Option<Model>,
    pub system: Option<PathBuf>,
}

/// Defaults, then the file, then the flags.
pub fn resolve(command: Command, file: Option<&ConfigFile>, flags: &Overrides) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(command);
    if let Some(f) = file {
        if let Some(c) = f.command {
            if c != command {
                return Err(Error::config(
                    "command",
                    format!("config file is for `{c:?}` but `{command:?}` was requested").to_lowercase(),
                ));
            }
        }
        if let Some(p) = f.params {
            cfg.params.hbar = p.hbar.unwrap_or(cfg.params.hbar);
            cfg.params.c = p.c.unwrap_or(cfg.params.c);
            cfg.params.mass = p.mass.unwrap_or(cfg.params.mass);
            cfg.params.inertia = p.inertia.unwrap_or(cfg.params.inertia);
        }
        cfg.variant = f.variant.unwrap_or(cfg.variant);
        cfg.v = f.v.or(cfg.v);
        cfg.l_max = f.l_max.unwrap_or(cfg.l_max);
        cfg.output_format = f.output_format.unwrap_or(cfg.output_format);
        cfg.output_path = f.output_path.clone().or(cfg.output_path);
        if let Some(s) = &f.scan {
            cfg.scan = Some(s.resolve()?);
        }
        cfg.model = f.model.unwrap_or(cfg.model);
        cfg.system = f.system.clone().or(cfg.system);
    }
    cfg.params.hbar = flags.hbar.unwrap_or(cfg.params.hbar);
    cfg.params.c = flags.c.unwrap_or(cfg.params.c);
    cfg.params.mass = flags.mass.unwrap_or(cfg.params.mass);
    cfg.params.inertia = flags.inertia.unwrap_or(cfg.params.inertia);
    cfg.variant = flags.variant.unwrap_or(cfg.variant);
    cfg.v = flags.v.or(cfg.v);
    cfg.l_max = flags.l_max.unwrap_or(cfg.l_max);
    cfg.output_format = flags.output_format.unwrap_or(cfg.output_format);
    cfg.output_path = flags.output_path.clone().or(cfg.output_path);
    cfg.scan = flags.scan.or(cfg.scan);
    cfg.model = flags.model.unwrap_or(cfg.model);
    cfg.system = flags.system.clone().or(cfg.system);
    cfg.validate()?;
    Ok(cfg)
}

/// `A,B,C` as three numbers.
pub fn parse_triple(field: &str, s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::config(field, format!("expected three comma-separated numbers, got `{s}`")));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .map_err(|_| Error::config(field, format!("`{p}` is not a number")))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = ConfigFile::parse(r#"{"params":{"mass":3.0,"inertia":[1,1,2]},"l_max":4}"#).unwrap();
        let flags = Overrides {
            mass: Some(5.0),
            ..Default::default()
        };
        let cfg = resolve(Command::Kg, Some(&file), &flags).unwrap();
        assert_eq!(cfg.params.mass, 5.0);
        assert_eq!(cfg.params.inertia, [1.0, 1.0, 2.0]);
        assert_eq!(cfg.l_max, 4);
        assert_eq!(cfg.params.hbar, 1.0);
        let cfg = resolve(Command::Kg, None, &Overrides::default()).unwrap();
        assert_eq!(cfg, RunConfig::defaults(Command::Kg));
    }

    #[test]
    fn errors_name_the_field() {
        let field = |r: Result<RunConfig>| match r {
            Err(Error::Config { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        let o = |f: fn(&mut Overrides)| {
            let mut x = Overrides::default();
            f(&mut x);
            x
        };
        assert_eq!(field(resolve(Command::Kg, None, &o(|x| x.l_max = Some(51)))), "l_max");
        assert_eq!(field(resolve(Command::Kg, None, &o(|x| x.mass = Some(-1.0)))), "mass");
        assert_eq!(field(resolve(Command::Kg, None, &o(|x| x.inertia = Some([1.0, 0.0, 1.0])))), "inertia");
        assert_eq!(
            field(resolve(Command::Dirac, None, &o(|x| x.variant = Some(VariantKind::Nonabelian)))),
            "v"
        );
        assert_eq!(
            field(resolve(
                Command::Dirac,
                None,
                &o(|x| {
                    x.variant = Some(VariantKind::Nonabelian);
                    x.v = Some([0.0, 0.0, 1.0]);
                    x.inertia = Some([1.0, 2.0, 3.0]);
                })
            )),
            "inertia"
        );
        assert_eq!(field(resolve(Command::Scan, None, &Overrides::default())), "scan");
        assert!(matches!(ConfigFile::parse(r#"{"lmax":3}"#), Err(Error::Config { .. })));
    }

    #[test]
    fn scan_parsing() {
        let s: ScanSpec = "I3_over_I1:0.5:2:0.5".parse().unwrap();
        assert_eq!(s.axis, ScanAxis::I3OverI1);
        assert_eq!(s.points(), vec![0.5, 1.0, 1.5, 2.0]);
        let s: ScanSpec = "v3:-1:1:0.1".parse().unwrap();
        assert_eq!(s.points().len(), 21);
        assert!("spin:0:1:1".parse::<ScanSpec>().is_err());
        assert!("mass:0:1".parse::<ScanSpec>().is_err());
        let file = ConfigFile::parse(r#"{"scan":{"axis":"mass","start":1,"stop":2,"step":1}}"#).unwrap();
        let cfg = resolve(Command::Scan, Some(&file), &Overrides::default()).unwrap();
        assert_eq!(cfg.scan.unwrap().points(), vec![1.0, 2.0]);
    }

    #[test]
    fn triples() {
        assert_eq!(parse_triple("inertia", "1, 2,3").unwrap(), [1.0, 2.0, 3.0]);
        assert!(parse_triple("inertia", "1,2").is_err());
        assert!(parse_triple("v", "a,b,c").is_err());
    }
}
