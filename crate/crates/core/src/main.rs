use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gyrospec::cli::config::{
    parse_triple, resolve, Command, ConfigFile, Model, OutputFormat, Overrides, ScanSpec, VariantKind,
};
use gyrospec::cli::validate::FaultInjection;
use gyrospec::cli::{emit, execute};
use gyrospec::Error;

#[derive(Parser, Debug)]
#[command(name = "gyrospec", version, about = "Spectra of relativistic quantum gyroscopes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Klein-Gordon spectrum table
    Kg,
    /// Dirac spectrum table
    Dirac,
    /// Covariant identities of a particle system
    Covariant,
    /// Run the validation suite; exit 1 if any check fails
    Validate,
    /// Parameter scan
    Scan,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Abelian,
    Nonabelian,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Kg,
    Dirac,
}

#[derive(clap::Args, Debug)]
struct Opts {
    #[arg(long, global = true)]
    l_max: Option<u32>,
    /// I1,I2,I3
    #[arg(long, global = true, allow_hyphen_values = true)]
    inertia: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mass: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    hbar: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, global = true, value_enum)]
    variant: Option<VariantArg>,
    /// V1,V2,V3
    #[arg(long, global = true, allow_hyphen_values = true)]
    v: Option<String>,
    /// AXIS:START:STOP:STEP with AXIS one of I3_over_I1, mass, v3
    #[arg(long, global = true, allow_hyphen_values = true)]
    scan: Option<String>,
    /// Spectrum computed at each scan point
    #[arg(long, global = true, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Particle system JSON for the covariant command
    #[arg(long, global = true)]
    system: Option<PathBuf>,
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
}

fn overrides(o: &Opts) -> Result<Overrides, Error> {
    Ok(Overrides {
        l_max: o.l_max,
        inertia: o.inertia.as_deref().map(|s| parse_triple("inertia", s)).transpose()?,
        mass: o.mass,
        hbar: o.hbar,
        c: o.c,
        variant: o.variant.map(|v| match v {
            VariantArg::Abelian => VariantKind::Abelian,
            VariantArg::Nonabelian => VariantKind::Nonabelian,
        }),
        v: o.v.as_deref().map(|s| parse_triple("v", s)).transpose()?,
        scan: o.scan.as_deref().map(str::parse::<ScanSpec>).transpose()?,
        output_format: o.format.map(|f| match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }),
        output_path: o.out.clone(),
        model: o.model.map(|m| match m {
            ModelArg::Kg => Model::Kg,
            ModelArg::Dirac => Model::Dirac,
        }),
        system: o.system.clone(),
    })
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let command = match cli.command {
        Cmd::Kg => Command::Kg,
        Cmd::Dirac => Command::Dirac,
        Cmd::Covariant => Command::Covariant,
        Cmd::Validate => Command::Validate,
        Cmd::Scan => Command::Scan,
    };
    let file = cli.opts.config.as_deref().map(ConfigFile::load).transpose()?;
    let cfg = resolve(command, file.as_ref(), &overrides(&cli.opts)?)?;
    let fault = FaultInjection {
        corrupt_inertia_root: cli.opts.inject_fault,
    };
    let outcome = execute(&cfg, fault)?;
    emit(&outcome.text, cfg.output_path.as_deref())?;
    Ok(!outcome.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("gyrospec: validation failed");
            ExitCode::from(1)
        }
        Err(e @ Error::Config { .. }) => {
            eprintln!("gyrospec: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("gyrospec: {e}");
            ExitCode::from(1)
        }
    }
}
