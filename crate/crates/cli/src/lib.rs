//! Command-line front end: design and config files, the
//! validate/build/analyze/simulate pipeline, sweeps and the catalog.

pub mod config;
pub mod design;
pub mod keyvalue;
pub mod report;

use clap::{Args, Parser, Subcommand};
use config::{defaults_text, load_config, Config, ConfigError};
use design::{load_design, DesignError, DesignFile};
use polydiode::builder::{catalog, find_group, BuildError, DiodeSpec, FixedRoles};
use polydiode::device::DeviceError;
use polydiode::huckel::HuckelError;
use polydiode::molgraph::{GroupRole, ParseError};
use report::{Format, Input, IvRange, Units};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("molecule: {0}")]
    Molecule(ParseError),
    #[error("molecule fails validation: {0}")]
    InvalidMolecule(String),
    #[error(transparent)]
    Build(BuildError),
    #[error(transparent)]
    Huckel(HuckelError),
    #[error(transparent)]
    Device(DeviceError),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl AppError {
    pub fn code(&self) -> &'static str {
        match self {
            AppError::Usage(_) => "E001",
            AppError::Design(DesignError::Io { .. }) | AppError::Config(ConfigError::Io { .. }) => "E002",
            AppError::Output(_) => "E003",
            AppError::Design(DesignError::Syntax(_)) => "E010",
            AppError::Design(DesignError::UnknownKey { .. }) => "E011",
            AppError::Design(DesignError::UnknownGroup { .. }) => "E012",
            AppError::Design(DesignError::Unsupported { .. }) => "E013",
            AppError::Design(DesignError::Structure(_)) => "E014",
            AppError::Config(_) => "E020",
            AppError::Molecule(_) => "E030",
            AppError::InvalidMolecule(_) => "E031",
            AppError::Build(BuildError::BridgeNotAliphatic(_)) => "E041",
            AppError::Build(BuildError::UnknownGroup { .. } | BuildError::RoleMismatch { .. }) => "E042",
            AppError::Build(_) => "E040",
            AppError::Huckel(_) => "E050",
            AppError::Device(DeviceError::AmbiguousLogicLevel { .. }) => "E061",
            AppError::Device(_) => "E060",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// One line, no trailing newline.
    pub fn diagnostic(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("error[{}]: {msg}", self.code())
    }
}

#[derive(Debug, Parser)]
#[command(name = "polydiode", version, about = "Compile and simulate donor-bridge-acceptor molecular diode logic")]
pub struct Cli {
    /// Config file overriding the built-in parameters.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Energy units of orbital tables.
    #[arg(long, global = true, value_enum, default_value = "beta")]
    pub units: Units,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Design file.
    pub design: Option<PathBuf>,
    /// Molecule in linear notation instead of a design file.
    #[arg(long, value_name = "TEXT")]
    pub molecule: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check valence and connectivity of the compiled graph.
    Validate(InputArgs),
    /// Dump the compiled molecular graph.
    Build(InputArgs),
    /// Orbitals, energy profile and diode model.
    Analyze(InputArgs),
    /// Gate truth table, or diode I-V sweep.
    Simulate {
        design: PathBuf,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 40)]
        steps: usize,
    },
    /// Evaluate every catalog design with the given roles pinned.
    Sweep {
        /// Design file supplying ring counts and contact metal.
        design: Option<PathBuf>,
        /// Pin a role, e.g. donor=NH2 (roles: donor, acceptor, bridge).
        #[arg(long = "fix", value_name = "ROLE=NAME", value_parser = parse_fix)]
        fix: Vec<(GroupRole, String)>,
    },
    /// List the functional group catalog.
    Catalog {
        /// Print every configurable default instead.
        #[arg(long)]
        defaults: bool,
    },
}

fn parse_fix(s: &str) -> Result<(GroupRole, String), String> {
    let (role, name) = s
        .split_once('=')
        .ok_or_else(|| format!("expected ROLE=NAME, found '{s}'"))?;
    let role = match role.trim() {
        "donor" | "X" => GroupRole::Donor,
        "acceptor" | "Y" => GroupRole::Acceptor,
        "bridge" | "R" => GroupRole::Insulator,
        other => return Err(format!("unknown role '{other}' (expected donor, acceptor or bridge)")),
    };
    Ok((role, name.trim().to_string()))
}

fn fixed_roles(fix: &[(GroupRole, String)]) -> Result<FixedRoles, AppError> {
    let mut fixed = FixedRoles::default();
    for (role, name) in fix {
        let slot = match role {
            GroupRole::Donor => &mut fixed.donor,
            GroupRole::Acceptor => &mut fixed.acceptor,
            _ => &mut fixed.bridge,
        };
        if slot.is_some() {
            return Err(AppError::Usage(format!("role {role} fixed more than once")));
        }
        let group = find_group(name).ok_or_else(|| {
            AppError::Build(BuildError::UnknownGroup {
                name: name.clone(),
                role: *role,
                known: polydiode::builder::catalog_groups(*role)
                    .iter()
                    .map(|g| g.name.to_string())
                    .collect(),
            })
        })?;
        if group.role != *role {
            return Err(AppError::Build(BuildError::RoleMismatch {
                name: group.name.to_string(),
                expected: *role,
                found: group.role,
            }));
        }
        *slot = Some(group.name.to_string());
    }
    Ok(fixed)
}

fn input(args: InputArgs) -> Result<Input, AppError> {
    match (args.design, args.molecule) {
        (Some(path), None) => Ok(Input::Design(load_design(&path)?)),
        (None, Some(text)) => Ok(Input::Molecule(text)),
        _ => Err(AppError::Usage("give either a design file or --molecule".into())),
    }
}

/// Executes a parsed command, returning the bytes for standard output.
pub fn execute(cli: Cli) -> Result<Vec<u8>, AppError> {
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => Config::default(),
    };
    let unit = cli.units.into();
    match cli.command {
        Command::Validate(args) => {
            let inp = input(args)?;
            let (design, _, graph) = report::compile(&inp)?;
            let out = report::ValidationOutput {
                schema_version: report::SCHEMA_VERSION,
                version: report::TOOL_VERSION.to_string(),
                design,
                validation: polydiode::molgraph::validate_graph(&graph),
            };
            if !out.validation.is_valid() {
                let first = out.validation.violations[0].to_string();
                let n = out.validation.violations.len();
                return Err(AppError::InvalidMolecule(format!("{n} violation(s), first: {first}")));
            }
            Ok(report::render_validation(&out, cli.format))
        }
        Command::Build(args) => {
            let dump = report::graph_dump(&input(args)?)?;
            Ok(report::render_graph(&dump, cli.format))
        }
        Command::Analyze(args) => {
            let r = report::build_report("analyze", &input(args)?, &cfg, unit, None)?;
            Ok(report::render_report(&r, cli.format))
        }
        Command::Simulate { design, from, to, steps } => {
            if steps == 0 || !(from < to) {
                return Err(AppError::Usage("I-V sweep needs --from < --to and --steps > 0".into()));
            }
            let inp = Input::Design(load_design(&design)?);
            let r = report::build_report("simulate", &inp, &cfg, unit, Some(IvRange { from, to, steps }))?;
            match (&r.iv_curve, cli.format) {
                (Some(iv), Format::Text) => Ok(polydiode::device::format_iv(iv).into_bytes()),
                _ => Ok(report::render_report(&r, cli.format)),
            }
        }
        Command::Sweep { design, fix } => {
            let fixed = fixed_roles(&fix)?;
            let template = match design {
                Some(path) => match load_design(&path)? {
                    DesignFile::Diode(d) => d,
                    DesignFile::Gate(g) => g.diode_a,
                },
                None => DiodeSpec::new("NH2", "NO2", "CH2"),
            };
            let s = report::sweep(&fixed, &template, &cfg)?;
            Ok(report::render_sweep(&s, cli.format))
        }
        Command::Catalog { defaults } => {
            if defaults {
                return Ok(defaults_text().into_bytes());
            }
            match cli.format {
                Format::Json => Ok(report::to_json(&catalog())),
                Format::Text => {
                    let mut out = String::from("# name               role       notation             pseudo-site (h, k, n)\n");
                    for g in catalog() {
                        let site = g
                            .pi_pseudo_site
                            .map_or_else(|| "-".to_string(), |p| format!("{}, {}, {}", p.h, p.k, p.n_pi));
                        let mut name = g.name.to_string();
                        if !g.aliases.is_empty() {
                            name = format!("{name} ({})", g.aliases.join(","));
                        }
                        out.push_str(&format!("  {name:<18} {:<10} {:<20} {site}\n", g.role.name(), g.notation));
                    }
                    Ok(out.into_bytes())
                }
            }
        }
    }
}

/// Parses `args` (program name first), runs, and writes results. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(out, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let text = e.render().to_string();
            let summary: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("tip:"))
                .filter(|l| !l.is_empty())
                .collect();
            let summary = summary.join(" ");
            let summary = summary.strip_prefix("error: ").unwrap_or(&summary);
            let _ = writeln!(err, "{}", AppError::Usage(summary.to_string()).diagnostic());
            return 2;
        }
    };
    match execute(cli).and_then(|bytes| out.write_all(&bytes).map_err(|e| AppError::Output(e.to_string()))) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.diagnostic());
            e.exit_code()
        }
    }
}
