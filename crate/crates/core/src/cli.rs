//! Command-line front end: flag and config-file parsing, dispatch, and exit codes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::cech::Sheaf;
use crate::curve::{build_mirror, parse_builder, Configuration};
use crate::error::Error;
use crate::floer::Scenario;
use crate::report::Report;
use crate::verify::{
    cech_report, check_closed_string, check_homogeneous, check_limit_ring, floer_table, Case, Cutoffs,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CUTOFF: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nodal-mirror", version, about = "Exact mirror symmetry checks for nodal curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true)]
    pub max_weight: Option<u32>,

    #[arg(long, global = true)]
    pub slack: Option<usize>,

    #[arg(long, global = true)]
    pub truncation: Option<u32>,

    #[arg(long, global = true)]
    pub stability_truncation: Option<u32>,

    #[arg(long, global = true)]
    pub max_stage: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Floer group bases and the product table.
    Hf(ScenarioArgs),
    /// Cech cohomology of a sheaf on a configuration.
    Cech(CechArgs),
    /// Even direct limit against its presentation.
    Limit(ScenarioArgs),
    /// Full closed-string comparison.
    Verify(ScenarioArgs),
    /// Homogeneous coordinate rings and modules.
    Homog(HomogArgs),
}

#[derive(Args, Debug, Default)]
pub struct ScenarioArgs {
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKindArg>,
    #[arg(long)]
    pub genus: Option<usize>,
    /// Number of punctures.
    #[arg(short = 'k', long = "punctures")]
    pub k: Option<usize>,
    /// Number of twist circles.
    #[arg(long)]
    pub circles: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub table: bool,
}

#[derive(Args, Debug, Default)]
pub struct CechArgs {
    /// Builder spec such as `nodal:g=3,l=1`.
    #[arg(long)]
    pub builder: Option<String>,
    /// `O`, `L:k`, `Tbal` or `Tbal*L:k`.
    #[arg(long)]
    pub sheaf: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct HomogArgs {
    #[arg(long)]
    pub genus: Option<usize>,
    #[arg(long)]
    pub power: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKindArg {
    Closed,
    Punctured,
    Multi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandName {
    Hf,
    Cech,
    Limit,
    Verify,
    Homog,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioBlock {
    pub kind: Option<ScenarioKindArg>,
    pub genus: Option<usize>,
    pub k: Option<usize>,
    pub circles: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CutoffBlock {
    pub max_weight: Option<u32>,
    pub slack: Option<usize>,
    pub truncation: Option<u32>,
    pub stability_truncation: Option<u32>,
    pub max_stage: Option<usize>,
}

/// A run as read from a config file, before flags are applied.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandName>,
    pub scenario: ScenarioBlock,
    pub degree: Option<usize>,
    pub table: bool,
    pub builder: Option<String>,
    pub configuration: Option<serde_json::Value>,
    pub sheaf: Option<String>,
    pub power: Option<u32>,
    pub cutoffs: CutoffBlock,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Outcome of a run before it is mapped to an exit code.
#[derive(Debug)]
pub enum Outcome {
    Report(Report),
    Usage(String),
    Cutoff(Error),
    Failed(Error),
}

fn missing(field: &str) -> Outcome {
    Outcome::Usage(format!("missing required field '{field}'"))
}

impl RunConfig {
    pub fn parse_json(src: &str) -> Result<Self, String> {
        serde_json::from_str(src).map_err(|e| format!("malformed config: {e}"))
    }

    /// Applies command-line values on top of the file values.
    pub fn apply(&mut self, cli: &Cli) {
        let c = &mut self.cutoffs;
        c.max_weight = cli.max_weight.or(c.max_weight);
        c.slack = cli.slack.or(c.slack);
        c.truncation = cli.truncation.or(c.truncation);
        c.stability_truncation = cli.stability_truncation.or(c.stability_truncation);
        c.max_stage = cli.max_stage.or(c.max_stage);
        self.output = cli.output.clone().or(self.output.take());
        self.format = cli.format.or(self.format);
        let scen = |s: &mut ScenarioBlock, a: &ScenarioArgs| {
            s.kind = a.scenario.or(s.kind);
            s.genus = a.genus.or(s.genus);
            s.k = a.k.or(s.k);
            s.circles = a.circles.or(s.circles);
        };
        match &cli.command {
            None => {}
            Some(Command::Hf(a)) | Some(Command::Limit(a)) | Some(Command::Verify(a)) => {
                self.command = Some(match cli.command {
                    Some(Command::Hf(_)) => CommandName::Hf,
                    Some(Command::Limit(_)) => CommandName::Limit,
                    _ => CommandName::Verify,
                });
                scen(&mut self.scenario, a);
                self.degree = a.degree.or(self.degree);
                self.table |= a.table;
            }
            Some(Command::Cech(a)) => {
                self.command = Some(CommandName::Cech);
                if a.builder.is_some() {
                    self.builder = a.builder.clone();
                    self.configuration = None;
                }
                self.sheaf = a.sheaf.clone().or(self.sheaf.take());
            }
            Some(Command::Homog(a)) => {
                self.command = Some(CommandName::Homog);
                self.scenario.genus = a.genus.or(self.scenario.genus);
                self.power = a.power.or(self.power);
            }
        }
    }

    pub fn cutoffs(&self) -> Cutoffs {
        let d = Cutoffs::default();
        let c = &self.cutoffs;
        Cutoffs {
            max_weight: c.max_weight.unwrap_or(d.max_weight),
            slack: c.slack.unwrap_or(d.slack),
            truncation: c.truncation.unwrap_or(d.truncation),
            stability_truncation: c.stability_truncation.unwrap_or(d.stability_truncation),
            max_stage: c.max_stage,
        }
    }

    fn case(&self) -> Result<Case, Outcome> {
        let s = &self.scenario;
        let genus = s.genus.ok_or_else(|| missing("genus"))?;
        Ok(match s.kind.unwrap_or(ScenarioKindArg::Closed) {
            ScenarioKindArg::Closed => Case::Closed { genus },
            ScenarioKindArg::Punctured => Case::Punctured { genus, k: s.k.unwrap_or(1) },
            ScenarioKindArg::Multi => Case::MultiTwist { genus, circles: s.circles.unwrap_or(2) },
        })
    }

    fn configuration(&self) -> Result<(String, Configuration), Outcome> {
        if let Some(v) = &self.configuration {
            let cfg = Configuration::from_json(&v.to_string()).map_err(|e| Outcome::Usage(e.to_string()))?;
            return Ok(("inline".into(), cfg));
        }
        let spec = self.builder.as_deref().ok_or_else(|| missing("builder"))?;
        let (g, variant) = parse_builder(spec).map_err(|e| Outcome::Usage(e.to_string()))?;
        let cfg = build_mirror(g, variant).map_err(|e| Outcome::Usage(e.to_string()))?;
        Ok((spec.to_string(), cfg))
    }

    fn validate(&self) -> Result<Cutoffs, Outcome> {
        let c = self.cutoffs();
        if c.max_weight == 0 || c.truncation == 0 || c.stability_truncation == 0 {
            return Err(Outcome::Usage("cutoffs must be positive".into()));
        }
        if c.stability_truncation < c.truncation {
            return Err(Outcome::Usage("stability_truncation must be at least truncation".into()));
        }
        Ok(c)
    }

    /// Runs the configured job.
    pub fn run(&self) -> Outcome {
        match self.run_inner() {
            Ok(o) | Err(o) => o,
        }
    }

    fn run_inner(&self) -> Result<Outcome, Outcome> {
        let c = self.validate()?;
        let command = self.command.ok_or_else(|| missing("command"))?;
        let lift = |r: crate::Result<Report>| match r {
            Ok(r) => Outcome::Report(r),
            Err(e) if e.is_cutoff() => Outcome::Cutoff(e),
            Err(e @ (Error::InvalidScenario(_) | Error::InvalidConfiguration(_) | Error::Parse(_))) => {
                Outcome::Usage(e.to_string())
            }
            Err(e) => Outcome::Failed(e),
        };
        Ok(match command {
            CommandName::Hf => {
                let case = self.case()?;
                let degree = self.degree.ok_or_else(|| missing("degree"))?;
                let s = match case {
                    Case::Closed { genus } => Scenario::closed(genus, degree),
                    Case::Punctured { genus, k } => Scenario::punctured(genus, k, degree, degree),
                    Case::MultiTwist { genus, circles } => Scenario::multi_twist(genus, circles, degree),
                };
                lift(s.and_then(|s| floer_table(&s, degree, self.table)))
            }
            CommandName::Cech => {
                let (label, cfg) = self.configuration()?;
                let sheaf: Sheaf = match &self.sheaf {
                    Some(s) => s.parse().map_err(|e: Error| Outcome::Usage(e.to_string()))?,
                    None => Sheaf::O,
                };
                lift(cech_report(&cfg, &label, sheaf, &c))
            }
            CommandName::Limit => lift(check_limit_ring(self.case()?, &c)),
            CommandName::Verify => lift(check_closed_string(self.case()?, &c)),
            CommandName::Homog => {
                let genus = self.scenario.genus.ok_or_else(|| missing("genus"))?;
                lift(check_homogeneous(genus, self.power.unwrap_or(1), &c))
            }
        })
    }

    pub fn render(&self, r: &Report) -> String {
        match self.format.unwrap_or(Format::Text) {
            Format::Json => r.to_json() + "\n",
            Format::Text => r.to_text(),
        }
    }
}

/// Builds the run configuration from parsed flags and an optional config file.
pub fn resolve(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::parse_json(&src)?
        }
        None => RunConfig::default(),
    };
    cfg.apply(cli);
    Ok(cfg)
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    match cfg.run() {
        Outcome::Report(r) => {
            let text = cfg.render(&r);
            match &cfg.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                }
                None => print!("{text}"),
            }
            if r.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Outcome::Usage(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Outcome::Cutoff(e) => {
            eprintln!("error: {e} (raise the cutoffs)");
            EXIT_CUTOFF
        }
        Outcome::Failed(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("nodal-mirror").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_build_a_verify_run() {
        let c = resolve(&cli(&["verify", "--scenario", "closed", "--genus", "2", "--max-weight", "8"])).unwrap();
        assert_eq!(c.command, Some(CommandName::Verify));
        assert_eq!(c.scenario.genus, Some(2));
        assert_eq!(c.cutoffs().max_weight, 8);
        assert_eq!(c.cutoffs().slack, 4);
    }

    #[test]
    fn cech_flags() {
        let c =
            resolve(&cli(&["cech", "--builder", "nodal:g=3,l=1", "--sheaf", "Tbal", "--truncation", "10"])).unwrap();
        assert_eq!(c.command, Some(CommandName::Cech));
        assert_eq!(c.builder.as_deref(), Some("nodal:g=3,l=1"));
        assert_eq!(c.sheaf.as_deref(), Some("Tbal"));
        assert_eq!(c.cutoffs().truncation, 10);
    }

    #[test]
    fn flags_override_file_values() {
        let mut c = RunConfig::parse_json(
            r#"{"command": "limit", "scenario": {"kind": "punctured", "genus": 3, "k": 2}, "cutoffs": {"slack": 2}}"#,
        )
        .unwrap();
        c.apply(&cli(&["--slack", "5", "limit", "--genus", "2"]));
        assert_eq!(c.scenario.genus, Some(2));
        assert_eq!(c.scenario.k, Some(2));
        assert_eq!(c.scenario.kind, Some(ScenarioKindArg::Punctured));
        assert_eq!(c.cutoffs().slack, 5);
    }

    #[test]
    fn missing_genus_names_the_field() {
        let c = resolve(&cli(&["verify", "--scenario", "closed"])).unwrap();
        match c.run() {
            Outcome::Usage(msg) => assert!(msg.contains("genus"), "{msg}"),
            other => panic!("expected a usage error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_config_reports_line() {
        let err = RunConfig::parse_json("{\n  \"command\": \"verify\",\n  \"genus\": 2\n}").unwrap_err();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn zero_cutoffs_are_rejected() {
        let c = resolve(&cli(&["verify", "--genus", "2", "--max-weight", "0"])).unwrap();
        assert!(matches!(c.run(), Outcome::Usage(_)));
    }
}
